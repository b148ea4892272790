#include "zensim/system_model.hpp"

#include <cmath>
#include <stdexcept>

namespace zensim {

namespace {

constexpr double kRegisterR = 3.9;
constexpr double kBathR = 3.1;

// Dipolar coupling prefactor mu0 / 4 pi r^3 times gamma_z^2 / omega01 in SI, dimension
// T^2 m / (A s) ... collapsed to the dimensionless amplification ratio used by A_x, A_z.
double amplification_scale(const QubitConstants& qc, double r)
{
    const double gamma_si = qc.gamma_z / PhysicalConstants::per_second_to_per_us
                            / PhysicalConstants::tesla_per_gauss;
    const double omega_si = qc.omega01 / PhysicalConstants::per_second_to_per_us;
    const double r_si = r * PhysicalConstants::metre_per_angstrom;
    return PhysicalConstants::mu0 * PhysicalConstants::hbar * gamma_si * gamma_si
           / (8.0 * kPi * r_si * r_si * r_si * omega_si);
}

} // namespace

double QubitConstants::gamma_from_g() const
{
    return std::abs(gz) * PhysicalConstants::muB / PhysicalConstants::h * 1e-4 * 1e-6;
}

bool QubitConstants::gamma_consistent() const
{
    const double a = gamma_from_g();
    const double b = gamma_z / kTwoPi;
    return std::abs(a - b) / b < 5e-3;
}

RegisterGeometry RegisterGeometry::tabulated()
{
    RegisterGeometry g;
    auto add = [&](int idx, int shell, double r, double l, double m, double n, Classification c) {
        g.ions.push_back({idx, shell, r, Eigen::Vector3d(l, m, n), c});
    };
    add(1, 1, kBathR, 0, 0, -1, Classification::BathByPosition);
    add(2, 1, kBathR, 0, 0, 1, Classification::BathByPosition);
    add(3, 2, kRegisterR, 0, -0.91, 0.40, Classification::Register);
    add(4, 2, kRegisterR, 0, 0.91, 0.40, Classification::Register);
    add(5, 2, kRegisterR, -0.91, 0, -0.40, Classification::Register);
    add(6, 2, kRegisterR, 0.91, 0, -0.40, Classification::Register);
    return g;
}

std::vector<Ion> RegisterGeometry::register_ions() const
{
    std::vector<Ion> out;
    for (const auto& ion : ions)
        if (ion.cls == Classification::Register) out.push_back(ion);
    return out;
}

Coupling ion_coupling(double r, const Eigen::Vector3d& dir, const QubitConstants& qc,
                      const VanadiumConstants& vc)
{
    if (!(r > 0)) throw std::invalid_argument("coupling_constants: r must be positive");
    const double s = amplification_scale(qc, r);
    const double l = dir.x(), m = dir.y(), n = dir.z();
    const double mun = PhysicalConstants::muN_rad_per_us_per_G;
    Coupling c;
    // J = 3 mu0 muN gz^2 gv (..) / 4 pi r^3 omega01 = 2 muN gv * [3 (..) mu0 hbar gz^2 / 8 pi r^3 omega01]
    c.jx = 2.0 * mun * vc.gvx * 3.0 * l * n * s;
    c.jy = 2.0 * mun * vc.gvx * 3.0 * m * n * s;
    c.jz = 2.0 * mun * vc.gvz * (3.0 * n * n - 1.0) * s;
    c.a_x = std::hypot(c.jx, c.jy);
    c.a_z = c.jz;
    c.amp_x = std::abs(3.0 * std::hypot(l, m) * n * s);
    c.amp_z = (1.0 - 3.0 * n * n) * s;
    return c;
}

CouplingSet coupling_constants(const RegisterGeometry& geometry, const QubitConstants& qc,
                               const VanadiumConstants& vc)
{
    CouplingSet cs;
    for (const auto& ion : geometry.ions) cs.per_ion.push_back(ion_coupling(ion.r, ion.dir, qc, vc));
    return cs;
}

Representation parse_representation(const std::string& s)
{
    if (s == "full") return Representation::Full;
    if (s == "reduced") return Representation::Reduced;
    if (s == "mixed") return Representation::Mixed;
    throw std::invalid_argument("unknown representation '" + s + "'");
}

std::string to_string(Representation r)
{
    switch (r) {
    case Representation::Full: return "full";
    case Representation::Reduced: return "reduced";
    case Representation::Mixed: return "mixed";
    }
    return "?";
}

std::vector<double> kept_projections(Representation rep)
{
    switch (rep) {
    case Representation::Full: return {3.5, 2.5, 1.5, 0.5, -0.5, -1.5, -2.5, -3.5};
    case Representation::Reduced: return {3.5, 2.5};
    case Representation::Mixed: return {3.5, 2.5, 1.5};
    }
    throw std::invalid_argument("unknown representation");
}

namespace {

// Rows of the spin-7/2 basis kept for manifold sign s.
Eigen::MatrixXd projector(Representation rep, int sign)
{
    const auto m = kept_projections(rep);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(8, static_cast<Eigen::Index>(m.size()));
    for (std::size_t k = 0; k < m.size(); ++k) {
        const double mk = rep == Representation::Full ? m[k] : sign * m[k];
        const int row = static_cast<int>(std::lround(3.5 - mk));
        P(row, static_cast<Eigen::Index>(k)) = 1.0;
    }
    return P;
}

Matrix project(const Matrix& op, Representation rep, int sign)
{
    const Matrix P = projector(rep, sign).cast<cplx>();
    return P.adjoint() * op * P;
}

} // namespace

SpinSystem::SpinSystem(QubitConstants qc, VanadiumConstants vc, Representation rep,
                       std::vector<NuclearSpin> spins, TermToggles toggles)
    : qc_(qc), vc_(vc), rep_(rep), spins_(std::move(spins)), toggles_(toggles)
{
    levels_ = static_cast<int>(kept_projections(rep_).size());
    dim_ = 2;
    for (std::size_t i = 0; i < spins_.size(); ++i) dim_ *= levels_;
    if (dim_ > 4096) throw std::invalid_argument("SpinSystem: Hilbert space too large");
    auto ops = std::make_shared<Ops>();
    const auto d = dims();
    const auto q = spin_operators(0.5);
    ops->sz = embed<double>(q.iz, 0, d);
    ops->sx = embed<double>(q.ix, 0, d);
    ops->sy = embed<double>(q.iy, 0, d);
    for (int i = 0; i < n_spins(); ++i) {
        ops->ix.push_back(embed<double>(local_ix(i), i + 1, d));
        ops->iy.push_back(embed<double>(local_iy(i), i + 1, d));
        ops->iz.push_back(embed<double>(local_iz(i), i + 1, d));
        const Matrix lz = local_iz(i);
        ops->iz2.push_back(embed<double>(lz * lz, i + 1, d));
    }
    ops_ = ops;
}

std::vector<int> SpinSystem::dims() const
{
    std::vector<int> d{2};
    for (int i = 0; i < n_spins(); ++i) d.push_back(levels_);
    return d;
}

Matrix SpinSystem::local_ix(int i) const
{
    return project(spin_operators(3.5).ix, rep_, spins_[i].manifold);
}
Matrix SpinSystem::local_iy(int i) const
{
    return project(spin_operators(3.5).iy, rep_, spins_[i].manifold);
}
Matrix SpinSystem::local_iz(int i) const
{
    return project(spin_operators(3.5).iz, rep_, spins_[i].manifold);
}

Matrix SpinSystem::qubit_op(const Matrix& op2) const { return embed<double>(op2, 0, dims()); }

int SpinSystem::index(int qubit, const std::vector<int>& level) const
{
    int idx = qubit;
    for (int i = 0; i < n_spins(); ++i) idx = idx * levels_ + level[i];
    return idx;
}

SpinSystem SpinSystem::with_toggles(TermToggles t) const
{
    SpinSystem s = *this;
    s.toggles_ = t;
    return s;
}

SpinSystem SpinSystem::with_field_at_sites(const std::vector<double>& fields) const
{
    SpinSystem s = *this;
    for (int i = 0; i < n_spins() && i < static_cast<int>(fields.size()); ++i)
        s.spins_[i].site_field = fields[i];
    return s;
}

SpinSystem make_register_system(const QubitConstants& qc, const VanadiumConstants& vc,
                                Representation rep, const std::vector<int>& signs,
                                const std::vector<bool>& present, TermToggles toggles)
{
    const auto geo = RegisterGeometry::tabulated();
    const auto reg = geo.register_ions();
    std::vector<NuclearSpin> spins;
    for (std::size_t k = 0; k < reg.size(); ++k) {
        if (k < present.size() && !present[k]) continue;
        const auto c = ion_coupling(reg[k].r, reg[k].dir, qc, vc);
        NuclearSpin s;
        s.position = reg[k].position();
        s.a_x = c.a_x;
        s.a_z = c.a_z;
        s.q = vc.q_register;
        s.manifold = k < signs.size() ? signs[k] : +1;
        spins.push_back(s);
    }
    return SpinSystem(qc, vc, rep, std::move(spins), toggles);
}

double detuning(const QubitConstants& qc, double B)
{
    return qc.gamma_z * qc.gamma_z * B * B / (2.0 * qc.omega01);
}

Matrix full_hamiltonian(const SpinSystem& sys, double B_OH, double B_RF)
{
    const double B = B_OH + B_RF;
    Matrix H = detuning(sys.qubit(), B) * sys.sz();
    Matrix coupling = Matrix::Zero(sys.dim(), sys.dim());
    for (int i = 0; i < sys.n_spins(); ++i) {
        const auto& s = sys.spins()[i];
        H += s.q * sys.iz2(i);
        coupling += s.a_x * sys.ix(i) + s.a_z * sys.iz(i);
    }
    // Without the Knight field the induced Yb dipole follows the RF field only.
    const double B_hf = sys.toggles().knight ? B : B_RF;
    // S_z is diag(+1/2 on |1_g> block, -1/2 on |0_g> block).
    const Eigen::Index h = sys.dim() / 2;
    H.topRows(h) += 0.5 * B_hf * coupling.topRows(h);
    H.bottomRows(h) -= 0.5 * B_hf * coupling.bottomRows(h);
    return 0.5 * (H + H.adjoint());
}

double dipolar_prefactor(const VanadiumConstants& vc, double r_angstrom, double g)
{
    const double gv = g == 0 ? vc.gvz : g;
    const double r = r_angstrom * PhysicalConstants::metre_per_angstrom;
    const double mu = PhysicalConstants::muN * gv;
    // energy in J -> rad/us
    return PhysicalConstants::mu0 / (4.0 * kPi) * mu * mu / (r * r * r) / PhysicalConstants::hbar
           * PhysicalConstants::per_second_to_per_us;
}

double enhanced_ising_prefactor(const QubitConstants& qc, const VanadiumConstants& vc, double r,
                                double n)
{
    // (3n^2-1) mu0 muN gamma_z gvz / 4 pi r^3 in rad/us per unit I_z (gamma_z in rad/us/G).
    const double r_si = r * PhysicalConstants::metre_per_angstrom;
    const double field_per_muN = PhysicalConstants::mu0 * PhysicalConstants::muN * vc.gvz
                                 / (4.0 * kPi * r_si * r_si * r_si) / PhysicalConstants::tesla_per_gauss;
    const double x = (3.0 * n * n - 1.0) * qc.gamma_z * field_per_muN;
    return x * x / (2.0 * qc.omega01);
}

Matrix extra_terms(const SpinSystem& sys)
{
    Matrix H = Matrix::Zero(sys.dim(), sys.dim());
    const auto& vc = sys.vanadium();
    const double mun = PhysicalConstants::muN_rad_per_us_per_G;
    const int n = sys.n_spins();
    if (sys.toggles().nuclear_zeeman)
        for (int i = 0; i < n; ++i) H += mun * vc.gvz * sys.spins()[i].site_field * sys.iz(i);
    if (sys.toggles().register_dipolar) {
        // Secular-free full dipole form with isotropic nuclear moments gvz.
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const Eigen::Vector3d d = sys.spins()[j].position - sys.spins()[i].position;
                const double r = d.norm();
                const Eigen::Vector3d u = d / r;
                const double c = dipolar_prefactor(vc, r);
                const Matrix a[3] = {sys.local_ix(i), sys.local_iy(i), sys.local_iz(i)};
                const Matrix b[3] = {sys.local_ix(j), sys.local_iy(j), sys.local_iz(j)};
                for (int p = 0; p < 3; ++p)
                    for (int q = 0; q < 3; ++q) {
                        const double w = (p == q ? 1.0 : 0.0) - 3.0 * u(p) * u(q);
                        if (std::abs(w) > 1e-15) H += c * w * embed2<double>(a[p], i + 1, b[q], j + 1, sys.dims());
                    }
            }
    }
    if (sys.toggles().enhanced_ising) {
        // Diagonal in the product basis: accumulate S_z I_z^i I_z^j on the diagonal.
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(sys.dim());
        Eigen::VectorXd sz = sys.sz().diagonal().real();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const auto& p = sys.spins()[i].position;
                const double r = p.norm();
                const double k = enhanced_ising_prefactor(sys.qubit(), vc, r, p.z() / r);
                diag += k * (sz.array() * sys.iz(i).diagonal().real().array()
                             * sys.iz(j).diagonal().real().array()).matrix();
            }
        H.diagonal() += diag.cast<cplx>();
    }
    return 0.5 * (H + H.adjoint());
}

Matrix knight_field_hamiltonian(const SpinSystem& sys, double B_OH, YbState yb)
{
    Matrix H = Matrix::Zero(sys.dim(), sys.dim());
    const double mun = PhysicalConstants::muN_rad_per_us_per_G;
    const double sign = yb == YbState::Excited1 ? -1.0 : 1.0;
    for (int i = 0; i < sys.n_spins(); ++i) {
        // a_z = -2 muN gvz A_z, so gvz muN A_z = -a_z/2.
        const double amp_z = -sys.spins()[i].a_z / (2.0 * mun * sys.vanadium().gvz);
        H += sign * sys.vanadium().gvz * mun * B_OH * amp_z * sys.iz(i);
    }
    return H;
}

Matrix drive_hamiltonian(const SpinSystem& sys, double B_osc, double phase, double t, double omega,
                         int yb_sign)
{
    Matrix H = Matrix::Zero(sys.dim(), sys.dim());
    const double f = B_osc * std::sin(omega * t + phase) * yb_sign;
    for (int i = 0; i < sys.n_spins(); ++i) {
        // mu_N g_vx A_x = a_x / 2
        H += 0.5 * sys.spins()[i].a_x * f * sys.ix(i);
    }
    return H;
}

double direct_drive_rabi(const SpinSystem& sys, double B_osc)
{
    if (sys.n_spins() == 0) return 0;
    return std::sqrt(7.0) * 0.5 * sys.spins()[0].a_x * B_osc / 2.0;
}

} // namespace zensim
