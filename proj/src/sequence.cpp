#include "zensim/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace zensim {

const std::vector<ZenPolEntry>& zenpol_table()
{
    static const std::vector<ZenPolEntry> table = {
        {0, Axis::Y, kPi / 2},      {1, Axis::MinusY, kPi},     {2, Axis::MinusX, kPi / 2},
        {3, Axis::X, kPi},          {4, Axis::X, kPi / 2},      {5, Axis::MinusX, kPi},
        {6, Axis::MinusX, kPi / 2}, {7, Axis::MinusY, kPi},     {8, Axis::Y, kPi},
        {8, Axis::X, kPi / 2},      {8, Axis::Y, kPi / 2},
    };
    return table;
}

namespace {

double width_for(double angle) { return angle > 0.75 * kPi ? kPiWidth : kHalfPiWidth; }

std::vector<Pulse> sorted_pulses(const PulseSequence& seq)
{
    std::vector<Pulse> p = seq.pulses;
    std::stable_sort(p.begin(), p.end(), [](const Pulse& a, const Pulse& b) { return a.offset < b.offset; });
    return p;
}

cplx interval_integral(double w, double t0, double t1)
{
    if (std::abs(w) * (t1 - t0) < 1e-12) return cplx(t1 - t0, 0);
    return (std::polar(1.0, w * t1) - std::polar(1.0, w * t0)) / cplx(0, w);
}

// |<m+1|I_x|m>| * 2 for the transition of Q I_z^2 matching omega.
double ladder_factor(double omega, double q)
{
    const double ratio = omega / q;
    if (std::abs(ratio - 6.0) < 0.5) return std::sqrt(7.0);
    if (std::abs(ratio - 4.0) < 0.5) return std::sqrt(12.0);
    if (std::abs(ratio - 2.0) < 0.5) return std::sqrt(15.0);
    return std::sqrt(7.0);
}

} // namespace

PulseSequence build_zenpol(double tau, double b_rf, int M, bool finite_pulses)
{
    if (M < 0) throw std::invalid_argument("build_zenpol: negative repetition count");
    const auto& table = zenpol_table();
    double composite = 0;
    double longest = 0;
    for (const auto& e : table) {
        if (e.boundary == 8) composite += width_for(e.angle);
        longest = std::max(longest, width_for(e.angle));
    }
    if (!(tau > 0)) throw std::invalid_argument("build_zenpol: tau must be positive");
    if (finite_pulses && tau / 4 <= longest + composite)
        throw std::invalid_argument("build_zenpol: tau too small for finite pulses");

    PulseSequence seq;
    seq.kind = SequenceKind::ZenPol;
    seq.period = 2 * tau;
    seq.b_rf = b_rf;
    seq.repetitions = M;
    seq.finite_pulses = finite_pulses;
    const double q = tau / 4;
    double tail = seq.period - composite;
    for (const auto& e : table) {
        Pulse p;
        p.axis = e.axis;
        p.angle = e.angle;
        if (finite_pulses) {
            p.duration = width_for(e.angle);
            if (e.boundary == 0) p.offset = 0;
            else if (e.boundary == 8) {
                p.offset = tail;
                tail += p.duration;
            } else p.offset = e.boundary * q - p.duration / 2;
        } else {
            p.offset = e.boundary * q;
        }
        seq.pulses.push_back(p);
        seq.boundary.push_back(e.boundary);
    }
    return seq;
}

double zenpol_tau_for(double omega, int k)
{
    // k-th harmonic of 1/2tau equals omega/2pi.
    return kPi * k / omega;
}

PulseSequence build_xy8(double t_w, int M)
{
    if (!(t_w > 0)) throw std::invalid_argument("build_xy8: t_w must be positive");
    const Axis phases[8] = {Axis::X, Axis::Y, Axis::X, Axis::Y, Axis::Y, Axis::X, Axis::Y, Axis::X};
    PulseSequence seq;
    seq.kind = SequenceKind::XY8;
    seq.period = 16 * t_w;
    seq.repetitions = M;
    for (int k = 0; k < 8; ++k) seq.pulses.push_back({t_w + 2 * k * t_w, phases[k], kPi, 0});
    return seq;
}

PulseSequence build_hartmann_hahn(double rabi, double t)
{
    if (rabi < 0) throw std::invalid_argument("build_hartmann_hahn: negative Rabi frequency");
    PulseSequence seq;
    seq.kind = SequenceKind::HartmannHahn;
    seq.period = t;
    seq.drive_rabi = rabi;
    seq.pulses.push_back({0, Axis::MinusX, kPi / 2, 0});
    seq.pulses.push_back({t, Axis::X, kPi / 2, 0});
    return seq;
}

PulseSequence build_direct_drive(double b_osc, double omega, double t, double decouple_period)
{
    PulseSequence seq;
    seq.kind = SequenceKind::DirectDrive;
    seq.period = t;
    seq.b_osc = b_osc;
    seq.drive_omega = omega;
    seq.decouple_period = decouple_period;
    if (decouple_period > 0) {
        const int n = static_cast<int>(std::floor(t / decouple_period + 1e-9));
        if (n % 2 != 0)
            throw std::invalid_argument("build_direct_drive: odd number of decoupling pi pulses");
        for (int k = 0; k < n; ++k) seq.pulses.push_back({(k + 0.5) * decouple_period, Axis::X, kPi, 0});
    }
    return seq;
}

PulseSequence with_angle_error(const PulseSequence& seq, double eps)
{
    PulseSequence out = seq;
    for (auto& p : out.pulses) p.angle *= 1.0 + eps;
    return out;
}

TogglingFrame toggling_frame(const PulseSequence& seq)
{
    for (const auto& p : seq.pulses) {
        const double a = std::abs(p.angle);
        if (std::abs(a - kPi / 2) > 0.05 * kPi && std::abs(a - kPi) > 0.05 * kPi)
            throw std::invalid_argument("toggling_frame: unsupported pulse angle");
    }
    const auto q = spin_operators(0.5);
    const Matrix ops[3] = {q.ix, q.iy, q.iz};
    TogglingFrame frame;
    frame.period = seq.period;
    Matrix U = Matrix::Identity(2, 2);
    double t = 0;
    auto close = [&](double t1) {
        if (t1 - t <= 1e-12) return;
        const Matrix s = conjugate(U, q.iz);
        ToggleInterval iv;
        iv.t0 = t;
        iv.t1 = t1;
        double f[3];
        for (int a = 0; a < 3; ++a) f[a] = 2.0 * (ops[a] * s).trace().real();
        const double mid = 0.5 * (iv.t0 + iv.t1);
        const double sq = (seq.b_rf != 0 || seq.kind == SequenceKind::ZenPol) ? (mid < seq.period / 2 ? 1.0 : -1.0) : 1.0;
        iv.rf_sign = sq;
        iv.fx_oh = f[0];
        iv.fy_oh = f[1];
        iv.fz_oh = f[2];
        iv.fx_rf = sq * f[0];
        iv.fy_rf = sq * f[1];
        iv.fz_rf = sq * f[2];
        frame.intervals.push_back(iv);
        t = t1;
    };
    for (const auto& p : sorted_pulses(seq)) {
        close(p.offset + p.duration / 2);
        U = rotation_pulse(p.axis, p.angle) * U;
    }
    close(seq.period);
    return frame;
}

FilterValue filter_function(const TogglingFrame& frame, double omega)
{
    FilterValue f{};
    for (const auto& iv : frame.intervals) {
        const cplx I = interval_integral(omega, iv.t0, iv.t1) / frame.period;
        f.x_oh += iv.fx_oh * I;
        f.y_oh += iv.fy_oh * I;
        f.z_oh += iv.fz_oh * I;
        f.x_rf += iv.fx_rf * I;
        f.y_rf += iv.fy_rf * I;
        f.z_rf += iv.fz_rf * I;
    }
    return f;
}

Matrix averaged_hamiltonian(const TogglingFrame& frame, const SpinSystem& sys, double b_oh, double b_rf)
{
    const int d = sys.dim();
    // Rotating frame of H0 = sum_i q_i I_z^2, diagonal in the product basis.
    Eigen::VectorXd E = Eigen::VectorXd::Zero(d);
    Matrix N = Matrix::Zero(d, d);
    for (int i = 0; i < sys.n_spins(); ++i) {
        const auto& s = sys.spins()[i];
        E += s.q * sys.iz2(i).diagonal().real();
        N += s.a_x * sys.ix(i) + s.a_z * sys.iz(i);
    }
    Matrix H = Matrix::Zero(d, d);
    for (const auto& iv : frame.intervals) {
        const double B = b_oh + iv.rf_sign * b_rf;
        const Matrix S = iv.fx_oh * sys.sx() + iv.fy_oh * sys.sy() + iv.fz_oh * sys.sz();
        Matrix Nt(d, d);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
                Nt(m, n) = N(m, n) == cplx(0) ? cplx(0) : N(m, n) * interval_integral(E(m) - E(n), iv.t0, iv.t1);
        const double B_hf = sys.toggles().knight ? B : iv.rf_sign * b_rf;
        H += detuning(sys.qubit(), B) * (iv.t1 - iv.t0) * S + B_hf * S * Nt;
    }
    H /= frame.period;
    return 0.5 * (H + H.adjoint());
}

AverageHamiltonianReport average_hamiltonian(const PulseSequence& seq, const SpinSystem& sys, int k, double omega)
{
    if (k % 2 == 0)
        throw std::invalid_argument("average_hamiltonian: even k is an Overhauser resonance, not engineered exchange");
    if (sys.n_spins() == 0) throw std::invalid_argument("average_hamiltonian: no nuclear spins");
    const auto frame = toggling_frame(seq);

    // Single-ion reduced system carrying the first spin.
    auto spin = sys.spins().front();
    const SpinSystem one(sys.qubit(), sys.vanadium(), Representation::Reduced, {spin}, sys.toggles());
    AverageHamiltonianReport rep;
    rep.k = k;
    rep.omega = omega;
    rep.h_avg = averaged_hamiltonian(frame, one, 0.0, 1.0);
    // Basis: (qubit, level) -> 2*q + l; |1_g down>=0, |1_g up>=1, |0_g down>=2, |0_g up>=3.
    const cplx e1 = rep.h_avg(0, 3), e2 = rep.h_avg(1, 2);
    rep.b_numeric = std::max(std::abs(e1), std::abs(e2));
    rep.counter_rotating = std::min(std::abs(e1), std::abs(e2));
    rep.basis_angle = std::arg(std::abs(e1) >= std::abs(e2) ? e1 : e2);

    const auto F = filter_function(frame, omega);
    const double lf = ladder_factor(omega, spin.q);
    const double c1 = std::abs(F.x_rf - cplx(0, 1) * F.y_rf) / 2;
    const double c2 = std::abs(F.x_rf + cplx(0, 1) * F.y_rf) / 2;
    rep.b_filter = lf * spin.a_x / 2 * std::max(c1, c2);
    rep.b_closed_form = (k == 5 && std::abs(omega / spin.q - 6) < 0.5)
                            ? std::sqrt(7.0) * (std::sqrt(2.0) + 2.0) * spin.a_x / (10 * kPi)
                            : rep.b_filter;

    rep.residual_oh = averaged_hamiltonian(frame, one, 1.0, 0.0).cwiseAbs().maxCoeff();
    // Qubit-only averages multiplying B_OH^2 + B_RF^2 and the 2 B_OH B_RF cross term.
    double sx = 0, sy = 0, sz = 0, rx = 0, ry = 0, rz = 0;
    for (const auto& iv : frame.intervals) {
        const double w = (iv.t1 - iv.t0) / frame.period;
        sx += w * iv.fx_oh;
        sy += w * iv.fy_oh;
        sz += w * iv.fz_oh;
        rx += w * iv.fx_rf;
        ry += w * iv.fy_rf;
        rz += w * iv.fz_rf;
    }
    rep.residual_detuning = std::max(std::sqrt(sx * sx + sy * sy + sz * sz), std::sqrt(rx * rx + ry * ry + rz * rz));
    return rep;
}

std::string to_string(Axis a)
{
    switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::MinusX: return "-x";
    case Axis::MinusY: return "-y";
    }
    return "?";
}

Axis parse_axis(const std::string& s)
{
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    if (s == "-x") return Axis::MinusX;
    if (s == "-y") return Axis::MinusY;
    throw std::invalid_argument("unknown axis '" + s + "'");
}

std::string serialize(const PulseSequence& seq)
{
    static const char* kinds[] = {"free", "zenpol", "xy8", "hartmann-hahn", "direct-drive"};
    std::ostringstream os;
    os << std::setprecision(9);
    os << "sequence " << kinds[static_cast<int>(seq.kind)] << "\n";
    os << "period_us " << seq.period << "\n";
    os << "repetitions " << seq.repetitions << "\n";
    os << "rf_gauss " << seq.b_rf << "\n";
    if (seq.drive_rabi != 0) os << "drive_rabi_rad_per_us " << seq.drive_rabi << "\n";
    if (seq.b_osc != 0) os << "drive_gauss " << seq.b_osc << " omega_rad_per_us " << seq.drive_omega << "\n";
    int k = 0;
    for (const auto& p : seq.pulses) {
        const bool half = std::abs(p.angle - kPi / 2) < 1e-12;
        os << "pulse " << k++ << " offset_us " << p.offset << " axis " << to_string(p.axis) << " angle "
           << (half ? "pi/2" : (std::abs(p.angle - kPi) < 1e-12 ? "pi" : std::to_string(p.angle)))
           << " duration_us " << p.duration << "\n";
    }
    return os.str();
}

Matrix period_pulse_product(const PulseSequence& seq)
{
    Matrix U = Matrix::Identity(2, 2);
    for (const auto& p : sorted_pulses(seq)) U = rotation_pulse(p.axis, p.angle) * U;
    return U;
}

} // namespace zensim
