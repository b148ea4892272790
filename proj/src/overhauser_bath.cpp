#include "zensim/overhauser_bath.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zensim {

namespace {

double site_coefficient(const Eigen::Vector3d& d, double gvz)
{
    const double r = d.norm();
    const double n = d.z() / r;
    const double r_si = r * PhysicalConstants::metre_per_angstrom;
    return PhysicalConstants::mu0 * PhysicalConstants::muN * gvz * (3.0 * n * n - 1.0)
           / (4.0 * kPi * r_si * r_si * r_si) / PhysicalConstants::tesla_per_gauss;
}

std::vector<Eigen::Vector3d> lattice_points(double cutoff, const LatticeParams& lp)
{
    const double basis[4][3] = {{0, 0, 0.5}, {0, 0.5, 0.25}, {0.5, 0.5, 0}, {0.5, 0, -0.25}};
    const int na = static_cast<int>(std::ceil(cutoff / lp.a)) + 1;
    const int nc = static_cast<int>(std::ceil(cutoff / lp.c)) + 1;
    std::vector<Eigen::Vector3d> pts;
    for (int i = -na; i <= na; ++i)
        for (int j = -na; j <= na; ++j)
            for (int k = -nc; k <= nc; ++k)
                for (const auto& b : basis) {
                    Eigen::Vector3d p((i + b[0]) * lp.a, (j + b[1]) * lp.a, (k + b[2]) * lp.c);
                    if (p.norm() <= cutoff) pts.push_back(p);
                }
    std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) {
        if (std::abs(x.norm() - y.norm()) > 1e-9) return x.norm() < y.norm();
        return std::lexicographical_compare(x.data(), x.data() + 3, y.data(), y.data() + 3);
    });
    return pts;
}

} // namespace

BathSpec make_bath_spec(double cutoff_radius, double jump_rate, double gvz, LatticeParams lp)
{
    if (!(cutoff_radius > 3.9)) throw std::invalid_argument("bath: cutoff radius must exceed 3.9 A");
    if (jump_rate < 0) throw std::invalid_argument("bath: jump rate must be non-negative");
    BathSpec spec;
    spec.cutoff_radius = cutoff_radius;
    spec.jump_rate = jump_rate;
    spec.gvz = gvz;
    const auto geo = RegisterGeometry::tabulated();
    auto pts = lattice_points(cutoff_radius, lp);
    // pts[0..1] are the first shell, pts[2..5] the register shell.
    for (const auto& ion : geo.ions)
        if (ion.cls == Classification::BathByPosition)
            spec.sites.push_back({ion.position(), ion.r, ion.dir.z()});
    for (std::size_t k = 6; k < pts.size(); ++k) {
        const double r = pts[k].norm();
        spec.sites.push_back({pts[k], r, pts[k].z() / r});
    }
    spec.yb_coefficients = field_coefficients(spec, Eigen::Vector3d::Zero());
    return spec;
}

std::vector<BathSite> transverse_bath_sites(const BathSpec& spec)
{
    std::vector<BathSite> out;
    for (const auto& s : spec.sites)
        if (std::abs(std::sqrt(std::max(0.0, 1 - s.n * s.n)) * s.n) > 1e-9) out.push_back(s);
    std::stable_sort(out.begin(), out.end(), [](const BathSite& x, const BathSite& y) {
        auto w = [](const BathSite& s) {
            return std::abs(std::sqrt(1 - s.n * s.n) * s.n) / (s.r * s.r * s.r);
        };
        return w(x) > w(y) + 1e-15;
    });
    return out;
}

std::vector<double> field_coefficients(const BathSpec& spec, const Eigen::Vector3d& point)
{
    std::vector<double> k;
    k.reserve(spec.sites.size());
    for (const auto& s : spec.sites) {
        const Eigen::Vector3d d = s.position - point;
        k.push_back(d.norm() < 1e-9 ? 0.0 : site_coefficient(d, spec.gvz));
    }
    return k;
}

double field_at(const std::vector<double>& coefficients, const std::vector<double>& m)
{
    double b = 0;
    for (std::size_t i = 0; i < m.size(); ++i) b += coefficients[i] * m[i];
    return b;
}

double overhauser_field(const BathSpec& spec, const std::vector<double>& m)
{
    return field_at(spec.yb_coefficients, m);
}

BathState sample_bath(const BathSpec& spec, Rng& rng)
{
    if (spec.sites.empty()) throw std::invalid_argument("sample_bath: empty site list");
    BathState st;
    st.m.resize(spec.sites.size());
    for (auto& m : st.m) m = -3.5 + uniform_int(rng, 8);
    st.field = overhauser_field(spec, st.m);
    return st;
}

BathState evolve_bath(const BathSpec& spec, const BathState& state, double dt, double jump_rate,
                      Rng& rng)
{
    if (jump_rate < 0) throw std::invalid_argument("evolve_bath: negative jump rate");
    BathState st = state;
    if (jump_rate == 0 || dt <= 0) return st;
    for (auto& m : st.m) {
        const int n = poisson_sample(rng, jump_rate * dt);
        for (int k = 0; k < n; ++k) {
            // Symmetric proposal with rejection at the ends keeps the uniform stationary law.
            const double next = m + (uniform01(rng) < 0.5 ? -1.0 : 1.0);
            if (next >= -3.5 && next <= 3.5) m = next;
        }
    }
    st.field = overhauser_field(spec, st.m);
    return st;
}

double field_variance(const BathSpec& spec)
{
    double v = 0;
    for (double k : spec.yb_coefficients) v += k * k;
    return v * 21.0 / 4.0;
}

} // namespace zensim
