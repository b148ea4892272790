#pragma once

#include "zensim/rng.hpp"
#include "zensim/system_model.hpp"

#include <Eigen/Dense>

#include <vector>

namespace zensim {

struct BathSite {
    Eigen::Vector3d position;   // A, relative to the Yb site
    double r = 0;
    double n = 0;               // z direction cosine seen from Yb
};

struct LatticeParams {
    double a = 7.12;   // A
    double c = 6.29;   // A
};

struct BathSpec {
    std::vector<BathSite> sites;
    double cutoff_radius = 25.0;
    double jump_rate = 0.0;      // 1/us
    double gvz = 1.6;
    std::vector<double> yb_coefficients;   // G per unit m_I at the Yb site
};

// V sublattice within the cutoff, nearest six replaced by the tabulated geometry, register ions
// (3-6) excluded.
BathSpec make_bath_spec(double cutoff_radius, double jump_rate, double gvz, LatticeParams lp = {});

// Lattice V sites beyond the register with transverse coupling, sorted by decreasing |l n|/r^3.
std::vector<BathSite> transverse_bath_sites(const BathSpec& spec);

// G per unit m_I at `point` from each bath site.
std::vector<double> field_coefficients(const BathSpec& spec, const Eigen::Vector3d& point);

struct BathState {
    std::vector<double> m;   // m_I per site
    double field = 0;        // B_OH at the Yb site, G
};

double overhauser_field(const BathSpec& spec, const std::vector<double>& m);
double field_at(const std::vector<double>& coefficients, const std::vector<double>& m);

BathState sample_bath(const BathSpec& spec, Rng& rng);
BathState evolve_bath(const BathSpec& spec, const BathState& state, double dt, double jump_rate,
                      Rng& rng);

// Closed-form variance of B_OH at the Yb site, Var(m_I) = 21/4.
double field_variance(const BathSpec& spec);

} // namespace zensim
