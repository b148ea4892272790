#pragma once

#include "zensim/spin_algebra.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace zensim {

// CODATA 2018, SI.
struct PhysicalConstants {
    static constexpr double mu0 = 1.25663706212e-6;
    static constexpr double muB = 9.2740100783e-24;
    static constexpr double muN = 5.0507837461e-27;
    static constexpr double hbar = 1.054571817e-34;
    static constexpr double h = 6.62607015e-34;

    // Conversions into the internal units (rad/us, G, A).
    static constexpr double tesla_per_gauss = 1e-4;
    static constexpr double metre_per_angstrom = 1e-10;
    static constexpr double per_second_to_per_us = 1e-6;

    // muN/hbar in rad/us per gauss.
    static constexpr double muN_rad_per_us_per_G = muN / hbar * tesla_per_gauss * per_second_to_per_us;
};

struct QubitConstants {
    double omega01 = kTwoPi * 675.0;   // rad/us
    double gamma_z = kTwoPi * 8.5;     // rad/us/G
    double gz = -6.08;
    double gx = 0.85;

    // |gz| muB / h in MHz/G, compared against gamma_z / 2pi.
    double gamma_from_g() const;
    bool gamma_consistent() const;
};

struct VanadiumConstants {
    double q_register = kTwoPi * 0.165;   // rad/us
    double q_bulk = kTwoPi * 0.1713;
    double gvx = 0.6;
    double gvz = 1.6;

    // Transitions of Q I_z^2: |1/2>-|3/2>, |3/2>-|5/2>, |5/2>-|7/2>.
    double omega_a() const { return 2.0 * q_register; }
    double omega_b() const { return 4.0 * q_register; }
    double omega_c() const { return 6.0 * q_register; }
    double omega_c_bath() const { return 6.0 * q_bulk; }
};

enum class Classification { Register, BathByPosition };

struct Ion {
    int index = 0;
    int shell = 1;
    double r = 0;          // A
    Eigen::Vector3d dir;   // direction cosines (l, m, n)
    Classification cls = Classification::Register;
    Eigen::Vector3d position() const { return r * dir; }
};

struct RegisterGeometry {
    std::vector<Ion> ions;
    static RegisterGeometry tabulated();
    std::vector<Ion> register_ions() const;
};

struct Coupling {
    double jx = 0, jy = 0, jz = 0;   // rad/us/G
    double a_x = 0, a_z = 0;         // rad/us/G
    double amp_x = 0, amp_z = 0;     // dimensionless A_x (magnitude), A_z
};

struct CouplingSet {
    std::vector<Coupling> per_ion;   // same order as geometry.ions
};

Coupling ion_coupling(double r, const Eigen::Vector3d& dir, const QubitConstants& qc,
                      const VanadiumConstants& vc);
CouplingSet coupling_constants(const RegisterGeometry& geometry, const QubitConstants& qc,
                               const VanadiumConstants& vc);

enum class Representation { Full, Reduced, Mixed };
Representation parse_representation(const std::string& s);
std::string to_string(Representation r);

// Spin projections kept per ion, in basis order. Reduced: {7/2, 5/2}; Mixed adds 3/2.
std::vector<double> kept_projections(Representation rep);

struct NuclearSpin {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    double a_x = 0, a_z = 0;   // rad/us/G
    double q = 0;              // rad/us
    int manifold = +1;         // +-m_I doublet branch
    double site_field = 0;     // site-resolved Overhauser field, G (for H_nz)
};

struct TermToggles {
    bool knight = true;            // hyperfine terms driven by B_OH (Yb Knight field)
    bool nuclear_zeeman = true;    // H_nz
    bool register_dipolar = true;  // H_ndd
    bool enhanced_ising = true;    // H_edd
};

// Qubit (index 0 = |1_g>, 1 = |0_g>) followed by nuclear spins.
class SpinSystem {
public:
    SpinSystem(QubitConstants qc, VanadiumConstants vc, Representation rep,
               std::vector<NuclearSpin> spins, TermToggles toggles = {});

    const QubitConstants& qubit() const { return qc_; }
    const VanadiumConstants& vanadium() const { return vc_; }
    Representation representation() const { return rep_; }
    const std::vector<NuclearSpin>& spins() const { return spins_; }
    const TermToggles& toggles() const { return toggles_; }
    int levels() const { return levels_; }
    int n_spins() const { return static_cast<int>(spins_.size()); }
    int dim() const { return dim_; }
    std::vector<int> dims() const;

    // Embedded operators on the full space.
    const Matrix& sz() const { return ops_->sz; }
    const Matrix& sx() const { return ops_->sx; }
    const Matrix& sy() const { return ops_->sy; }
    const Matrix& ix(int i) const { return ops_->ix[i]; }
    const Matrix& iy(int i) const { return ops_->iy[i]; }
    const Matrix& iz(int i) const { return ops_->iz[i]; }
    const Matrix& iz2(int i) const { return ops_->iz2[i]; }

    // Single-ion operators (levels x levels) for manifold sign s.
    Matrix local_ix(int i) const;
    Matrix local_iy(int i) const;
    Matrix local_iz(int i) const;

    // Qubit operator lifted to the full space.
    Matrix qubit_op(const Matrix& op2) const;

    // Basis index of a product state; qubit 0 = |1_g>, level index per spin.
    int index(int qubit, const std::vector<int>& level) const;

    SpinSystem with_toggles(TermToggles t) const;
    SpinSystem with_field_at_sites(const std::vector<double>& fields) const;

private:
    struct Ops {
        Matrix sz, sx, sy;
        std::vector<Matrix> ix, iy, iz, iz2;
    };
    QubitConstants qc_;
    VanadiumConstants vc_;
    Representation rep_;
    std::vector<NuclearSpin> spins_;
    TermToggles toggles_;
    int levels_ = 2;
    int dim_ = 2;
    std::shared_ptr<const Ops> ops_;
};

// Register of N tabulated register ions (3..6) with given manifold signs; `present`
// selects which of the four are kept in the Hilbert space.
SpinSystem make_register_system(const QubitConstants& qc, const VanadiumConstants& vc,
                                Representation rep, const std::vector<int>& signs,
                                const std::vector<bool>& present, TermToggles toggles = {});

// Detuning term gamma_z^2 B^2 / 2 omega01 (rad/us).
double detuning(const QubitConstants& qc, double B);

Matrix full_hamiltonian(const SpinSystem& sys, double B_OH, double B_RF);

// H_nz + H_ndd + H_edd per toggles; uses each spin's site_field for H_nz.
Matrix extra_terms(const SpinSystem& sys);

// Register pair dipolar constant mu0 muN^2 gvz^2 / 4 pi r^3 for separation r (rad/us).
double dipolar_prefactor(const VanadiumConstants& vc, double r_angstrom, double g = 0);

// Ising prefactor of H_edd for a spin at (r, n).
double enhanced_ising_prefactor(const QubitConstants& qc, const VanadiumConstants& vc, double r,
                                double n);

enum class YbState { Ground0, Excited1 };
Matrix knight_field_hamiltonian(const SpinSystem& sys, double B_OH, YbState yb);

// mu_N g_vx A_x B_osc sin(omega t + phase) I_x summed over spins, times the qubit dipole sign.
Matrix drive_hamiltonian(const SpinSystem& sys, double B_osc, double phase, double t,
                         double omega, int yb_sign = +1);

// Rabi frequency in the reduced omega_c manifold, sqrt7 muN gvx A_x B_osc / 2.
double direct_drive_rabi(const SpinSystem& sys, double B_osc);

} // namespace zensim
