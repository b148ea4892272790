#pragma once

#include "zensim/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace zensim {

// sqrt((1 - 2 p_post) / (1 - 2 p_pre)).
double swap_fidelity(double p_pre, double p_post);

struct CorrectionModel {
    double f_sw0 = 0.83;
    double f_sw1 = 0.52;
    double q00 = 0.915;   // (1 + f_sw0) / 2
    double q11 = 0.76;    // (1 + f_sw1) / 2

    static CorrectionModel from_fidelities(double f_sw0, double f_sw1);
};

// Population vectors are ordered (11, 10, 01, 00): |1_g W_v>, |1_g 0_v>, |0_g W_v>, |0_g 0_v>.
Eigen::Matrix4d readout_matrix(const CorrectionModel& model);
Eigen::Vector4d apply_readout(const Eigen::Vector4d& c, const CorrectionModel& model);
Eigen::Vector4d correct_populations(const Eigen::Vector4d& p, const CorrectionModel& model);

struct DetectionRecord {
    int window1 = 0, window2 = 0, window3 = 0;
    int readout_id = 1;   // 1: |0_g> branch, 2: |1_g> branch
};

struct CountsRecord {
    long n00 = 0, n01 = 0, n10 = 0, n11 = 0;
    long discarded = 0;
    std::vector<std::pair<double, double>> parity;   // (t us, y)

    long total() const { return n00 + n01 + n10 + n11; }
    Eigen::Vector4d frequencies() const;   // (11, 10, 01, 00)
};

CountsRecord sequential_tomography(const std::vector<DetectionRecord>& shots);

// (p_1Yb, p_0Yb) from (p11, p_Psi+, p_Psi-, p00) after a wait t at carrier omega (rad/us).
Eigen::Vector2d parity_model(double t, const Eigen::Vector4d& populations, double omega,
                             const CorrectionModel& model);
Eigen::Matrix<double, 2, 4> parity_swap_matrix(const CorrectionModel& model);
Eigen::Matrix4d parity_wait_matrix(double t, double omega);

// |rho01| = C / (2 sqrt(F_sw1)); with f_sw1 = 1 this is the uncorrected C/2.
double coherence_from_contrast(double contrast, double f_sw1);

// <Psi+|rho|Psi+> for populations (11,10,01,00) and coherence magnitude.
double bell_fidelity(const Eigen::Vector4d& c, double rho01);

struct Interval {
    double estimate = 0;
    double low = 0, high = 0;
};

struct FidelityEstimate {
    Eigen::Vector4d c = Eigen::Vector4d::Zero();   // posterior modes per component (11,10,01,00)
    Interval c11, c10, c01, c00;
    Interval rho01;
    Interval fidelity;
    bool has_coherence = true;
    double fidelity_lower_bound = 0;   // populations-only bound (rho01 = 0)
    long accepted_samples = 0;
    long proposed_samples = 0;
};

struct MleSettings {
    long samples = 200000;
    int rho_grid = 2001;
    int sigma_grid = 200;
    double sigma_min = 1e-4, sigma_max = 1.0;
    double omega = 0;   // parity carrier, rad/us
    std::uint64_t seed = 1;
};

// Posterior-mode estimate with equal-tailed 68% intervals from the multinomial population
// likelihood (flat prior on the corrected simplex) and the sigma-marginalized coherence likelihood.
FidelityEstimate mle_fidelity(const CountsRecord& counts, const CorrectionModel& model,
                              const MleSettings& settings);

// Normalized posterior of rho01 on a uniform grid over [0, 1/2].
std::vector<double> coherence_posterior(const std::vector<std::pair<double, double>>& parity,
                                        const CorrectionModel& model, const MleSettings& settings);

// Multinomial counts from uncorrected outcome probabilities (11,10,01,00).
CountsRecord synthetic_counts(const Eigen::Vector4d& p, long shots, Rng& rng);
// y = 1/2 + sqrt(f_sw1) rho01 cos(omega t) + noise, over two carrier periods.
std::vector<std::pair<double, double>> synthetic_parity(double rho01, double f_sw1, double omega,
                                                        int points, double noise, Rng& rng);

enum class LindbladState { ZeroV, WV, Coherence };
LindbladState parse_lindblad_state(const std::string& s);

// Pure dephasing L_i = sqrt(2 Gamma) n_i on the four register sites.
double lindblad_single_excitation(double gamma, LindbladState state, double t);
double lindblad_t1_w(double gamma);     // 1/e time of the W population's decaying part
double lindblad_t2_star(double gamma);  // 1/e time of the |0_v>-|W_v> coherence

} // namespace zensim
