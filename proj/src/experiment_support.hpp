#pragma once

#include "zensim/config.hpp"
#include "zensim/dynamics.hpp"
#include "zensim/experiments.hpp"
#include "zensim/overhauser_bath.hpp"
#include "zensim/sequence.hpp"
#include "zensim/system_model.hpp"

#include <vector>

namespace zensim::detail {

struct Physics {
    QubitConstants qc;
    VanadiumConstants vc;
    TermToggles toggles;
    BathSpec bath;
    bool bath_enabled = true;
    std::vector<Ion> reg;                           // tabulated register ions, first n_register
    std::vector<std::vector<double>> reg_coeffs;    // bath field coefficients per register site
    int n_register = 4;
    std::uint64_t seed = 1;
    double k = 5;
    double transition = 0;                          // addressed omega, rad/us
};

Physics make_physics(const Config& c);

struct FieldSample {
    double yb = 0;                   // B_OH at the Yb site
    std::vector<double> sites;       // per register ion
    BathState state;
};

FieldSample sample_fields(const Physics& ph, Rng& rng);

inline int draw_sign(Rng& rng) { return uniform01(rng) < 0.5 ? +1 : -1; }

// Register of the tabulated ions flagged present, with site fields attached.
SpinSystem register_system(const Physics& ph, Representation rep, const std::vector<int>& signs,
                           const std::vector<bool>& present, const FieldSample& f);

// Single reduced register ion for the average-Hamiltonian coefficient.
SpinSystem single_ion(const Physics& ph);

// |b| (rad/us/G) for the ZenPol resonance at harmonic k on transition omega.
double exchange_coefficient(const Physics& ph, int k, double omega);

// RF amplitude making `periods` ZenPol periods an exact swap for n collective spins.
double calibrated_b_rf(const Physics& ph, int n, int periods);

// Time-independent pieces added to every segment Hamiltonian.
Matrix static_extra(const SpinSystem& sys);

Representation representation_or(const Config& c, Representation fallback);

std::vector<double> linspace(double a, double b, int n);

// Yb |1_g><0_g| coherence: sum_k psi_top[k] conj(psi_bottom[k]).
cplx yb_coherence(const Vector& psi);

// Sweep series of a Monte Carlo result as table columns (value, stderr).
void append_series(Table& t, const EnsembleResult& r, const std::vector<std::string>& names);

// Ensemble reps from config with an experiment default.
int reps_or(const Config& c, int fallback);

void record_constants(ExperimentOutput& out, const Physics& ph);

void add_fit(ExperimentOutput& out, const std::string& name, const FitResult& f);

} // namespace zensim::detail
