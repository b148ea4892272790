#pragma once

#include "zensim/overhauser_bath.hpp"
#include "zensim/rng.hpp"
#include "zensim/sequence.hpp"
#include "zensim/system_model.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace zensim {

// Piece of one period: free evolution (possibly with a continuous qubit drive) or an
// instantaneous qubit rotation.
struct Segment {
    double duration = 0;
    double b_rf = 0;
    bool instantaneous = false;
    Matrix qubit_unitary;        // 2x2, instantaneous pulses
    Axis axis = Axis::X;         // finite pulses / drive
    double rabi = 0;             // rad/us along axis during the segment
};

std::vector<Segment> compile_period(const PulseSequence& seq);

// Left-multiply a full-space operator or state by (P (x) 1) with P acting on the qubit.
Matrix apply_qubit(const Matrix& P, const Matrix& U);
Vector apply_qubit(const Matrix& P, const Vector& psi);

// Exact one-period propagator for fixed B_OH; `extra` is added to every segment Hamiltonian.
Matrix period_propagator(const PulseSequence& seq, const SpinSystem& sys, double b_oh,
                         const Matrix& extra);
Matrix period_propagator(const PulseSequence& seq, const SpinSystem& sys, double b_oh);

// U^n by binary powering.
Matrix matrix_power(const Matrix& U, int n);

struct SystemState {
    Vector psi;
    double time = 0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;   // series[observable][point]
};

using Observer = std::function<std::vector<double>(const SpinSystem&, const Vector&)>;

// Default observables: yb_pop_1g, v_pop_down (mean |down> population of present spins).
std::vector<std::string> default_observable_names();
std::vector<double> default_observables(const SpinSystem& sys, const Vector& psi);

double yb_population_1g(const SpinSystem& sys, const Vector& psi);
double down_population(const SpinSystem& sys, const Vector& psi, int spin);

struct BathDrive {
    const BathSpec* spec = nullptr;
    BathState state;
    Rng* rng = nullptr;
};

// Stroboscopic propagation over seq.repetitions periods, recording at every boundary (0..M).
Trajectory propagate_sequence(const PulseSequence& seq, const SpinSystem& sys, double b_oh,
                              const Vector& psi0, const Matrix& extra = Matrix(),
                              const Observer& observer = default_observables,
                              const std::vector<std::string>& names = default_observable_names(),
                              BathDrive* bath = nullptr);

struct EnsembleResult {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> stderr_;
    int reps = 0;
    std::uint64_t seed = 0;
};

// Worker count from ZENSIM_THREADS (0 or unset = hardware concurrency).
int worker_count();

// One repetition: rep index and its private RNG stream -> trajectory.
using Experiment = std::function<Trajectory(int rep, Rng& rng)>;

// Deterministic for any worker count: per-rep streams, fixed-order pairwise reduction.
EnsembleResult monte_carlo(const Experiment& experiment, int reps, std::uint64_t seed,
                           int workers = 0);

struct FloquetResult {
    Matrix unitary;      // one-period propagator (lab frame)
    Matrix generator;    // i log(U_rot) / T in the quadrupole rotating frame
    bool near_branch_cut = false;
    int composed_periods = 1;
};

FloquetResult floquet_oracle(const PulseSequence& seq, const SpinSystem& sys, double b_oh);

enum class IonInit { Down, Up, Removed };

// Per ion: Up with eps1, Removed with eps2, Down otherwise.
std::vector<IonInit> imperfect_initial_state(double eps1, double eps2, int n_ions, Rng& rng);

// Product state with the qubit in |1_g> (qubit = 0) or |0_g> (qubit = 1), spins at level indices.
Vector product_state(const SpinSystem& sys, int qubit, const std::vector<int>& levels);

// Parallel map over indices with a deterministic result layout.
void parallel_for(int n, const std::function<void(int)>& body, int workers = 0);

} // namespace zensim
