#pragma once

#include "zensim/spin_algebra.hpp"
#include "zensim/system_model.hpp"

#include <complex>
#include <string>
#include <vector>

namespace zensim {

struct Pulse {
    double offset = 0;     // us within the period
    Axis axis = Axis::X;
    double angle = kPi;    // rad
    double duration = 0;   // us, 0 = instantaneous
};

enum class SequenceKind { Free, ZenPol, XY8, HartmannHahn, DirectDrive };

// One period of control. The RF square wave is +b_rf on [0, period/2) and -b_rf after.
struct PulseSequence {
    SequenceKind kind = SequenceKind::Free;
    double period = 0;           // us (2 tau for ZenPol)
    std::vector<Pulse> pulses;
    double b_rf = 0;             // G
    int repetitions = 1;
    bool finite_pulses = false;
    // ZenPol: 8 equal free intervals; boundary index of each pulse (composite at 8).
    std::vector<int> boundary;
    // Continuous qubit drive (Hartmann-Hahn): Rabi frequency about y, rad/us.
    double drive_rabi = 0;
    // Direct drive of the nuclei: amplitude (G) and carrier (rad/us).
    double b_osc = 0;
    double drive_omega = 0;
    double decouple_period = 0;

    double tau() const { return period / 2.0; }
    double total_duration() const { return period * repetitions; }
};

inline constexpr double kHalfPiWidth = 0.025;   // us
inline constexpr double kPiWidth = 0.050;       // us

// Committed ZenPol table: (boundary, axis, angle).
struct ZenPolEntry {
    int boundary;
    Axis axis;
    double angle;
};
const std::vector<ZenPolEntry>& zenpol_table();

PulseSequence build_zenpol(double tau, double b_rf, int M, bool finite_pulses = false);
// tau (half period) that puts the k-th harmonic on transition omega.
double zenpol_tau_for(double omega, int k);

PulseSequence build_xy8(double t_w, int M);
PulseSequence build_hartmann_hahn(double rabi, double t);
PulseSequence build_direct_drive(double b_osc, double omega, double t, double decouple_period);

// Per-pulse angle scaling (1+eps) for robustness studies.
PulseSequence with_angle_error(const PulseSequence& seq, double eps);

struct ToggleInterval {
    double t0 = 0, t1 = 0;   // us
    double rf_sign = 1;      // square-wave sign
    double fx_oh = 0, fy_oh = 0, fz_oh = 0;
    double fx_rf = 0, fy_rf = 0, fz_rf = 0;
};

struct TogglingFrame {
    double period = 0;
    std::vector<ToggleInterval> intervals;
};

// Free-evolution intervals between instantaneous pulses with U^dagger S_z U = f . S.
TogglingFrame toggling_frame(const PulseSequence& seq);

struct FilterValue {
    cplx x_oh, y_oh, z_oh;
    cplx x_rf, y_rf, z_rf;
};
FilterValue filter_function(const TogglingFrame& frame, double omega);

struct AverageHamiltonianReport {
    int k = 0;
    double omega = 0;
    double b_numeric = 0;        // |b| from the time-averaged Hamiltonian, rad/us/G
    double b_filter = 0;         // |b| from the RF filter function
    double b_closed_form = 0;    // sqrt7 (sqrt2+2) a_x / 10 pi for k = 5, else b_filter
    double counter_rotating = 0; // the non-resonant exchange element, rad/us/G
    double basis_angle = 0;      // phase of the S'_+ I_- element (45-degree local rotation)
    double residual_oh = 0;      // norm of averaged H with B_OH = 1 G, B_RF = 0
    double residual_detuning = 0;// norm of the averaged qubit detuning operator per rad/us
    Matrix h_avg;                // averaged H at B_RF = 1 G, B_OH = 0
};

// Numerical first-order average of the toggling-frame Hamiltonian in the rotating frame of the
// nuclear quadrupole terms. Refuses even k.
AverageHamiltonianReport average_hamiltonian(const PulseSequence& seq, const SpinSystem& sys, int k,
                                             double omega);

// Time-averaged toggling-frame Hamiltonian for given fields (no RWA).
Matrix averaged_hamiltonian(const TogglingFrame& frame, const SpinSystem& sys, double b_oh,
                            double b_rf);

std::string serialize(const PulseSequence& seq);
std::string to_string(Axis a);
Axis parse_axis(const std::string& s);

// Ordered qubit-space unitary of all pulses (conjugation check for period closure).
Matrix period_pulse_product(const PulseSequence& seq);

} // namespace zensim
