#include "zensim/dynamics.hpp"
#include "zensim/sequence.hpp"

#include <doctest.h>

#include <cmath>

using namespace zensim;

namespace {

SpinSystem one_ion()
{
    return make_register_system({}, {}, Representation::Reduced, {1}, {true, false, false, false});
}

double transverse(cplx x, cplx y) { return std::sqrt(std::norm(x) + std::norm(y)); }

} // namespace

TEST_CASE("ZenPol timing")
{
    const VanadiumConstants vc;
    const double tau = zenpol_tau_for(vc.omega_c(), 5);
    // 2 tau = 5.048 us for omega_c / 2 pi = 990.5 kHz; 5.0505 us at 990 kHz.
    CHECK(2 * tau == doctest::Approx(5.0 / 0.990).epsilon(1e-12));
    CHECK(2 * zenpol_tau_for(kTwoPi * 0.9905, 5) == doctest::Approx(5.048).epsilon(1e-3));
    const auto seq = build_zenpol(5.048 / 2, 1.6, 10);
    CHECK(seq.total_duration() == doctest::Approx(50.48));
    CHECK_THROWS_AS(build_zenpol(0.01, 1.6, 1, true), std::invalid_argument);
    CHECK_THROWS_AS(build_zenpol(-1, 1.6, 1), std::invalid_argument);
}

TEST_CASE("ZenPol toggling frame")
{
    const auto seq = build_zenpol(2.5, 1.0, 1);
    const auto frame = toggling_frame(seq);
    REQUIRE(frame.intervals.size() >= 2);
    // (pi/2)_y then pi_y: S_z -> -S_x -> +S_x.
    CHECK(frame.intervals[0].fx_oh == doctest::Approx(-1.0));
    CHECK(frame.intervals[1].fx_oh == doctest::Approx(1.0));
    double sx = 0, sy = 0;
    for (const auto& iv : frame.intervals) {
        sx += iv.fx_oh * (iv.t1 - iv.t0);
        sy += iv.fy_oh * (iv.t1 - iv.t0);
    }
    CHECK(std::abs(sx) < 1e-12);
    CHECK(std::abs(sy) < 1e-12);

    PulseSequence empty;
    empty.period = 1.0;
    const auto free = toggling_frame(empty);
    for (const auto& iv : free.intervals) {
        CHECK(iv.fx_oh == 0.0);
        CHECK(iv.fy_oh == 0.0);
    }
    PulseSequence odd = seq;
    odd.pulses[0].angle = kPi / 3;
    CHECK_THROWS(toggling_frame(odd));
}

TEST_CASE("filter resonances: RF at odd k, Overhauser at even k")
{
    const double T = 5.0;
    const auto frame = toggling_frame(build_zenpol(T / 2, 1.0, 1));
    for (int k = 1; k <= 9; ++k) {
        const auto F = filter_function(frame, kTwoPi * k / T);
        const double rf = transverse(F.x_rf, F.y_rf), oh = transverse(F.x_oh, F.y_oh);
        if (k % 2 == 1) {
            CHECK(oh < 1e-12);
            CHECK(rf > 1e-3);
        } else {
            CHECK(rf < 1e-12);
        }
        // Over M periods the comb factor sharpens the response; its maximum sits on k.
        const int M = 50;
        auto comb = [&](double x, bool use_rf) {
            const auto G = filter_function(frame, kTwoPi * x / T);
            const double s1 = std::sin(kPi * x);
            const double c = std::abs(s1) < 1e-12 ? 1.0 : std::abs(std::sin(M * kPi * x) / (M * s1));
            return c * (use_rf ? transverse(G.x_rf, G.y_rf) : transverse(G.x_oh, G.y_oh));
        };
        const bool odd = k % 2 == 1;
        if ((odd ? rf : oh) > 1e-6) {
            double best_x = 0, best = -1;
            for (int j = -500; j <= 500; ++j) {
                const double x = k + j * 1e-3;
                const double v = comb(x, odd);
                if (v > best) {
                    best = v;
                    best_x = x;
                }
            }
            CHECK(std::abs(best_x - k) < 2e-3);
        }
    }
    // At least one even k carries an Overhauser resonance.
    double best = 0;
    for (int k = 2; k <= 8; k += 2) {
        const auto F = filter_function(frame, kTwoPi * k / T);
        best = std::max(best, transverse(F.x_oh, F.y_oh));
    }
    CHECK(best > 1e-3);
    // omega -> 0: the interval-weighted mean of f_RF.
    double mx = 0;
    for (const auto& iv : frame.intervals) mx += iv.fx_rf * (iv.t1 - iv.t0) / frame.period;
    CHECK(std::abs(filter_function(frame, 1e-9).x_rf - mx) < 1e-8);
}

TEST_CASE("average Hamiltonian at (k=5, omega_c)")
{
    const SpinSystem sys = one_ion();
    const double w = sys.vanadium().omega_c();
    const auto seq = build_zenpol(zenpol_tau_for(w, 5), 1.0, 1);
    const auto rep = average_hamiltonian(seq, sys, 5, w);
    const double closed = std::sqrt(7.0) * (std::sqrt(2.0) + 2.0) * std::abs(sys.spins()[0].a_x) / (10 * kPi);
    CHECK(std::abs(rep.b_numeric - closed) / closed < 1e-6);
    CHECK(std::abs(rep.b_filter - closed) / closed < 1e-6);
    CHECK(rep.residual_oh < 1e-10);
    CHECK(rep.residual_detuning < 1e-10);
    CHECK_THROWS_AS(average_hamiltonian(seq, sys, 4, w), std::invalid_argument);
}

TEST_CASE("ZenPol robustness: b changes at second order in pulse angle errors")
{
    const SpinSystem sys = one_ion();
    const double w = sys.vanadium().omega_c();
    const auto seq = build_zenpol(zenpol_tau_for(w, 5), 1.0, 1);
    const double b0 = average_hamiltonian(seq, sys, 5, w).b_numeric;
    const double d1 = std::abs(average_hamiltonian(with_angle_error(seq, 1e-3), sys, 5, w).b_numeric - b0);
    const double d2 = std::abs(average_hamiltonian(with_angle_error(seq, 2e-3), sys, 5, w).b_numeric - b0);
    CHECK(d1 / b0 < 1e-5);
    if (d1 > 1e-14 * b0) CHECK(d2 / d1 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("period closure")
{
    const SpinSystem sys = one_ion();
    const auto seq = build_zenpol(zenpol_tau_for(sys.vanadium().omega_c(), 5), 0.0, 1);
    const Matrix P = period_pulse_product(seq);
    CHECK(phase_insensitive_distance(P, Matrix(Matrix::Identity(2, 2))) < 1e-12);
    // Full period with B_RF = B_OH = 0 and no quadrupole phase: the qubit part is the identity.
    const auto xy8 = build_xy8(5.6, 1);
    CHECK(xy8.pulses.size() == 8);
    const Axis expect[8] = {Axis::X, Axis::Y, Axis::X, Axis::Y, Axis::Y, Axis::X, Axis::Y, Axis::X};
    for (int i = 0; i < 8; ++i) CHECK(xy8.pulses[i].axis == expect[i]);
    CHECK(phase_insensitive_distance(period_pulse_product(xy8), Matrix(Matrix::Identity(2, 2))) < 1e-12);
}

TEST_CASE("other sequence builders")
{
    const auto hh = build_hartmann_hahn(kTwoPi * 0.5, 10.0);
    CHECK(hh.drive_rabi == doctest::Approx(kTwoPi * 0.5));
    CHECK(hh.total_duration() == doctest::Approx(10.0));
    const auto dd = build_direct_drive(1.94, 6.2, 24.0, 6.0);
    CHECK(dd.pulses.size() == 4);
    CHECK_THROWS_AS(build_direct_drive(1.94, 6.2, 18.0, 6.0), std::invalid_argument);
    CHECK(build_direct_drive(1.94, 6.2, 18.0, 0.0).pulses.empty());
    CHECK(parse_axis(to_string(Axis::MinusY)) == Axis::MinusY);
    CHECK(!serialize(build_zenpol(2.5, 1.0, 3)).empty());
}
