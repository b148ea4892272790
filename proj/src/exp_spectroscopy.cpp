#include "experiment_support.hpp"

#include <algorithm>
#include <cmath>

namespace zensim {

using namespace detail;

namespace {

struct Dip {
    double x = 0, depth = 0;
};

// Local minima of y below the median baseline, deepest first, refined by a parabola.
std::vector<Dip> find_dips(const std::vector<double>& x, const std::vector<double>& y, int half_width)
{
    std::vector<double> sorted = y;
    std::sort(sorted.begin(), sorted.end());
    const double base = sorted[sorted.size() / 2];
    std::vector<Dip> dips;
    const int n = static_cast<int>(y.size());
    for (int i = 1; i + 1 < n; ++i) {
        bool is_min = true;
        for (int j = std::max(0, i - half_width); j <= std::min(n - 1, i + half_width) && is_min; ++j)
            if (j != i && y[j] < y[i]) is_min = false;
        if (!is_min || y[i] >= base) continue;
        // Centre of the half-depth crossing points; robust to flat, power-broadened bottoms.
        const double half = base - 0.5 * (base - y[i]);
        auto cross = [&](int dir) {
            int j = i;
            while (j + dir >= 0 && j + dir < n && y[j + dir] < half) j += dir;
            if (j + dir < 0 || j + dir >= n) return x[j];
            const double f = (half - y[j]) / (y[j + dir] - y[j]);
            return x[j] + f * (x[j + dir] - x[j]);
        };
        const double centre = 0.5 * (cross(-1) + cross(+1));
        if (!dips.empty() && std::abs(dips.back().x - centre) < 1e-9) continue;
        dips.push_back({centre, base - y[i]});
    }
    std::sort(dips.begin(), dips.end(), [](const Dip& p, const Dip& q) { return p.depth > q.depth; });
    return dips;
}

// Thermal spin-7/2 draw restricted to a reduced pair: present iff |m| >= 5/2.
struct ThermalPick {
    bool present = false;
    int sign = 1;
    int level = 0;
};

ThermalPick thermal_reduced(Rng& rng)
{
    const int idx = uniform_int(rng, 8);   // m = 7/2 - idx
    const double m = 3.5 - idx;
    ThermalPick p;
    p.sign = m > 0 ? 1 : -1;
    p.present = std::abs(m) >= 2.5;
    p.level = std::abs(m) == 3.5 ? 0 : 1;
    return p;
}

} // namespace

ExperimentOutput zenpol_spectroscopy(const Config& c)
{
    const Physics ph = make_physics(c);
    const int reps = reps_or(c, 200);
    const double f_lo = c.get_double("experiment.sweep_min", 940.0);
    const double f_hi = c.get_double("experiment.sweep_max", 1080.0);
    const int npts = static_cast<int>(c.get_int("experiment.sweep_points", 141));
    if (npts < 3 || f_hi <= f_lo || f_lo <= 0) throw ConfigError("experiment.sweep_points", "need >= 3 points over an increasing positive range");
    const double b_rf = c.get_double("sequence.b_rf_gauss", 1.6);
    const int M = static_cast<int>(c.get_int("sequence.repetitions", 30));
    if (M < 1) throw ConfigError("sequence.repetitions", "must be >= 1");
    const int k = static_cast<int>(ph.k);
    const bool finite = c.get_bool("sequence.finite_pulses");
    const double angle_err = c.get_double("sequence.angle_error");
    const std::string init = c.get_string("experiment.register_init");
    if (init != "thermal" && init != "polarized") throw ConfigError("experiment.register_init", "expected thermal or polarized");
    const double eps1 = c.get_double("experiment.eps1", 0.12), eps2 = c.get_double("experiment.eps2", 0.04);
    const int n_spect = static_cast<int>(c.get_int("bath.spectators"));
    const auto transverse = transverse_bath_sites(ph.bath);
    if (n_spect < 0 || n_spect > static_cast<int>(transverse.size()) || n_spect > 4)
        throw ConfigError("bath.spectators", "must be 0..4");
    const auto freqs = linspace(f_lo, f_hi, npts);

    std::vector<NuclearSpin> spectators;
    for (int s = 0; s < n_spect; ++s) {
        const auto& site = transverse[s];
        const auto cpl = ion_coupling(site.r, site.position / site.r, ph.qc, ph.vc);
        NuclearSpin ns;
        ns.position = site.position;
        ns.a_x = cpl.a_x;
        ns.a_z = cpl.a_z;
        ns.q = ph.vc.q_bulk;
        spectators.push_back(ns);
    }

    auto experiment = [&](int, Rng& rng) {
        const FieldSample f = sample_fields(ph, rng);
        std::vector<NuclearSpin> spins;
        std::vector<int> levels;
        std::vector<IonInit> pol;
        if (init == "polarized") pol = imperfect_initial_state(eps1, eps2, ph.n_register, rng);
        for (int i = 0; i < ph.n_register; ++i) {
            ThermalPick p;
            if (init == "thermal") p = thermal_reduced(rng);
            else {
                p.sign = draw_sign(rng);
                p.present = pol[i] != IonInit::Removed;
                p.level = pol[i] == IonInit::Up ? 1 : 0;
            }
            if (!p.present) continue;
            const auto cpl = ion_coupling(ph.reg[i].r, ph.reg[i].dir, ph.qc, ph.vc);
            NuclearSpin s;
            s.position = ph.reg[i].position();
            s.a_x = cpl.a_x;
            s.a_z = cpl.a_z;
            s.q = ph.vc.q_register;
            s.manifold = p.sign;
            s.site_field = f.sites[i];
            spins.push_back(s);
            levels.push_back(p.level);
        }
        for (const auto& sp : spectators) {
            const ThermalPick p = thermal_reduced(rng);
            if (!p.present) continue;
            NuclearSpin s = sp;
            s.manifold = p.sign;
            spins.push_back(s);
            levels.push_back(p.level);
        }
        Trajectory tr;
        tr.names = {"p0g"};
        tr.times = freqs;
        tr.series.assign(1, std::vector<double>(freqs.size(), 1.0));
        if (spins.empty()) return tr;
        const SpinSystem sys(ph.qc, ph.vc, Representation::Reduced, spins, ph.toggles);
        const Matrix extra = static_extra(sys);
        const Vector psi0 = product_state(sys, 1, levels);
        for (std::size_t j = 0; j < freqs.size(); ++j) {
            const double tau = zenpol_tau_for(kTwoPi * freqs[j] * 1e-3, k);
            PulseSequence seq = build_zenpol(tau, b_rf, M, finite);
            if (angle_err != 0) seq = with_angle_error(seq, angle_err);
            const Matrix U = period_propagator(seq, sys, f.yb, extra);
            Vector psi = psi0;
            for (int m = 0; m < M; ++m) psi = U * psi;
            tr.series[0][j] = 1.0 - yb_population_1g(sys, psi);
        }
        return tr;
    };
    const EnsembleResult res = monte_carlo(experiment, reps, ph.seed);

    ExperimentOutput out;
    out.id = "zenpol-spectroscopy";
    out.table.columns = {"freq_khz", "inv_2tau_khz"};
    for (double fr : freqs) out.table.rows.push_back({fr, fr / k});
    append_series(out.table, res, {"p0g"});
    record_constants(out, ph);
    out.add("k", k);
    out.add("b_rf_gauss", b_rf);
    out.add("periods", M);
    out.add("reps", reps);
    const double step = (f_hi - f_lo) / (npts - 1);
    const auto dips = find_dips(freqs, res.mean[0], std::max(1, static_cast<int>(std::round(8.0 / step))));
    out.add("dips_found", static_cast<double>(dips.size()));
    if (dips.size() >= 2) {
        const Dip lo = dips[0].x < dips[1].x ? dips[0] : dips[1];
        const Dip hi = dips[0].x < dips[1].x ? dips[1] : dips[0];
        out.add("dip_low_khz", lo.x);
        out.add("dip_low_depth", lo.depth);
        out.add("dip_high_khz", hi.x);
        out.add("dip_high_depth", hi.depth);
        out.add("dip_split_khz", hi.x - lo.x);
    } else if (dips.size() == 1) {
        out.add("dip_low_khz", dips[0].x);
        out.add("dip_low_depth", dips[0].depth);
    }
    out.note("reference", "register and bath omega_c resonances near 991 kHz and 1028 kHz");
    return out;
}

ExperimentOutput hh_spectroscopy(const Config& c)
{
    const Physics ph = make_physics(c);
    const int reps = reps_or(c, 20);
    const double w_lo = c.get_double("experiment.sweep_min", 0.0);
    const double w_hi = c.get_double("experiment.sweep_max", 1200.0);
    const int nw = static_cast<int>(c.get_int("experiment.sweep_points", 61));
    const double t_max = c.get_double("experiment.time_max_us", 60.0);
    const int nt = static_cast<int>(c.get_int("experiment.time_points", 13));
    const int n_ions = static_cast<int>(c.get_int("experiment.hh_ions"));
    if (n_ions < 1 || n_ions > ph.n_register || n_ions > 2)
        throw ConfigError("experiment.hh_ions", "must be 1 or 2 (and <= system.n_register)");
    if (nw < 2 || nt < 2 || w_hi <= w_lo || t_max <= 0)
        throw ConfigError("experiment.sweep_points", "need >= 2 points on increasing ranges");
    const auto rabis = linspace(w_lo, w_hi, nw);
    const auto times = linspace(0.0, t_max, nt);
    const Matrix prep = rotation_pulse(Axis::MinusX, kPi / 2);
    const Matrix readout = rotation_pulse(Axis::X, kPi / 2);

    auto experiment = [&](int, Rng& rng) {
        const FieldSample f = sample_fields(ph, rng);
        std::vector<bool> present(ph.n_register, false);
        for (int i = 0; i < n_ions; ++i) present[i] = true;
        const SpinSystem sys = register_system(ph, Representation::Full, {}, present, f);
        std::vector<int> levels;
        for (int i = 0; i < n_ions; ++i) levels.push_back(uniform_int(rng, 8));
        const Vector psi0 = apply_qubit(prep, product_state(sys, 1, levels));
        Matrix H0 = full_hamiltonian(sys, f.yb, 0.0);
        const Matrix extra = static_extra(sys);
        if (extra.size() > 0) H0 += extra;
        Trajectory tr;
        tr.names = {"p_plus"};
        tr.series.assign(1, {});
        for (double w : rabis) {
            const SpectralPropagator<double> prop(H0 + kTwoPi * w * 1e-3 * sys.sy());
            for (double t : times) {
                tr.times.push_back(w);
                tr.series[0].push_back(yb_population_1g(sys, apply_qubit(readout, prop.apply(psi0, t))));
            }
        }
        return tr;
    };
    const EnsembleResult res = monte_carlo(experiment, reps, ph.seed);

    ExperimentOutput out;
    out.id = "hh-spectroscopy";
    out.table.columns = {"rabi_khz", "t_us"};
    for (double w : rabis)
        for (double t : times) out.table.rows.push_back({w, t});
    append_series(out.table, res, {"p_plus"});
    record_constants(out, ph);
    out.add("reps", reps);
    // Row averages over t > 0 locate the resonances.
    std::vector<double> row(nw, 0.0);
    for (int i = 0; i < nw; ++i) {
        for (int j = 1; j < nt; ++j) row[i] += res.mean[0][i * nt + j];
        row[i] /= (nt - 1);
    }
    // Peaks above a running median; the spin-locking background falls with the drive amplitude.
    const double step = (w_hi - w_lo) / (nw - 1);
    const int win = std::max(2, static_cast<int>(std::round(100.0 / step)));
    std::vector<double> neg(row.size());
    for (int i = 0; i < nw; ++i) {
        std::vector<double> w(row.begin() + std::max(0, i - win), row.begin() + std::min(nw, i + win + 1));
        std::nth_element(w.begin(), w.begin() + w.size() / 2, w.end());
        neg[i] = w[w.size() / 2] - row[i];
    }
    auto peaks = find_dips(rabis, neg, std::max(1, static_cast<int>(std::round(100.0 / step))));
    if (peaks.size() > 3) peaks.resize(3);
    std::sort(peaks.begin(), peaks.end(), [](const Dip& a, const Dip& b) { return a.x < b.x; });
    for (std::size_t p = 0; p < peaks.size(); ++p) out.add("resonance_" + std::to_string(p + 1) + "_khz", peaks[p].x);
    out.add("ramsey_row_final", res.mean[0][nt - 1]);
    out.note("reference", "resonances expected at omega_a, omega_b, omega_c (ratio 1:2:3)");
    return out;
}

} // namespace zensim
