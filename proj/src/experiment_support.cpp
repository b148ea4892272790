#include "experiment_support.hpp"

#include <cmath>
#include <stdexcept>

namespace zensim::detail {

Physics make_physics(const Config& c)
{
    Physics ph;
    ph.vc.q_bulk = kTwoPi * c.get_double("system.q_bulk_khz") * 1e-3;
    ph.vc.q_register = c.get_bool("system.frozen_core") ? kTwoPi * c.get_double("system.q_register_khz") * 1e-3
                                                         : ph.vc.q_bulk;
    if (ph.vc.q_register <= 0 || ph.vc.q_bulk <= 0) throw ConfigError("system.q_register_khz", "must be positive");
    ph.toggles.knight = c.get_bool("system.knight");
    ph.toggles.nuclear_zeeman = c.get_bool("system.nuclear_zeeman");
    ph.toggles.register_dipolar = c.get_bool("system.register_dipolar");
    ph.toggles.enhanced_ising = c.get_bool("system.enhanced_ising");
    ph.n_register = static_cast<int>(c.get_int("system.n_register"));
    if (ph.n_register < 1 || ph.n_register > 4) throw ConfigError("system.n_register", "must be 1..4");
    ph.bath_enabled = c.get_bool("bath.enabled");
    const double cutoff = c.get_double("bath.cutoff_angstrom");
    const double rate = c.get_double("bath.jump_rate_per_us");
    const double gvz = c.get_double("bath.gvz_override", ph.vc.gvz);
    try {
        ph.bath = make_bath_spec(cutoff, rate, gvz);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("bath.cutoff_angstrom", e.what());
    }
    const auto all = RegisterGeometry::tabulated().register_ions();
    ph.reg.assign(all.begin(), all.begin() + ph.n_register);
    for (const auto& ion : ph.reg) ph.reg_coeffs.push_back(field_coefficients(ph.bath, ion.position()));
    ph.seed = static_cast<std::uint64_t>(std::stoull(c.get_string("experiment.seed")));
    ph.k = static_cast<double>(c.get_int("sequence.k"));
    if (static_cast<long>(ph.k) % 2 == 0 || ph.k < 1) throw ConfigError("sequence.k", "ZenPol exchange needs odd k >= 1");
    const std::string tr = c.get_string("sequence.transition");
    if (tr == "a") ph.transition = ph.vc.omega_a();
    else if (tr == "b") ph.transition = ph.vc.omega_b();
    else if (tr == "c") ph.transition = ph.vc.omega_c();
    else throw ConfigError("sequence.transition", "expected a, b or c");
    return ph;
}

FieldSample sample_fields(const Physics& ph, Rng& rng)
{
    FieldSample f;
    f.sites.assign(ph.reg.size(), 0.0);
    if (!ph.bath_enabled) return f;
    f.state = sample_bath(ph.bath, rng);
    f.yb = f.state.field;
    for (std::size_t i = 0; i < ph.reg.size(); ++i) f.sites[i] = field_at(ph.reg_coeffs[i], f.state.m);
    return f;
}

SpinSystem register_system(const Physics& ph, Representation rep, const std::vector<int>& signs,
                           const std::vector<bool>& present, const FieldSample& f)
{
    std::vector<NuclearSpin> spins;
    for (std::size_t i = 0; i < ph.reg.size(); ++i) {
        if (i < present.size() && !present[i]) continue;
        const auto cpl = ion_coupling(ph.reg[i].r, ph.reg[i].dir, ph.qc, ph.vc);
        NuclearSpin s;
        s.position = ph.reg[i].position();
        s.a_x = cpl.a_x;
        s.a_z = cpl.a_z;
        s.q = ph.vc.q_register;
        s.manifold = i < signs.size() ? signs[i] : +1;
        s.site_field = i < f.sites.size() ? f.sites[i] : 0.0;
        spins.push_back(s);
    }
    return SpinSystem(ph.qc, ph.vc, rep, std::move(spins), ph.toggles);
}

SpinSystem single_ion(const Physics& ph)
{
    FieldSample none;
    Physics one = ph;
    one.reg.resize(1);
    return register_system(one, Representation::Reduced, {+1}, {true}, none);
}

double exchange_coefficient(const Physics& ph, int k, double omega)
{
    const double tau = zenpol_tau_for(omega, k);
    const auto seq = build_zenpol(tau, 1.0, 1);
    return average_hamiltonian(seq, single_ion(ph), k, omega).b_filter;
}

double calibrated_b_rf(const Physics& ph, int n, int periods)
{
    const int k = static_cast<int>(ph.k);
    const double b = exchange_coefficient(ph, k, ph.vc.omega_c());
    const double T = periods * 2.0 * zenpol_tau_for(ph.vc.omega_c(), k);
    return kPi / (2.0 * std::sqrt(static_cast<double>(n)) * b * T);
}

Matrix static_extra(const SpinSystem& sys)
{
    const auto& t = sys.toggles();
    if (!t.nuclear_zeeman && !t.register_dipolar && !t.enhanced_ising) return Matrix();
    return extra_terms(sys);
}

Representation representation_or(const Config& c, Representation fallback)
{
    if (c.is_auto("system.representation")) return fallback;
    try {
        return parse_representation(c.get_string("system.representation"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("system.representation", e.what());
    }
}

std::vector<double> linspace(double a, double b, int n)
{
    if (n < 1) throw std::invalid_argument("linspace: need at least one point");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

cplx yb_coherence(const Vector& psi)
{
    const Eigen::Index h = psi.size() / 2;
    return psi.tail(h).dot(psi.head(h));
}

void append_series(Table& t, const EnsembleResult& r, const std::vector<std::string>& names)
{
    for (const auto& name : names) {
        std::size_t k = 0;
        while (k < r.names.size() && r.names[k] != name) ++k;
        if (k == r.names.size()) throw std::logic_error("append_series: no observable " + name);
        t.columns.push_back(name);
        t.columns.push_back(name + "_stderr");
        if (t.rows.size() < r.mean[k].size()) t.rows.resize(r.mean[k].size());
        for (std::size_t p = 0; p < r.mean[k].size(); ++p) {
            t.rows[p].push_back(r.mean[k][p]);
            t.rows[p].push_back(r.stderr_[k][p]);
        }
    }
}

int reps_or(const Config& c, int fallback)
{
    const long r = c.get_int("experiment.reps", fallback);
    if (r < 1) throw ConfigError("experiment.reps", "must be >= 1");
    return static_cast<int>(r);
}

void record_constants(ExperimentOutput& out, const Physics& ph)
{
    out.add("q_register_khz", ph.vc.q_register / kTwoPi * 1e3);
    out.add("q_bulk_khz", ph.vc.q_bulk / kTwoPi * 1e3);
    out.add("omega_c_khz", ph.vc.omega_c() / kTwoPi * 1e3);
    out.add("omega_c_bath_khz", ph.vc.omega_c_bath() / kTwoPi * 1e3);
    out.add("gamma_z_mhz_per_g", ph.qc.gamma_z / kTwoPi);
    out.add("omega01_mhz", ph.qc.omega01 / kTwoPi);
    out.add("bath_sites", static_cast<double>(ph.bath.sites.size()));
    out.add("bath_sigma_gauss", ph.bath_enabled ? std::sqrt(field_variance(ph.bath)) : 0.0);
}

void add_fit(ExperimentOutput& out, const std::string& name, const FitResult& f)
{
    out.fits.emplace_back(name, f);
}

} // namespace zensim::detail
