#include "zensim/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace zensim {

const std::vector<KeySpec>& config_keys()
{
    static const std::vector<KeySpec> keys = {
        {"experiment.id", "", "experiment to run (see `zensim list`)"},
        {"experiment.seed", "1", "64-bit master seed"},
        {"experiment.reps", "auto", "Monte Carlo repetitions"},
        {"experiment.sweep_min", "auto", "sweep start (units depend on the experiment)"},
        {"experiment.sweep_max", "auto", "sweep end"},
        {"experiment.sweep_points", "auto", "number of sweep points"},
        {"experiment.time_max_us", "auto", "longest wait / evolution time"},
        {"experiment.time_points", "auto", "number of time samples"},
        {"experiment.eps1", "auto", "per-ion probability of starting in |up>"},
        {"experiment.eps2", "auto", "per-ion probability of being removed"},
        {"experiment.yb_state", "1", "initial Yb state for spin-exchange (1 = |1_g>, 0 = |0_g>)"},
        {"experiment.register_init", "thermal", "spectroscopy register state: thermal | polarized"},
        {"experiment.protocol", "auto", "memory: ramsey | motional-narrowing | dd; lifetime: bare | narrowed | "
                                        "decoupled; parity: bare | xy8; direct-drive-rabi: 1 | 2"},
        {"experiment.state", "Wv", "lifetime state: 0v | Wv"},
        {"experiment.cycles", "40", "PROPI cycles"},
        {"experiment.schedule", "interleaved", "PROPI transitions: c | b | interleaved"},
        {"experiment.direction", "down", "PROPI pumping direction: down | up | alternate"},
        {"experiment.direction_block", "10", "cycles per direction when alternating"},
        {"experiment.dd_period_us", "48", "register pi-pulse spacing t_D for the dd protocol"},
        {"experiment.hh_ions", "2", "full spin-7/2 register ions in HH spectroscopy"},
        {"experiment.b_osc_gauss", "1.94", "direct-drive amplitude"},
        {"experiment.envelope_c", "0.8", "post-processing decay envelope amplitude c"},
        {"experiment.envelope_tau_m", "90", "post-processing decay envelope tau_M (periods)"},
        {"system.representation", "auto", "full | reduced | mixed"},
        {"system.n_register", "4", "register ions (1-4)"},
        {"system.q_register_khz", "165", "register quadrupole Q/2pi"},
        {"system.q_bulk_khz", "171.3", "bulk quadrupole Q/2pi"},
        {"system.frozen_core", "true", "register Q differs from bulk Q"},
        {"system.knight", "true", "hyperfine coupling also driven by the Overhauser field"},
        {"system.nuclear_zeeman", "true", "include H_nz from site-resolved bath fields"},
        {"system.register_dipolar", "true", "include register dipole-dipole coupling"},
        {"system.enhanced_ising", "true", "include the detuning-enhanced Ising term"},
        {"bath.enabled", "true", "sample the Overhauser field"},
        {"bath.cutoff_angstrom", "25", "bath lattice cutoff radius"},
        {"bath.jump_rate_per_us", "0", "per-spin bath flip rate (0 = quasi-static)"},
        {"bath.gvz_override", "auto", "bath g_vz (auto = 1.6)"},
        {"bath.spectators", "2", "bath spins kept quantum in spectroscopy"},
        {"sequence.b_rf_gauss", "auto", "RF square-wave amplitude (auto = experiment default)"},
        {"sequence.k", "5", "ZenPol harmonic (odd)"},
        {"sequence.transition", "c", "addressed transition: a | b | c"},
        {"sequence.repetitions", "auto", "ZenPol periods per swap / run"},
        {"sequence.swap_periods", "10", "periods in a calibrated swap gate"},
        {"sequence.finite_pulses", "false", "evolve 25/50 ns pulses instead of instantaneous"},
        {"sequence.angle_error", "0", "relative pulse-angle error"},
        {"sequence.t_w_us", "3", "motional-narrowing half-spacing t_w"},
        {"sequence.xy8_spacing_us", "5.6", "XY-8 inter-pulse spacing"},
        {"sequence.decouple_period_us", "6", "direct-drive Yb pi-pulse spacing (protocol 2)"},
        {"inference.f_sw0", "0.83", "swap fidelity without excitation"},
        {"inference.f_sw1", "0.52", "swap fidelity with one excitation"},
        {"inference.q00", "auto", "parity readout q00 (auto = (1+f_sw0)/2)"},
        {"inference.q11", "auto", "parity readout q11 (auto = (1+f_sw1)/2)"},
        {"inference.samples", "200000", "posterior samples"},
        {"inference.counts_file", "", "CSV: window1,window2,window3,readout_id"},
        {"inference.parity_file", "", "CSV: t_us,y"},
        {"inference.populations", "0.12,0.40,0.32,0.16", "synthetic uncorrected populations (11,10,01,00)"},
        {"inference.shots", "4000", "synthetic population shots"},
        {"inference.coherence", "0.352", "synthetic corrected coherence"},
        {"inference.parity_points", "60", "synthetic parity points"},
        {"inference.parity_noise", "0.01", "synthetic parity noise sigma"},
        {"output.formats", "csv,json", "csv, json or both"},
    };
    return keys;
}

namespace {

const KeySpec* find_key(const std::string& key)
{
    for (const auto& k : config_keys())
        if (k.key == key) return &k;
    return nullptr;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Config::Config()
{
    for (const auto& k : config_keys()) values_[k.key] = k.default_value;
}

void Config::set(const std::string& key, const std::string& value)
{
    if (!find_key(key)) throw ConfigError(key, "unknown configuration key");
    values_[key] = trim(value);
}

void Config::set_assignment(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("", "override '" + assignment + "' is not key=value");
    set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

bool Config::has(const std::string& key) const
{
    auto it = values_.find(key);
    return it != values_.end() && !it->second.empty();
}

bool Config::is_auto(const std::string& key) const { return get_string(key) == "auto"; }

std::string Config::get_string(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(key, "unknown configuration key");
    return it->second;
}

double Config::get_double(const std::string& key) const
{
    const std::string v = get_string(key);
    if (v.empty()) throw ConfigError(key, "required value is missing");
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE) throw ConfigError(key, "'" + v + "' is not a number");
    return d;
}

double Config::get_double(const std::string& key, double fallback) const
{
    return is_auto(key) ? fallback : get_double(key);
}

long Config::get_int(const std::string& key) const
{
    const std::string v = get_string(key);
    if (v.empty()) throw ConfigError(key, "required value is missing");
    char* end = nullptr;
    errno = 0;
    const long n = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE) throw ConfigError(key, "'" + v + "' is not an integer");
    return n;
}

long Config::get_int(const std::string& key, long fallback) const { return is_auto(key) ? fallback : get_int(key); }

bool Config::get_bool(const std::string& key) const
{
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key, "'" + v + "' is not a boolean");
}

std::vector<double> Config::get_list(const std::string& key) const
{
    std::vector<double> out;
    std::stringstream ss(get_string(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        char* end = nullptr;
        const double d = std::strtod(item.c_str(), &end);
        if (item.empty() || *end != '\0') throw ConfigError(key, "'" + item + "' is not a number");
        out.push_back(d);
    }
    return out;
}

std::string Config::to_text() const
{
    std::ostringstream os;
    for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
    return os.str();
}

Config parse_config_text(const std::string& text, Config base)
{
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
        base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return base;
}

Config load_config_file(const std::string& path, Config base)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), std::move(base));
}

} // namespace zensim
