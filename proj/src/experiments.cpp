#include "zensim/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace zensim {

std::vector<double> Table::column(const std::string& name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("no column " + name);
    const auto j = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(j));
    return out;
}

double ExperimentOutput::value(const std::string& name) const
{
    for (const auto& [k, v] : values)
        if (k == name) return v;
    throw std::out_of_range("no value " + name);
}

const FitResult& ExperimentOutput::fit(const std::string& name) const
{
    for (const auto& [k, f] : fits)
        if (k == name) return f;
    throw std::out_of_range("no fit " + name);
}

std::string to_csv(const Table& t)
{
    const bool labelled = !t.labels.empty();
    if (labelled && t.labels.size() != t.rows.size()) throw std::logic_error("to_csv: label count");
    std::string out;
    if (labelled) out += "quantity";
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        if (j > 0 || labelled) out += ',';
        out += t.columns[j];
    }
    out += '\n';
    char buf[64];
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (labelled) out += t.labels[i];
        for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
            if (j > 0 || labelled) out += ',';
            const double v = t.rows[i][j];
            std::snprintf(buf, sizeof buf, "%.9g", v == 0 ? 0.0 : v);   // no "-0"
            out += buf;
        }
        out += '\n';
    }
    return out;
}

const std::vector<ExperimentInfo>& experiment_catalog()
{
    static const std::vector<ExperimentInfo> cat = {
        {"zenpol-spectroscopy", "Yb |0_g> population vs ZenPol frequency 1/(2 tau)", "Fig. 2b"},
        {"propi", "register polarization by repeated swap and Yb reset", "Extended Data Fig. 5"},
        {"spin-exchange", "Yb-register exchange oscillation vs ZenPol periods", "Fig. 2c"},
        {"detuned-exchange", "exchange rate and contrast vs detuning", "Extended Data Fig. 6"},
        {"memory", "register coherence: ramsey, motional narrowing, dynamical decoupling", "Fig. 3"},
        {"lifetime", "register |W_v> and |0_v> population lifetimes", "Extended Data Fig. 8"},
        {"hh-spectroscopy", "Hartmann-Hahn drive spectroscopy", "Extended Data Fig. 3"},
        {"parity", "Yb-register parity oscillation after sqrt-swap", "Fig. 4a,b"},
        {"bell-fidelity", "Bell-state fidelity from counts and parity data", "Fig. 4c"},
        {"direct-drive-rabi", "direct RF drive of a register spin", "Extended Data Fig. 7"},
    };
    return cat;
}

ExperimentOutput run_experiment(const Config& config)
{
    const std::string id = config.get_string("experiment.id");
    ExperimentOutput out;
    if (id == "zenpol-spectroscopy") out = zenpol_spectroscopy(config);
    else if (id == "propi") out = propi(config);
    else if (id == "spin-exchange") out = spin_exchange(config);
    else if (id == "detuned-exchange") out = detuned_exchange(config);
    else if (id == "memory") out = memory_suite(config);
    else if (id == "lifetime") out = lifetime_suite(config);
    else if (id == "hh-spectroscopy") out = hh_spectroscopy(config);
    else if (id == "parity") out = parity_oscillation(config);
    else if (id == "bell-fidelity") out = bell_fidelity_experiment(config);
    else if (id == "direct-drive-rabi") out = direct_drive_rabi_experiment(config);
    else if (id.empty()) throw ConfigError("experiment.id", "required");
    else throw ConfigError("experiment.id", "unknown experiment '" + id + "'");
    out.id = id;
    return out;
}

} // namespace zensim
