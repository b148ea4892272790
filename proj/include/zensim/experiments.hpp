#pragma once

#include "zensim/config.hpp"
#include "zensim/fitting.hpp"

#include <string>
#include <utility>
#include <vector>

namespace zensim {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;   // optional leading text column, one per row

    std::vector<double> column(const std::string& name) const;
};

struct ExperimentOutput {
    std::string id;
    Table table;
    std::vector<std::pair<std::string, double>> values;        // scalar results, in emission order
    std::vector<std::pair<std::string, std::string>> notes;    // metadata, references
    std::vector<std::pair<std::string, FitResult>> fits;

    double value(const std::string& name) const;
    const FitResult& fit(const std::string& name) const;
    void add(const std::string& name, double v) { values.emplace_back(name, v); }
    void note(const std::string& name, const std::string& v) { notes.emplace_back(name, v); }
};

struct ExperimentInfo {
    std::string id;
    std::string description;
    std::string figure;
};

const std::vector<ExperimentInfo>& experiment_catalog();

// Header row plus one line per row, 9 significant digits.
std::string to_csv(const Table& t);

// Dispatch on experiment.id. Pure function of the configuration (including its seed).
ExperimentOutput run_experiment(const Config& config);

ExperimentOutput zenpol_spectroscopy(const Config& config);
ExperimentOutput propi(const Config& config);
ExperimentOutput spin_exchange(const Config& config);
ExperimentOutput detuned_exchange(const Config& config);
ExperimentOutput memory_suite(const Config& config);
ExperimentOutput lifetime_suite(const Config& config);
ExperimentOutput hh_spectroscopy(const Config& config);
ExperimentOutput parity_oscillation(const Config& config);
ExperimentOutput bell_fidelity_experiment(const Config& config);
ExperimentOutput direct_drive_rabi_experiment(const Config& config);

} // namespace zensim
