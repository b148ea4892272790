// zensim command line: run an experiment from a config file and flag overrides, or list the catalog.
#include "zensim/config.hpp"
#include "zensim/errors.hpp"
#include "zensim/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr const char* kCodeVersion = "0.1.0";

json number(double v)
{
    if (std::isfinite(v)) return v;
    return nullptr;
}

json fit_json(const zensim::FitResult& f)
{
    json j;
    j["model"] = zensim::to_string(f.model);
    j["converged"] = f.converged;
    j["residual_norm"] = number(f.residual_norm);
    j["r_squared"] = number(f.r_squared);
    if (!f.diagnostics.empty()) j["diagnostics"] = f.diagnostics;
    json params = json::object();
    for (const auto& p : f.params)
        params[p.name] = {{"value", number(p.value)},
                          {"stderr", number(p.stderr_)},
                          {"ci68", {number(p.ci_low), number(p.ci_high)}}};
    j["parameters"] = params;
    return j;
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
}

int run(const std::string& config_path, const std::string& experiment, const std::string& seed,
        const std::string& reps, const std::vector<std::string>& sets, const std::string& out_dir)
{
    zensim::Config cfg;
    if (!config_path.empty()) cfg = zensim::load_config_file(config_path);
    if (!experiment.empty()) cfg.set("experiment.id", experiment);
    if (!seed.empty()) cfg.set("experiment.seed", seed);
    if (!reps.empty()) cfg.set("experiment.reps", reps);
    for (const auto& s : sets) cfg.set_assignment(s);
    if (cfg.get_string("experiment.id").empty())
        throw zensim::ConfigError("experiment.id", "required (use --experiment or the config file)");
    const auto formats = cfg.get_string("output.formats");
    const bool csv = formats.find("csv") != std::string::npos;
    const bool js = formats.find("json") != std::string::npos;
    if (!csv && !js) throw zensim::ConfigError("output.formats", "expected csv and/or json");

    const auto t0 = std::chrono::steady_clock::now();
    const zensim::ExperimentOutput out = zensim::run_experiment(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    fs::create_directories(out_dir);
    const fs::path base = fs::path(out_dir) / out.id;
    write_file(base.string() + ".config", cfg.to_text());
    if (csv) write_file(base.string() + ".csv", zensim::to_csv(out.table));
    if (js) {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["code_version"] = kCodeVersion;
        j["experiment"] = out.id;
        j["seed"] = cfg.get_string("experiment.seed");
        json values = json::object();
        for (const auto& [k, v] : out.values) values[k] = number(v);
        j["values"] = values;
        json fits = json::object();
        for (const auto& [k, f] : out.fits) fits[k] = fit_json(f);
        j["fits"] = fits;
        json notes = json::object();
        for (const auto& [k, v] : out.notes) notes[k] = v;
        j["notes"] = notes;
        j["columns"] = out.table.columns;
        json resolved = json::object();
        for (const auto& [k, v] : cfg.values()) resolved[k] = v;
        j["config"] = resolved;
        write_file(base.string() + ".json", j.dump(2) + "\n");
    }
    std::cerr << out.id << ": " << out.table.rows.size() << " rows in " << seconds << " s -> "
              << base.string() << ".*\n";
    for (const auto& [k, v] : out.values) std::cout << k << " = " << v << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"zensim: nuclear spin register simulator"};
    app.require_subcommand(1);

    std::string config_path, experiment, seed, reps, out_dir = "results";
    std::vector<std::string> sets;
    auto* run_cmd = app.add_subcommand("run", "run one experiment");
    run_cmd->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    run_cmd->add_option("--experiment", experiment, "experiment id (see `list`)");
    run_cmd->add_option("--seed", seed, "64-bit seed");
    run_cmd->add_option("--reps", reps, "Monte Carlo repetitions");
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--set", sets, "key=value override (repeatable)");

    auto* list_cmd = app.add_subcommand("list", "list experiments");
    auto* keys_cmd = app.add_subcommand("keys", "list configuration keys with defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*list_cmd) {
            for (const auto& e : zensim::experiment_catalog())
                std::cout << e.id << "\t" << e.figure << "\t" << e.description << '\n';
            return 0;
        }
        if (*keys_cmd) {
            for (const auto& k : zensim::config_keys())
                std::cout << k.key << " = " << k.default_value << "\t# " << k.help << '\n';
            return 0;
        }
        return run(config_path, experiment, seed, reps, sets, out_dir);
    } catch (const zensim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const zensim::NumericalError& e) {
        std::cerr << "numerical error [" << e.module() << "]: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
