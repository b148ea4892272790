#include "experiment_support.hpp"

#include "zensim/inference.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace zensim {

using namespace detail;

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& path, const std::string& key,
                                               std::vector<std::string>& header)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(key, "cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto b = cell.find_first_not_of(" \t");
            const auto e = cell.find_last_not_of(" \t");
            cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
        }
        if (first) {
            first = false;
            header = cells;
            continue;
        }
        rows.push_back(cells);
    }
    return rows;
}

double to_double(const std::string& s, const std::string& key)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "not a number: '" + s + "'");
    }
}

std::map<std::string, std::size_t> index_of(const std::vector<std::string>& header)
{
    std::map<std::string, std::size_t> m;
    for (std::size_t i = 0; i < header.size(); ++i) m[header[i]] = i;
    return m;
}

// Either aggregated counts (n00,n01,n10,n11) or per-shot windows (window1..3, readout_id).
CountsRecord load_counts(const std::string& path)
{
    const std::string key = "inference.counts_file";
    std::vector<std::string> header;
    const auto rows = read_csv(path, key, header);
    const auto idx = index_of(header);
    auto col = [&](const std::vector<std::string>& r, const std::string& name) {
        const auto it = idx.find(name);
        if (it == idx.end() || it->second >= r.size()) throw ConfigError(key, "missing column " + name);
        return to_double(r[it->second], key);
    };
    if (idx.count("window1")) {
        std::vector<DetectionRecord> shots;
        for (const auto& r : rows)
            shots.push_back({static_cast<int>(col(r, "window1")), static_cast<int>(col(r, "window2")),
                             static_cast<int>(col(r, "window3")), static_cast<int>(col(r, "readout_id"))});
        return sequential_tomography(shots);
    }
    CountsRecord rec;
    for (const auto& r : rows) {
        rec.n00 += std::lround(col(r, "n00"));
        rec.n01 += std::lround(col(r, "n01"));
        rec.n10 += std::lround(col(r, "n10"));
        rec.n11 += std::lround(col(r, "n11"));
    }
    if (rec.total() <= 0) throw ConfigError(key, "no counts");
    return rec;
}

std::vector<std::pair<double, double>> load_parity(const std::string& path)
{
    const std::string key = "inference.parity_file";
    std::vector<std::string> header;
    const auto rows = read_csv(path, key, header);
    const auto idx = index_of(header);
    if (!idx.count("t_us") || !idx.count("y")) throw ConfigError(key, "expected columns t_us,y");
    std::vector<std::pair<double, double>> out;
    for (const auto& r : rows) {
        if (r.size() < header.size()) throw ConfigError(key, "short row");
        out.emplace_back(to_double(r[idx.at("t_us")], key), to_double(r[idx.at("y")], key));
    }
    return out;
}

Eigen::Vector4d parse_populations(const Config& c)
{
    const auto list = c.get_list("inference.populations");
    if (list.size() != 4) throw ConfigError("inference.populations", "expected 4 values (11,10,01,00)");
    Eigen::Vector4d p;
    for (int i = 0; i < 4; ++i) p[i] = list[i];
    if (p.minCoeff() < 0 || std::abs(p.sum() - 1) > 1e-6)
        throw ConfigError("inference.populations", "must be a probability vector");
    return p;
}

} // namespace

ExperimentOutput bell_fidelity_experiment(const Config& c)
{
    const Physics ph = make_physics(c);
    const double f0 = c.get_double("inference.f_sw0");
    const double f1 = c.get_double("inference.f_sw1");
    CorrectionModel model = CorrectionModel::from_fidelities(f0, f1);
    if (!c.is_auto("inference.q00")) model.q00 = c.get_double("inference.q00");
    if (!c.is_auto("inference.q11")) model.q11 = c.get_double("inference.q11");

    Rng rng = stream_rng(ph.seed, 0);
    const std::string counts_file = c.get_string("inference.counts_file");
    const std::string parity_file = c.get_string("inference.parity_file");
    ExperimentOutput out;
    out.id = "bell-fidelity";
    const double omega = ph.vc.omega_c();
    CountsRecord counts;
    if (!counts_file.empty()) {
        counts = load_counts(counts_file);
        out.note("counts_source", counts_file);
    } else {
        const long shots = c.get_int("inference.shots");
        if (shots <= 0) throw ConfigError("inference.shots", "must be positive");
        counts = synthetic_counts(parse_populations(c), shots, rng);
        out.note("counts_source", "synthetic");
    }
    if (!parity_file.empty()) {
        counts.parity = load_parity(parity_file);
        out.note("parity_source", parity_file);
    } else {
        const int points = static_cast<int>(c.get_int("inference.parity_points"));
        const double rho = c.get_double("inference.coherence");
        if (points > 0) {
            counts.parity = synthetic_parity(rho, model.f_sw1, omega, points,
                                             c.get_double("inference.parity_noise"), rng);
            out.note("parity_source", "synthetic");
        }
    }

    MleSettings s;
    s.samples = c.get_int("inference.samples");
    s.omega = omega;
    s.seed = ph.seed;
    const FidelityEstimate est = mle_fidelity(counts, model, s);

    out.table.columns = {"estimate", "ci_low", "ci_high"};
    auto row = [&](const std::string& name, const Interval& i) {
        out.table.labels.push_back(name);
        out.table.rows.push_back({i.estimate, i.low, i.high});
        out.add(name, i.estimate);
        out.add(name + "_low", i.low);
        out.add(name + "_high", i.high);
    };
    row("c11", est.c11);
    row("c10", est.c10);
    row("c01", est.c01);
    row("c00", est.c00);
    if (est.has_coherence) row("rho01", est.rho01);
    row("fidelity", est.fidelity);
    out.add("fidelity_lower_bound", est.fidelity_lower_bound);
    out.add("n_total", static_cast<double>(counts.total()));
    out.add("n_discarded", static_cast<double>(counts.discarded));
    out.add("accepted_samples", static_cast<double>(est.accepted_samples));

    const Eigen::Vector4d p = counts.frequencies();
    const Eigen::Vector4d c_lin = correct_populations(p, model);
    out.add("c10_linear", c_lin[1]);
    out.add("c01_linear", c_lin[2]);
    if (est.has_coherence) {
        // Same data without readout or swap correction.
        const double rho_raw = est.rho01.estimate * std::sqrt(model.f_sw1);
        out.add("rho01_uncorrected", rho_raw);
        out.add("fidelity_uncorrected", bell_fidelity(p, rho_raw));
    }
    out.add("f_sw0", model.f_sw0);
    out.add("f_sw1", model.f_sw1);
    out.add("q00", model.q00);
    out.add("q11", model.q11);
    out.note("ordering", "populations ordered 11,10,01,00 (Yb state, register W/0)");
    return out;
}

} // namespace zensim
