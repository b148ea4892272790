#include "zensim/inference.hpp"

#include "zensim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace zensim {

double swap_fidelity(double p_pre, double p_post)
{
    if (p_pre == 0.5) throw std::invalid_argument("swap_fidelity: p_pre = 1/2 leaves the ratio undefined");
    const double r = (1.0 - 2.0 * p_post) / (1.0 - 2.0 * p_pre);
    if (r < 0) throw NumericalError("inference", "swap_fidelity: unphysical input, negative radicand");
    return std::sqrt(r);
}

CorrectionModel CorrectionModel::from_fidelities(double f_sw0, double f_sw1)
{
    return {f_sw0, f_sw1, 0.5 * (1.0 + f_sw0), 0.5 * (1.0 + f_sw1)};
}

Eigen::Matrix4d readout_matrix(const CorrectionModel& m)
{
    Eigen::Matrix2d block;
    block << 1 + m.f_sw1, 1 - m.f_sw0, 1 - m.f_sw1, 1 + m.f_sw0;
    Eigen::Matrix4d E = Eigen::Matrix4d::Zero();
    E.block<2, 2>(0, 0) = 0.5 * block;
    E.block<2, 2>(2, 2) = 0.5 * block;
    return E;
}

Eigen::Vector4d apply_readout(const Eigen::Vector4d& c, const CorrectionModel& model)
{
    return readout_matrix(model) * c;
}

Eigen::Vector4d correct_populations(const Eigen::Vector4d& p, const CorrectionModel& model)
{
    const Eigen::Matrix4d E = readout_matrix(model);
    Eigen::FullPivLU<Eigen::Matrix4d> lu(E);
    if (!lu.isInvertible() || std::abs(E.determinant()) < 1e-14)
        throw std::invalid_argument("correct_populations: correction matrix is singular");
    Eigen::Vector4d c = lu.solve(p);
    const double lo = c.minCoeff();
    if (lo < 0 && lo > -1e-9) {
        c = c.cwiseMax(0.0);
        c /= c.sum();
    }
    return c;
}

Eigen::Vector4d CountsRecord::frequencies() const
{
    const double n = static_cast<double>(total());
    if (n == 0) return Eigen::Vector4d::Zero();
    return Eigen::Vector4d(n11 / n, n10 / n, n01 / n, n00 / n);
}

CountsRecord sequential_tomography(const std::vector<DetectionRecord>& shots)
{
    CountsRecord out;
    for (const auto& s : shots) {
        if (s.window1 < 1) {
            ++out.discarded;
            continue;
        }
        const bool w = s.window2 >= 1 && s.window3 == 0;
        const bool zero = s.window2 == 0 && s.window3 >= 1;
        if (!w && !zero) {
            ++out.discarded;
            continue;
        }
        if (s.readout_id == 1) (w ? out.n01 : out.n00)++;
        else if (s.readout_id == 2) (w ? out.n11 : out.n10)++;
        else throw std::invalid_argument("sequential_tomography: readout id must be 1 or 2");
    }
    return out;
}

Eigen::Matrix<double, 2, 4> parity_swap_matrix(const CorrectionModel& m)
{
    const double s = std::sqrt(m.f_sw1);
    Eigen::Matrix<double, 2, 4> M;
    M << m.q11, 0.5 * (1 - s), 0.5 * (1 + s), 1 - m.q00,
        1 - m.q11, 0.5 * (1 + s), 0.5 * (1 - s), m.q00;
    return M;
}

Eigen::Matrix4d parity_wait_matrix(double t, double omega)
{
    const double c2 = std::pow(std::cos(omega * t / 2), 2), s2 = std::pow(std::sin(omega * t / 2), 2);
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    M(0, 0) = 1;
    M(1, 1) = c2;
    M(1, 2) = s2;
    M(2, 1) = s2;
    M(2, 2) = c2;
    M(3, 3) = 1;
    return M;
}

Eigen::Vector2d parity_model(double t, const Eigen::Vector4d& populations, double omega, const CorrectionModel& model)
{
    return parity_swap_matrix(model) * parity_wait_matrix(t, omega) * populations;
}

double coherence_from_contrast(double contrast, double f_sw1)
{
    if (f_sw1 <= 0) throw std::invalid_argument("coherence_from_contrast: F_sw1 must be positive");
    return contrast / (2.0 * std::sqrt(f_sw1));
}

double bell_fidelity(const Eigen::Vector4d& c, double rho01) { return 0.5 * (c(1) + c(2)) + rho01; }

namespace {

// Equal-tailed 68% interval and mode of a density on a uniform grid starting at x0.
Interval summarize(const std::vector<double>& density, double x0, double h)
{
    Interval iv;
    const double total = std::accumulate(density.begin(), density.end(), 0.0);
    if (total <= 0) return iv;
    const auto mode = std::max_element(density.begin(), density.end()) - density.begin();
    iv.estimate = x0 + h * mode;
    auto quantile = [&](double q) {
        double acc = 0;
        for (std::size_t k = 0; k < density.size(); ++k) {
            const double next = acc + density[k] / total;
            if (next >= q) {
                const double frac = density[k] > 0 ? (q - acc) / (density[k] / total) : 0.0;
                return x0 + h * (static_cast<double>(k) - 0.5 + frac);
            }
            acc = next;
        }
        return x0 + h * (density.size() - 1);
    };
    iv.low = std::max(x0, quantile(0.15865525393145707));
    iv.high = quantile(0.8413447460685429);
    iv.low = std::min(iv.low, iv.estimate);
    iv.high = std::max(iv.high, iv.estimate);
    return iv;
}

} // namespace

std::vector<double> coherence_posterior(const std::vector<std::pair<double, double>>& parity,
                                        const CorrectionModel& model, const MleSettings& s)
{
    const int nr = s.rho_grid;
    std::vector<double> logl(nr, 0.0);
    const double amp = std::sqrt(model.f_sw1);
    const double n = static_cast<double>(parity.size());
    // Sufficient statistics of the residual sum of squares as a quadratic in rho.
    double syy = 0, syc = 0, scc = 0;
    for (const auto& [t, y] : parity) {
        const double c = amp * std::cos(s.omega * t);
        syy += (y - 0.5) * (y - 0.5);
        syc += (y - 0.5) * c;
        scc += c * c;
    }
    std::vector<double> sig(s.sigma_grid), wsig(s.sigma_grid);
    const double lmin = std::log(s.sigma_min), lmax = std::log(s.sigma_max);
    const double dl = (lmax - lmin) / (s.sigma_grid - 1);
    for (int k = 0; k < s.sigma_grid; ++k) {
        sig[k] = std::exp(lmin + dl * k);
        // Trapezoid weights for d sigma on the log grid.
        wsig[k] = sig[k] * dl * ((k == 0 || k == s.sigma_grid - 1) ? 0.5 : 1.0);
    }
    std::vector<double> logpost(nr);
    for (int r = 0; r < nr; ++r) {
        const double rho = 0.5 * r / (nr - 1);
        const double ssr = syy - 2 * rho * syc + rho * rho * scc;
        // log sum_k w_k sigma_k^-n exp(-ssr / 2 sigma_k^2), stabilized.
        double mx = -1e300;
        std::vector<double> terms(s.sigma_grid);
        for (int k = 0; k < s.sigma_grid; ++k) {
            terms[k] = std::log(wsig[k]) - n * std::log(sig[k]) - ssr / (2 * sig[k] * sig[k]);
            mx = std::max(mx, terms[k]);
        }
        double acc = 0;
        for (double v : terms) acc += std::exp(v - mx);
        logpost[r] = mx + std::log(acc);
    }
    const double mx = *std::max_element(logpost.begin(), logpost.end());
    std::vector<double> post(nr);
    double tot = 0;
    for (int r = 0; r < nr; ++r) tot += (post[r] = std::exp(logpost[r] - mx));
    for (auto& v : post) v /= tot;
    return post;
}

FidelityEstimate mle_fidelity(const CountsRecord& counts, const CorrectionModel& model, const MleSettings& s)
{
    if (counts.n00 < 0 || counts.n01 < 0 || counts.n10 < 0 || counts.n11 < 0)
        throw std::invalid_argument("mle_fidelity: negative counts");
    if (counts.total() == 0) throw std::invalid_argument("mle_fidelity: no population counts");
    if (s.samples < 1 || s.rho_grid < 3 || s.sigma_grid < 2)
        throw std::invalid_argument("mle_fidelity: invalid integration settings");
    const Eigen::Matrix4d Einv = readout_matrix(model).inverse();
    const double alpha[4] = {counts.n11 + 1.0, counts.n10 + 1.0, counts.n01 + 1.0, counts.n00 + 1.0};

    // Posterior over corrected populations: Dirichlet draws of p mapped through E^-1, rejected
    // outside the physical simplex (the map is linear, so no Jacobian reweighting).
    const int nb = 2 * (s.rho_grid - 1) + 1;   // [0, 1] at the rho grid spacing
    const double h = 0.5 / (s.rho_grid - 1);
    std::vector<double> hist_g(nb, 0.0);
    std::vector<std::vector<double>> hist_c(4, std::vector<double>(nb, 0.0));
    Rng rng = stream_rng(s.seed, 0, 0x6d6c65);
    FidelityEstimate est;
    const long max_proposals = 200 * s.samples;
    while (est.accepted_samples < s.samples) {
        if (est.proposed_samples >= max_proposals)
            throw NumericalError("inference", "mle_fidelity: corrected-population posterior has negligible "
                                              "mass inside the physical simplex");
        ++est.proposed_samples;
        Eigen::Vector4d p;
        for (int k = 0; k < 4; ++k) p(k) = gamma_sample(rng, alpha[k]);
        p /= p.sum();
        const Eigen::Vector4d c = Einv * p;
        if (c.minCoeff() < 0) continue;
        ++est.accepted_samples;
        const double g = 0.5 * (c(1) + c(2));
        hist_g[std::min(nb - 1, static_cast<int>(std::lround(g / h)))] += 1;
        for (int k = 0; k < 4; ++k) hist_c[k][std::min(nb - 1, static_cast<int>(std::lround(c(k) / h)))] += 1;
    }
    Interval* ci[4] = {&est.c11, &est.c10, &est.c01, &est.c00};
    for (int k = 0; k < 4; ++k) {
        *ci[k] = summarize(hist_c[k], 0.0, h);
        est.c(k) = ci[k]->estimate;
    }
    const Interval g = summarize(hist_g, 0.0, h);
    est.fidelity_lower_bound = g.estimate;

    if (counts.parity.empty()) {
        est.has_coherence = false;
        est.fidelity = g;
        return est;
    }
    const auto post = coherence_posterior(counts.parity, model, s);
    est.rho01 = summarize(post, 0.0, h);
    // F = g + rho: discrete convolution on the shared grid.
    std::vector<double> pf(nb + s.rho_grid - 1, 0.0);
    for (int i = 0; i < nb; ++i) {
        if (hist_g[i] == 0) continue;
        for (int r = 0; r < s.rho_grid; ++r) pf[i + r] += hist_g[i] * post[r];
    }
    est.fidelity = summarize(pf, 0.0, h);
    return est;
}

LindbladState parse_lindblad_state(const std::string& s)
{
    if (s == "0v") return LindbladState::ZeroV;
    if (s == "Wv") return LindbladState::WV;
    if (s == "coherence") return LindbladState::Coherence;
    throw std::invalid_argument("unknown Lindblad state '" + s + "' (0v, Wv, coherence)");
}

double lindblad_single_excitation(double gamma, LindbladState state, double t)
{
    if (gamma < 0) throw std::invalid_argument("lindblad_single_excitation: negative rate");
    switch (state) {
    case LindbladState::ZeroV: return 1.0;
    case LindbladState::WV: return 0.75 * std::exp(-2.0 * gamma * t) + 0.25;
    case LindbladState::Coherence: return std::exp(-gamma * t);
    }
    return 0;
}

double lindblad_t1_w(double gamma) { return 1.0 / (2.0 * gamma); }
double lindblad_t2_star(double gamma) { return 1.0 / gamma; }

CountsRecord synthetic_counts(const Eigen::Vector4d& p, long shots, Rng& rng)
{
    CountsRecord rec;
    for (long s = 0; s < shots; ++s) {
        const double u = uniform01(rng);
        if (u < p[0]) ++rec.n11;
        else if (u < p[0] + p[1]) ++rec.n10;
        else if (u < p[0] + p[1] + p[2]) ++rec.n01;
        else ++rec.n00;
    }
    return rec;
}

std::vector<std::pair<double, double>> synthetic_parity(double rho01, double f_sw1, double omega,
                                                        int points, double noise, Rng& rng)
{
    std::vector<std::pair<double, double>> out;
    const double span = 4 * std::numbers::pi / omega;
    for (int i = 0; i < points; ++i) {
        const double t = span * i / points;
        out.emplace_back(t, 0.5 + std::sqrt(f_sw1) * rho01 * std::cos(omega * t) + noise * normal01(rng));
    }
    return out;
}

} // namespace zensim
