#include "zensim/fitting.hpp"

#include "zensim/errors.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace zensim {

std::string to_string(FitModel m)
{
    switch (m) {
    case FitModel::ExpDecay: return "exp-decay";
    case FitModel::GaussianDecay: return "gaussian-decay";
    case FitModel::CosGaussian: return "cos-gaussian";
    case FitModel::RbDecay: return "rb-decay";
    case FitModel::DetunedRabi: return "detuned-rabi";
    }
    return "?";
}

FitModel parse_fit_model(const std::string& s)
{
    for (auto m : {FitModel::ExpDecay, FitModel::GaussianDecay, FitModel::CosGaussian, FitModel::RbDecay,
                   FitModel::DetunedRabi})
        if (to_string(m) == s) return m;
    throw std::invalid_argument("unknown fit model '" + s + "'");
}

std::vector<std::string> parameter_names(FitModel m)
{
    switch (m) {
    case FitModel::ExpDecay: return {"A", "T", "c"};
    case FitModel::GaussianDecay: return {"A", "T", "c"};
    case FitModel::CosGaussian: return {"A", "T", "omega", "phi", "c"};
    case FitModel::RbDecay: return {"P0", "d"};
    case FitModel::DetunedRabi: return {"C", "J"};
    }
    return {};
}

double FitResult::value(const std::string& name) const { return param(name).value; }

const FitParameter& FitResult::param(const std::string& name) const
{
    for (const auto& p : params)
        if (p.name == name) return p;
    throw std::invalid_argument("fit result has no parameter '" + name + "'");
}

double model_value(FitModel m, const std::vector<double>& p, double x)
{
    switch (m) {
    case FitModel::ExpDecay: return p[0] * std::exp(-x / p[1]) + p[2];
    case FitModel::GaussianDecay: return p[0] * std::exp(-(x / p[1]) * (x / p[1])) + p[2];
    case FitModel::CosGaussian:
        return p[0] * std::exp(-(x / p[1]) * (x / p[1])) * std::cos(p[2] * x + p[3]) + p[4];
    case FitModel::RbDecay: return 0.5 + p[0] * std::pow(p[1], x);
    case FitModel::DetunedRabi: return 1.0 - 0.5 * p[0] * (1.0 - std::cos(p[1] * x));
    }
    return 0;
}

double periodogram_peak(const std::vector<double>& x, const std::vector<double>& y, double w_min, double w_max,
                        int points)
{
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double best = w_min, best_p = -1;
    for (int k = 0; k < points; ++k) {
        const double w = w_min + (w_max - w_min) * k / (points - 1);
        double c = 0, s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            c += (y[i] - mean) * std::cos(w * x[i]);
            s += (y[i] - mean) * std::sin(w * x[i]);
        }
        if (c * c + s * s > best_p) {
            best_p = c * c + s * s;
            best = w;
        }
    }
    return best;
}

namespace {

// 1/e point of |y - tail| relative to its start.
double decay_scale(const std::vector<double>& x, const std::vector<double>& y, double tail)
{
    const double a0 = std::abs(y.front() - tail);
    for (std::size_t i = 1; i < y.size(); ++i)
        if (std::abs(y[i] - tail) < a0 / std::exp(1.0)) return std::max(x[i], 1e-12);
    return std::max(x.back() - x.front(), 1e-12);
}

double max_angular_frequency(const std::vector<double>& x)
{
    double dmin = 1e300;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] > x[i - 1]) dmin = std::min(dmin, x[i] - x[i - 1]);
    return 3.14159265358979323846 / dmin;
}

struct Residuals {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    FitModel model;
    const std::vector<double>* x;
    const std::vector<double>* y;
    int n_params;

    int inputs() const { return n_params; }
    int values() const { return static_cast<int>(x->size()); }

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const
    {
        std::vector<double> pv(p.data(), p.data() + p.size());
        for (std::size_t i = 0; i < x->size(); ++i) r(i) = model_value(model, pv, (*x)[i]) - (*y)[i];
        return 0;
    }
};

} // namespace

std::vector<double> initial_guess(FitModel m, const std::vector<double>& x, const std::vector<double>& y)
{
    const double tail = y.back();
    switch (m) {
    case FitModel::ExpDecay:
    case FitModel::GaussianDecay:
        return {y.front() - tail, decay_scale(x, y, tail), tail};
    case FitModel::CosGaussian: {
        const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
        const double w = periodogram_peak(x, y, 0.0, max_angular_frequency(x));
        double c = 0, s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            c += (y[i] - mean) * std::cos(w * x[i]);
            s += (y[i] - mean) * std::sin(w * x[i]);
        }
        const double amp = *std::max_element(y.begin(), y.end()) - mean;
        return {amp, 0.5 * (x.back() - x.front()), w, std::atan2(-s, c), mean};
    }
    case FitModel::RbDecay: {
        const double p0 = y.front() - 0.5;
        const double pe = y.back() - 0.5;
        double d = 0.99;
        if (p0 != 0 && pe / p0 > 0 && x.back() > x.front())
            d = std::pow(pe / p0, 1.0 / (x.back() - x.front()));
        return {p0, d};
    }
    case FitModel::DetunedRabi: {
        const double w = periodogram_peak(x, y, 0.0, max_angular_frequency(x));
        const double lo = *std::min_element(y.begin(), y.end());
        return {std::clamp(1.0 - lo, 0.05, 1.0), w};
    }
    }
    return {};
}

FitResult fit(FitModel m, const std::vector<double>& x, const std::vector<double>& y, std::vector<double> start)
{
    const auto names = parameter_names(m);
    const int np = static_cast<int>(names.size());
    if (x.size() != y.size()) throw std::invalid_argument("fit: x and y differ in length");
    if (static_cast<int>(x.size()) < 3 * np)
        throw std::invalid_argument("fit: need at least " + std::to_string(3 * np) + " points for " + to_string(m));
    if (start.empty()) start = initial_guess(m, x, y);
    if (static_cast<int>(start.size()) != np) throw std::invalid_argument("fit: wrong number of start values");

    Residuals functor{m, &x, &y, np};
    Eigen::NumericalDiff<Residuals> numdiff(functor);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Residuals>> lm(numdiff);
    lm.parameters.maxfev = 4000;
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-12;
    Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(start.data(), np);
    const auto status = lm.minimize(p);

    FitResult res;
    res.model = m;
    res.status = static_cast<int>(status);
    using S = Eigen::LevenbergMarquardtSpace::Status;
    res.converged = status == S::RelativeReductionTooSmall || status == S::RelativeErrorTooSmall
                    || status == S::RelativeErrorAndReductionTooSmall || status == S::CosinusTooSmall
                    || status == S::FtolTooSmall || status == S::XtolTooSmall;
    if (!p.allFinite()) res.converged = false;

    Eigen::VectorXd r(x.size());
    functor(p, r);
    res.residual_norm = r.norm();
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double sst = 0;
    for (double v : y) sst += (v - mean) * (v - mean);
    res.r_squared = sst > 0 ? 1.0 - r.squaredNorm() / sst : (r.squaredNorm() == 0 ? 1.0 : 0.0);

    Eigen::MatrixXd J(x.size(), np);
    numdiff.df(p, J);
    const int dof = static_cast<int>(x.size()) - np;
    const double s2 = r.squaredNorm() / dof;
    Eigen::MatrixXd JtJ = J.transpose() * J;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(JtJ);
    Eigen::MatrixXd cov = cod.pseudoInverse() * s2;
    if (cod.rank() < np) {
        res.diagnostics += "singular normal matrix (rank " + std::to_string(cod.rank()) + "); ";
    }
    for (int k = 0; k < np; ++k) {
        FitParameter fp;
        fp.name = names[k];
        fp.value = p(k);
        fp.stderr_ = std::sqrt(std::max(0.0, cov(k, k)));
        fp.ci_low = fp.value - fp.stderr_;
        fp.ci_high = fp.value + fp.stderr_;
        res.params.push_back(fp);
    }
    res.diagnostics += "lm status " + std::to_string(res.status) + ", evaluations " + std::to_string(lm.nfev)
                       + ", residual norm " + std::to_string(res.residual_norm);
    return res;
}

const FitResult& require_converged(const FitResult& r)
{
    if (!r.converged) throw NumericalError("fit", to_string(r.model) + " did not converge: " + r.diagnostics);
    return r;
}

LinearFit linear_regression(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_regression: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    std::vector<double> pred;
    for (double v : x) pred.push_back(f.slope * v + f.intercept);
    f.r_squared = r_squared(y, pred);
    return f;
}

double r_squared(const std::vector<double>& y, const std::vector<double>& prediction)
{
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double sse = 0, sst = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        sse += (y[i] - prediction[i]) * (y[i] - prediction[i]);
        sst += (y[i] - my) * (y[i] - my);
    }
    return sst > 0 ? 1.0 - sse / sst : (sse == 0 ? 1.0 : 0.0);
}

} // namespace zensim
