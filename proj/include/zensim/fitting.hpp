#pragma once

#include <string>
#include <vector>

namespace zensim {

enum class FitModel {
    ExpDecay,        // A exp(-x/T) + c
    GaussianDecay,   // A exp(-(x/T)^2) + c
    CosGaussian,     // A exp(-(x/T)^2) cos(w x + phi) + c
    RbDecay,         // 0.5 + P0 d^x
    DetunedRabi,     // 1 - (C/2)(1 - cos(J x))
};

std::string to_string(FitModel m);
FitModel parse_fit_model(const std::string& s);
std::vector<std::string> parameter_names(FitModel m);

struct FitParameter {
    std::string name;
    double value = 0;
    double stderr_ = 0;
    double ci_low = 0, ci_high = 0;   // 68%
};

struct FitResult {
    FitModel model = FitModel::ExpDecay;
    std::vector<FitParameter> params;
    double residual_norm = 0;
    double r_squared = 0;
    bool converged = false;
    int status = 0;
    std::string diagnostics;

    double value(const std::string& name) const;
    const FitParameter& param(const std::string& name) const;
};

double model_value(FitModel m, const std::vector<double>& p, double x);

// Heuristic starting point from the data (periodogram for oscillating models).
std::vector<double> initial_guess(FitModel m, const std::vector<double>& x, const std::vector<double>& y);

// Levenberg-Marquardt least squares; CIs from the residual covariance. Needs >= 3 points per
// parameter. Non-convergence is reported in the result, never replaced by another estimate.
FitResult fit(FitModel m, const std::vector<double>& x, const std::vector<double>& y,
              std::vector<double> start = {});

// Throws NumericalError("fit", ...) unless the fit converged.
const FitResult& require_converged(const FitResult& r);

// Dominant angular frequency of y(x) - mean over [w_min, w_max] on a uniform grid.
double periodogram_peak(const std::vector<double>& x, const std::vector<double>& y, double w_min,
                        double w_max, int points = 4000);

struct LinearFit {
    double slope = 0, intercept = 0, r_squared = 0;
};
LinearFit linear_regression(const std::vector<double>& x, const std::vector<double>& y);

// Coefficient of determination of predictions against data.
double r_squared(const std::vector<double>& y, const std::vector<double>& prediction);

} // namespace zensim
