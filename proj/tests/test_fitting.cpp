#include "zensim/errors.hpp"
#include "zensim/fitting.hpp"
#include "zensim/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace zensim;

TEST_CASE("model names round-trip")
{
    for (auto m : {FitModel::ExpDecay, FitModel::GaussianDecay, FitModel::CosGaussian, FitModel::RbDecay,
                   FitModel::DetunedRabi})
        CHECK(parse_fit_model(to_string(m)) == m);
    CHECK_THROWS(parse_fit_model("spline"));
}

TEST_CASE("rb-decay arithmetic")
{
    // f = (1 + d) / 2 = 0.99975.
    const double d = 2 * 0.99975 - 1;
    CHECK(d == doctest::Approx(0.9995));
    CHECK(model_value(FitModel::RbDecay, {0.5, d}, 1000) == doctest::Approx(0.5 + 0.5 * std::pow(0.9995, 1000)));
}

TEST_CASE("gaussian decay recovers T within its interval")
{
    const double T = 80.0;
    int covered = 0;
    const int trials = 60;
    for (int k = 0; k < trials; ++k) {
        Rng rng = stream_rng(21, k);
        std::vector<double> x, y;
        for (int i = 0; i < 60; ++i) {
            x.push_back(i * 4.0);
            y.push_back(0.9 * std::exp(-std::pow(x.back() / T, 2)) + 0.05 + 0.02 * normal01(rng));
        }
        const auto f = fit(FitModel::GaussianDecay, x, y);
        REQUIRE(f.converged);
        const auto& p = f.param("T");
        CHECK(p.ci_low <= p.value);
        CHECK(p.ci_high >= p.value);
        covered += (p.ci_low <= T && T <= p.ci_high);
    }
    CHECK(covered / double(trials) == doctest::Approx(0.68).epsilon(0.25));
}

TEST_CASE("cos-gaussian carrier")
{
    std::vector<double> x, y;
    const double w = 6.283185307179586 * 0.991;
    for (int i = 0; i < 400; ++i) {
        x.push_back(i * 0.1);
        y.push_back(0.5 + 0.4 * std::exp(-std::pow(x.back() / 30, 2)) * std::cos(w * x.back() + 0.3));
    }
    const auto f = fit(FitModel::CosGaussian, x, y);
    CHECK(f.converged);
    CHECK(f.value("omega") / 6.283185307179586 * 1e3 == doctest::Approx(991).epsilon(1e-3));
}

TEST_CASE("detuned rabi and exp decay")
{
    std::vector<double> x, y, z;
    for (int i = 0; i < 50; ++i) {
        x.push_back(i);
        y.push_back(1 - 0.35 * (1 - std::cos(0.21 * i)));
        z.push_back(0.7 * std::exp(-i / 12.0) + 0.1);
    }
    const auto r = fit(FitModel::DetunedRabi, x, y);
    CHECK(r.value("C") == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(r.value("J") == doctest::Approx(0.21).epsilon(1e-6));
    const auto e = fit(FitModel::ExpDecay, x, z);
    CHECK(e.value("T") == doctest::Approx(12.0).epsilon(1e-6));
    CHECK(e.r_squared > 0.9999);
}

TEST_CASE("fit preconditions and non-convergence reporting")
{
    CHECK_THROWS_AS(fit(FitModel::CosGaussian, {1, 2, 3}, {1, 2, 3}), std::invalid_argument);
    std::vector<double> x(30), y(30, std::nan(""));
    for (int i = 0; i < 30; ++i) x[i] = i;
    const auto f = fit(FitModel::ExpDecay, x, y);
    CHECK(!f.converged);
    CHECK(!f.diagnostics.empty());
    CHECK_THROWS_AS(require_converged(f), NumericalError);
    const auto lr = linear_regression({1, 2, 3, 4}, {2, 4, 6, 8});
    CHECK(lr.slope == doctest::Approx(2.0));
    CHECK(lr.r_squared == doctest::Approx(1.0));
}
