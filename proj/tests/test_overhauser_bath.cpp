#include "zensim/overhauser_bath.hpp"

#include <doctest.h>

#include <cmath>

using namespace zensim;

namespace {

BathSpec single_site(const Eigen::Vector3d& p)
{
    BathSpec spec;
    spec.sites.push_back({p, p.norm(), p.z() / p.norm()});
    spec.yb_coefficients = field_coefficients(spec, Eigen::Vector3d::Zero());
    return spec;
}

} // namespace

TEST_CASE("single-site field values")
{
    // Magic angle: n^2 = 1/3.
    const double n = 1 / std::sqrt(3.0);
    const BathSpec magic = single_site(Eigen::Vector3d(std::sqrt(1 - n * n), 0, n) * 4.0);
    CHECK(std::abs(overhauser_field(magic, {3.5})) < 1e-15);
    // r = 3.1 A on axis, m = 7/2: mu0 muN gvz (3 - 1) m / 4 pi r^3, in gauss.
    const BathSpec axis = single_site(Eigen::Vector3d(0, 0, 3.1));
    const double hand = 1e-7 * 5.0507837461e-27 * 1.6 * 2.0 * 3.5 / std::pow(3.1e-10, 3) * 1e4;
    CHECK(overhauser_field(axis, {3.5}) == doctest::Approx(hand).epsilon(1e-8));
    CHECK(hand == doctest::Approx(1.90).epsilon(0.01));
}

TEST_CASE("bath sampling statistics")
{
    const BathSpec spec = make_bath_spec(25.0, 0.0, 1.6);
    REQUIRE(!spec.sites.empty());
    const int n = 20000;
    double s = 0, s2 = 0, s3 = 0;
    for (int r = 0; r < n; ++r) {
        Rng rng = stream_rng(11, r);
        const double b = sample_bath(spec, rng).field;
        s += b;
        s2 += b * b;
        s3 += b * b * b;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    const double sd = std::sqrt(field_variance(spec));
    CHECK(std::abs(mean) < 4 * sd / std::sqrt(n));
    // Analytic variance oracle, sampling error ~ sqrt(2/n) ~ 1%.
    CHECK(var == doctest::Approx(field_variance(spec)).epsilon(0.04));
    const double skew = (s3 / n - 3 * mean * var - mean * mean * mean) / std::pow(var, 1.5);
    CHECK(std::abs(skew) < 0.05);

    Rng a = stream_rng(5, 0), b = stream_rng(5, 0);
    CHECK(sample_bath(spec, a).m == sample_bath(spec, b).m);
    BathSpec empty;
    CHECK_THROWS_AS(sample_bath(empty, a), std::invalid_argument);
}

TEST_CASE("field is linear in the projections")
{
    const BathSpec spec = make_bath_spec(15.0, 0.0, 1.6);
    Rng rng = stream_rng(2, 0);
    auto st = sample_bath(spec, rng);
    auto neg = st.m;
    for (auto& m : neg) m = -m;
    CHECK(overhauser_field(spec, neg) == doctest::Approx(-st.field));
}

TEST_CASE("variance converges with the cutoff radius")
{
    const double v15 = field_variance(make_bath_spec(15.0, 0.0, 1.6));
    const double v25 = field_variance(make_bath_spec(25.0, 0.0, 1.6));
    const double v35 = field_variance(make_bath_spec(35.0, 0.0, 1.6));
    CHECK(std::abs(v35 - v25) / v25 < 0.01);
    CHECK(std::abs(v35 - v25) < std::abs(v25 - v15));
}

TEST_CASE("bath jumps")
{
    const BathSpec spec = make_bath_spec(12.0, 0.0, 1.6);
    Rng rng = stream_rng(3, 0);
    const BathState st = sample_bath(spec, rng);
    CHECK(evolve_bath(spec, st, 10.0, 0.0, rng).m == st.m);

    BathState top = st;
    for (auto& m : top.m) m = 3.5;
    const BathState next = evolve_bath(spec, top, 1e-3, 1.0, rng);
    for (double m : next.m) CHECK((m == 3.5 || m == 2.5));

    // Long-time marginal is uniform over the 8 projections.
    std::vector<int> hist(8, 0);
    int total = 0;
    for (int r = 0; r < 400; ++r) {
        Rng g = stream_rng(9, r);
        BathState s = top;
        s = evolve_bath(spec, s, 200.0, 1.0, g);
        for (double m : s.m) {
            ++hist[static_cast<int>(m + 3.5)];
            ++total;
        }
    }
    for (int h : hist) CHECK(h / static_cast<double>(total) == doctest::Approx(0.125).epsilon(0.1));
}
