#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <etlab/arith.hpp>
#include <etlab/empirics.hpp>
#include <etlab/error.hpp>
#include <etlab/random_model.hpp>
#include <etlab/series.hpp>

namespace {

using namespace etlab;
constexpr double pi = std::numbers::pi;

TEST(TGrid, StratifiedCells) {
    const auto g1 = t_grid(1e6, 1, GridStrategy::jittered_stratified, 3);
    ASSERT_EQ(g1.points.size(), 1u);
    EXPECT_GE(g1.points[0], 1e6);
    EXPECT_LE(g1.points[0], 2e6);

    const double T = 1e6;
    const auto g = t_grid(T, 100, GridStrategy::jittered_stratified, 3);
    std::vector<int> hits(100, 0);
    for (double t : g.points) ++hits[static_cast<int>((t - T) / (T / 100))];
    for (int h : hits) EXPECT_EQ(h, 1);
    EXPECT_EQ(g.points, t_grid(T, 100, GridStrategy::jittered_stratified, 3).points);
    EXPECT_NE(g.points, t_grid(T, 100, GridStrategy::jittered_stratified, 4).points);
}

TEST(TGrid, MidpointAndUniform) {
    const auto m = t_grid(10, 4, GridStrategy::midpoint, 0);
    EXPECT_EQ(m.points, (std::vector<double>{11.25, 13.75, 16.25, 18.75}));
    const auto u = t_grid(10, 1000, GridStrategy::uniform_random, 1);
    for (double t : u.points) {
        EXPECT_GE(t, 10.0);
        EXPECT_LT(t, 20.0);
    }
    EXPECT_THROW(t_grid(1, 10, GridStrategy::midpoint, 0), Error);
    EXPECT_EQ(parse_grid_strategy("stratified"), GridStrategy::jittered_stratified);
    EXPECT_THROW(parse_grid_strategy("spiral"), Error);
}

TEST(Ks, HandCases) {
    const std::vector<double> a{0.1, 0.5, 0.9}, b{0.2, 0.6};
    EXPECT_NEAR(ks_distance(empirical_cdf(a), empirical_cdf(b)), 1.0 / 3, 1e-15);
    EXPECT_EQ(ks_distance(empirical_cdf(a), empirical_cdf(a)), 0.0);
    const std::vector<double> lo{1, 2, 3}, hi{4, 5};
    EXPECT_EQ(ks_distance(empirical_cdf(lo), empirical_cdf(hi)), 1.0);
}

TEST(Ks, TiesHandled) {
    const std::vector<double> a{1, 1, 2, 2}, b{1, 2};
    EXPECT_EQ(ks_distance(empirical_cdf(a), empirical_cdf(b)), 0.0);
    const ECDF e(std::vector<double>{3, 1, 2});
    EXPECT_EQ(e(0.5), 0.0);
    EXPECT_NEAR(e(2.0), 2.0 / 3, 1e-15);
    EXPECT_EQ(e(10.0), 1.0);
}

TEST(MomentMatch, FirstMomentIsSmall) {
    const std::vector<double> w(10, 1.0);
    const auto fc = family_constants(Family::divisor);
    const auto g = t_grid(1e8, 200000, GridStrategy::midpoint, 0);
    const auto r = moment_match_report(w, fc.frequency, fc.phase, 1e8, 1, g);
    EXPECT_EQ(r.exact_model, 0.0);
    EXPECT_LT(std::abs(r.empirical), 0.01);
}

TEST(MomentMatch, SecondMomentBothWeightings) {
    const auto fc = family_constants(Family::divisor);
    const auto g = t_grid(1e8, 200000, GridStrategy::midpoint, 0);
    std::vector<double> ones(10, 1.0), alt(10);
    for (int m = 1; m <= 10; ++m) alt[m - 1] = m % 2 ? -1.0 : 1.0;
    for (const auto* w : {&ones, &alt}) {
        const auto r = moment_match_report(*w, fc.frequency, fc.phase, 1e8, 2, g);
        // Square roots of 1..10 have relations (sqrt 4 = 2 sqrt 1, ...), so the
        // exact value exceeds the diagonal count 5.
        EXPECT_GE(r.exact_model, 5.0);
        EXPECT_LE(std::abs(r.difference), 0.01);
        EXPECT_FALSE(r.M_admissible);
    }
}

TEST(MomentMatch, ExpansionAgreesWithQuadratureOnShortSums) {
    const std::vector<double> w{0.3, -1.1, 0.7};
    const DoubleDouble alpha{1.7};
    const double T = 3e6;
    const double exact = t_average_by_expansion(w, alpha, 0.4, T, 3);
    const auto s = series_from_weights(w, alpha, 0.4);
    const auto g = t_grid(T, 400000, GridStrategy::midpoint, 0);
    EXPECT_NEAR(empirical_moment(s, g, 3).value, exact, 2e-3);
}

TEST(ClippedLaplace, Basics) {
    const std::vector<double> v{-1.0, 0.2, 0.5, 3.0};
    auto c = clipped_laplace(v, 0.0, 10.0);
    EXPECT_EQ(c.value, 1.0);
    EXPECT_EQ(c.excluded_fraction, 0.0);
    c = clipped_laplace(v, 0.0, 1.0);
    EXPECT_EQ(c.value, 0.75);
    const double inf = std::numeric_limits<double>::infinity();
    double plain = 0;
    for (double x : v) plain += std::exp(0.7 * x);
    EXPECT_NEAR(clipped_laplace(v, 0.7, inf).value, plain / 4, 1e-15);
    EXPECT_THROW(clipped_laplace(v, 1.0, 0.1), Error);
}

TEST(ClippedLaplace, ClipThreshold) {
    const auto c = paper_clip_threshold(1e8);
    EXPECT_EQ(c.K, 2.0);
    EXPECT_NEAR(c.V, 10 * std::pow(2.0, 0.25) * std::pow(std::log(2.0), 1.25), 1e-12);
}

TEST(BerryEsseen, IdenticalTransformsGiveOneOverR) {
    BerryEsseenInput in;
    in.phi_a = [](double a) { return std::complex<double>(std::exp(-a * a / 2), 0); };
    in.phi_b = in.phi_a;
    in.R = 4.0;
    in.abs_mean_a = in.abs_mean_b = std::sqrt(2 / pi);
    EXPECT_NEAR(berry_esseen_bound(in), 0.25 + 2e-3 * 2 * std::sqrt(2 / pi), 1e-12);
}

TEST(BerryEsseen, BoundsMeasuredKs) {
    const auto s = build_series(SeriesSpec{Family::divisor, 40, {}});
    const auto g = t_grid(1e6, 20000, GridStrategy::jittered_stratified, 2);
    const auto a = eval_many(s, g.points);
    const auto b = sample_series(s, 9, 0, 20000);
    const auto r = discrepancy_report(a, b, 5.0, 800);
    EXPECT_GT(r.ks_value, 0.0);
    EXPECT_LE(r.ks_value, r.berry_esseen_rhs);
}

TEST(ExtremeScan, MatchesBruteForceGrid) {
    const auto s = extreme_scan(10, 1.0, ErrorFamily::divisor);
    double best = 0;
    for (int i = 0; i <= 10000; ++i) {
        const double x = 10 + i / 1000.0;
        best = std::max(best, delta(x).remainder);
        if (x > 10 && std::floor(x) == x) best = std::max(best, delta_left_limit(x).remainder);
    }
    EXPECT_NEAR(s.max, best, 1e-12);
    EXPECT_GE(s.argmax, 10.0);
    EXPECT_LE(s.argmax, 20.0);
}

TEST(ExtremeScan, DensityMonotoneAndCirclePositive) {
    const auto a = extreme_scan(1000, 1.0, ErrorFamily::circle);
    const auto b = extreme_scan(1000, 2.0, ErrorFamily::circle);
    EXPECT_GE(b.max, a.max);
    EXPECT_GT(a.max, 0.0);
    EXPECT_GT(a.reference, 0.0);
}

}  // namespace
