#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <etlab/arith.hpp>
#include <etlab/cosine_series.hpp>
#include <etlab/error.hpp>
#include <etlab/series.hpp>
#include <etlab/special.hpp>

#include "oracle_values.hpp"

namespace {

using namespace etlab;
constexpr double pi = std::numbers::pi;

// Straightforward long-double evaluation of the regrouped divisor sum over
// {(m, r): m squarefree, accept(m, r)}.
template <class Accept>
long double brute_divisor_sum(double t, std::uint64_t m_max, std::uint64_t r_max, Accept accept) {
    long double s = 0;
    for (std::uint64_t m = 1; m <= m_max; ++m) {
        if (!is_squarefree(m)) continue;
        for (std::uint64_t r = 1; r <= r_max; ++r) {
            if (!accept(m, r)) continue;
            const long double n = static_cast<long double>(m * r * r);
            s += divisor_count(m * r * r) * std::pow(n, -0.75L) *
                 std::cos(4 * std::numbers::pi_v<long double> * std::sqrt(n * t) - std::numbers::pi_v<long double> / 4);
        }
    }
    return s / (std::numbers::pi_v<long double> * std::numbers::sqrt2_v<long double>);
}

TEST(Special, ZetaAndBeta) {
    EXPECT_NEAR(special::zeta(1.5), oracle::zeta_1_5, 1e-13);
    EXPECT_NEAR(special::zeta(3.0), oracle::zeta_3, 1e-14);
    EXPECT_NEAR(special::dirichlet_beta(1.5), oracle::beta_1_5, 1e-13);
}

TEST(DoubleDouble, SqrtCarriesExtraBits) {
    const DoubleDouble two{2.0};
    const DoubleDouble r = dd::sqrt(two);
    const DoubleDouble sq = dd::mul(r, r);
    EXPECT_LT(std::abs((sq.hi - 2.0) + sq.lo), 1e-30);
}

TEST(Phase, ExactCases) {
    EXPECT_EQ(phase(1, 1, 1.0, DoubleDouble{2.0}).value_mod_1, 0.0);
    EXPECT_EQ(phase(4, 1, 9.0, DoubleDouble{2.0}).value_mod_1, 0.0);
}

TEST(Phase, AgreesWithHighPrecisionOracle) {
    const auto p = phase(2, 3, 1e8, DoubleDouble{2.0});
    EXPECT_NEAR(p.value_mod_1, oracle::phase_2_3_1e8, 1e-8);
    EXPECT_LT(p.absolute_error_bound, 1e-12);
}

TEST(Phase, RefusesWhenPrecisionRunsOut) {
    try {
        phase(1ull << 40, 1ull << 20, 1e30, DoubleDouble{2.0});
        FAIL() << "expected a precision error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::precision);
    }
}

TEST(Series, EmptyTruncationIsZero) {
    EXPECT_EQ(eval_truncated(SeriesSpec{Family::divisor, 0, {}}, 123.0), 0.0);
}

TEST(Series, SingleTermClosedForm) {
    EXPECT_NEAR(eval_truncated(SeriesSpec{Family::divisor, 1, {}}, 1.0 / 256), oracle::single_term_1_256, 1e-14);
    EXPECT_NEAR(voronoi_main_sum(1, 1.0 / 256), oracle::single_term_1_256, 1e-14);
}

TEST(Series, RegroupingMatchesVoronoiSum) {
    for (double t : {0.37, 17.0, 1e5}) {
        const long double brute = brute_divisor_sum(t, 4, 2, [](auto m, auto r) { return m * r * r <= 4; });
        EXPECT_NEAR(voronoi_main_sum(4, t), static_cast<double>(brute), 1e-12) << t;
    }
}

TEST(Series, KernelTruncationMatchesBruteForce) {
    const auto s = build_series(SeriesSpec{Family::divisor, 20, {}});
    for (double t : {1.5, 1e5, 3.3e7}) {
        const long double brute = brute_divisor_sum(t, 20, 20, [](auto, auto) { return true; });
        const auto v = eval_certified(s, t);
        EXPECT_NEAR(v.value, static_cast<double>(brute), 1e-11) << t;
        EXPECT_LE(std::abs(v.value - static_cast<double>(brute)), v.error_bound + 1e-13) << t;
    }
}

TEST(Series, VoronoiTriangleBound) {
    const double v = voronoi_main_sum(1000, 1e6);
    const auto d = divisor_sieve(1000);
    double bound = 0;
    for (std::uint64_t n = 1; n <= 1000; ++n) bound += d.values[n] * std::pow(static_cast<double>(n), -0.75);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_LE(std::abs(v), bound / (pi * std::sqrt(2.0)));
}

TEST(Series, EvalManyIndependentOfWorkers) {
    const auto s = build_series(SeriesSpec{Family::circle, 40, {}});
    std::vector<double> ts;
    for (int i = 0; i < 300; ++i) ts.push_back(1e6 + 37.5 * i);
    const auto one = eval_many(s, ts, 1);
    const auto four = eval_many(s, ts, 4);
    EXPECT_EQ(one, four);
    for (std::size_t i = 0; i < ts.size(); i += 37) EXPECT_EQ(one[i], eval_truncated(s, ts[i]));
}

TEST(Series, CircleSingleTerm) {
    // P series, n = 1: r(1) = 4, so -(1/pi) * 4 * cos(2 pi sqrt t + pi/4).
    const double t = 2.7;
    const double expect = -(1 / pi) * 4 * std::cos(2 * pi * std::sqrt(t) + pi / 4);
    EXPECT_NEAR(eval_truncated(SeriesSpec{Family::circle, 1, 1}, t), expect, 1e-14);
}

TEST(Series, Zeta2SignPattern) {
    // Kernel 1, r = 1, 2: (-1)^{r^2} d(r^2) r^{-3/2} cos(2 pi r alpha sqrt t - pi/4).
    const auto fc = family_constants(Family::zeta2);
    const double alpha = fc.frequency.hi, t = 0.9;
    auto term = [&](int r, double sign, double d) {
        return sign * d * std::pow(r, -1.5) * std::cos(2 * pi * r * alpha * std::sqrt(t) - pi / 4);
    };
    const auto s = build_series(SeriesSpec{Family::zeta2, 1, {}});
    ASSERT_EQ(s.kernels().size(), 1u);
    const double expect = fc.amplitude * (term(1, -1, 1));
    EXPECT_NEAR(eval_truncated(s, t), expect, 1e-14);
    EXPECT_NEAR(alpha, std::sqrt(2 / pi), 1e-16);
}

TEST(Series, RejectsBadInput) {
    EXPECT_THROW(eval_truncated(build_series(SeriesSpec{Family::divisor, 3, {}}), -1.0), Error);
    EXPECT_THROW(build_series(SeriesSpec{Family::divisor, 3, 5}), Error);
}

TEST(OscillatoryIntegral, QuadratureOracle) {
    const auto v = oscillatory_integral(1.0, 1.0);
    EXPECT_NEAR(v.real(), oracle::osc_1_1_re, 1e-10);
    EXPECT_NEAR(v.imag(), oracle::osc_1_1_im, 1e-10);
}

TEST(OscillatoryIntegral, ConjugateSymmetry) {
    for (double eta : {0.3, 2.0, 17.5}) {
        const auto a = oscillatory_integral(eta, 40.0), b = oscillatory_integral(-eta, 40.0);
        EXPECT_NEAR(a.real(), b.real(), 1e-12);
        EXPECT_NEAR(a.imag(), -b.imag(), 1e-12);
    }
}

TEST(OscillatoryIntegral, DecaysLikeOneOverEta) {
    for (double T : {1.0, 100.0, 1e4})
        for (double eta : {10.0, 100.0, 1000.0}) EXPECT_LE(std::abs(oscillatory_integral(eta, T)) * eta / std::sqrt(T), 4.0);
}

}  // namespace
