#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include <etlab/error.hpp>
#include <etlab/random_model.hpp>
#include <etlab/rng.hpp>

#include "oracle_values.hpp"

namespace {

using namespace etlab;
constexpr double pi = std::numbers::pi;

TEST(Philox, KnownAnswerVectors) {
    // Random123 kat_vectors, philox4x32 with 10 rounds.
    using A = std::array<std::uint32_t, 4>;
    EXPECT_EQ(Philox4x32::apply({0, 0, 0, 0}, {0, 0}), (A{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::apply({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (A{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::apply({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (A{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRng, UniformRangeAndSplit) {
    const CounterRng rng(42);
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const double u = rng.uniform(i, 3, Stream::model_phase);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
    EXPECT_NE(rng.split(1).seed(), rng.split(2).seed());
    EXPECT_EQ(rng.split(1).seed(), CounterRng(42).split(1).seed());
}

TEST(Sampling, EmptyModelIsZero) {
    const auto b = sample(ModelSpec{Family::divisor, 0, 1}, 50, 7);
    ASSERT_EQ(b.count(), 50u);
    for (double v : b.values) EXPECT_EQ(v, 0.0);
}

TEST(Sampling, DeterministicAndWorkerIndependent) {
    const ModelSpec m{Family::circle, 30, 8};
    const auto a = sample(m, 2000, 99, 1);
    const auto b = sample(m, 2000, 99, 3);
    EXPECT_EQ(a.values, b.values);
    const auto c = sample(m, 2000, 100, 1);
    EXPECT_NE(a.values, c.values);
    // Counter-based: a window of the stream equals the same slice of the full run.
    const auto part = sample_series(build_model(m), 99, 500, 100, 2);
    for (std::size_t i = 0; i < part.size(); ++i) EXPECT_EQ(part[i], a.values[500 + i]);
}

TEST(Sampling, PhasesFollowTheCounterStream) {
    // one kernel, one harmonic: value = c cos(2 pi theta + beta)
    const CosineSeries s({1.0, 0.0}, 0.0, {CosineKernel{7, {1.0}}});
    const CounterRng rng(42);
    const std::uint64_t first = 0xFFFFFFFFull - 37;  // straddles the low-word wrap
    const auto v = sample_series(s, 42, first, 150, 1);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double th = rng.uniform(first + i, 7, Stream::model_phase);
        EXPECT_NEAR(v[i], std::cos(2 * std::numbers::pi * th), 1e-14) << i;
    }
}

TEST(Sampling, MeanNearZero) {
    const auto b = sample(ModelSpec{Family::divisor, 10000, 30}, 1000000, 5);
    const auto m1 = sample_moment(b.values, 1);
    const auto m2 = sample_moment(b.values, 2);
    EXPECT_LE(std::abs(m1.value), 4 * std::sqrt(m2.value) / 1e3);
}

TEST(ExactMoment, SmallCases) {
    const ModelSpec single{Family::divisor, 1, 1};
    EXPECT_EQ(exact_moment(single, 1).value, 0.0);
    EXPECT_NEAR(exact_moment(single, 2).value, oracle::second_moment_single, 1e-17);
    EXPECT_NEAR(exact_moment(single, 3).value, 0.0, 1e-18);
    EXPECT_NEAR(exact_moment(single, 4).value, oracle::fourth_moment_single, 1e-18);
    EXPECT_EQ(exact_moment(single, 0).value, 1.0);
}

TEST(ExactMoment, AgreesWithMonteCarlo) {
    const ModelSpec m{Family::divisor, 3, 3};
    const auto b = sample(m, 400000, 11);
    for (unsigned k = 2; k <= 4; ++k) {
        const auto mc = sample_moment(b.values, k);
        EXPECT_LE(std::abs(mc.value - exact_moment(m, k).value), 4 * mc.std_error) << k;
    }
}

TEST(ExactMoment, BudgetGuard) {
    try {
        exact_moment(ModelSpec{Family::divisor, 2000, 2000}, 8);
        FAIL() << "expected a resource error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::resource);
    }
}

TEST(Variance, ClosedFormMatchesSeriesSecondMoment) {
    for (auto fam : {Family::divisor, Family::circle, Family::zeta2}) {
        const ModelSpec m{fam, 12, 6};
        const double direct = build_model(m).variance();
        EXPECT_NEAR(variance_closed_form(fam, 12, 6).value, direct, 1e-14 * direct);
        EXPECT_NEAR(exact_moment(m, 2).value, direct, 1e-12 * direct);
    }
    EXPECT_NEAR(variance_closed_form(Family::divisor, 1, 1).value, 1 / (4 * pi * pi), 1e-17);
}

TEST(Variance, Zeta2IsRescaledDivisor) {
    // Signs square away; only the amplitude differs.
    const double ratio = std::sqrt(2 / pi) / (1 / (2 * pi * pi));
    EXPECT_NEAR(variance_closed_form(Family::zeta2, 40, 40).value,
                ratio * variance_closed_form(Family::divisor, 40, 40).value, 1e-12);
}

TEST(Variance, FullLimit) {
    EXPECT_NEAR(full_variance(Family::divisor), oracle::full_variance_divisor, 1e-13);
}

TEST(MomentBound, SmallCases) {
    EXPECT_DOUBLE_EQ(moment_upper_bound(Family::divisor, 1, 2, 1, 1), 1.0);
    EXPECT_DOUBLE_EQ(moment_upper_bound(Family::divisor, 1, 2, 1, 2), 2.0);
    const auto s = amplitude_free_series(Family::divisor, 1, 2, 1);
    EXPECT_NEAR(exact_moment(s, 2).value, 0.5, 1e-15);
    EXPECT_NEAR(exact_moment(s, 4).value, 0.375, 1e-15);
}

TEST(MomentBound, PositiveAndMonotone) {
    for (auto fam : {Family::divisor, Family::circle}) {
        double prev = 0;
        for (unsigned k = 1; k <= 6; ++k) {
            const double b = moment_upper_bound(fam, 2, 9, 5, k);
            EXPECT_GT(b, 0.0);
            EXPECT_GE(b, prev);
            prev = b;
        }
    }
}

TEST(TailMc, DeterministicEnds) {
    const ModelSpec m{Family::divisor, 5, 5};
    const double l1 = build_model(m).l1_norm();
    EXPECT_EQ(tail_mc(m, -l1 - 1e-9, 2000, 3).probability, 1.0);
    EXPECT_EQ(tail_mc(m, l1 + 1e-9, 2000, 3).probability, 0.0);
    EXPECT_THROW(tail_mc(m, 0.0, 10, 3), Error);
}

TEST(TailMc, DisjointSeedsAgree) {
    const ModelSpec m{Family::divisor, 10000, 1};
    const auto a = tail_mc(m, 1.0, 1000000, 1);
    const auto b = tail_mc(m, 1.0, 1000000, 2);
    EXPECT_LE(std::abs(a.probability - b.probability), 4 * std::hypot(a.std_error, b.std_error));
}

TEST(Transform, LaplaceAtZeroAndSymmetry) {
    TransformEngine e(build_model(ModelSpec{Family::divisor, 6, 4}));
    EXPECT_EQ(e.laplace(0.0), 1.0);
    EXPECT_EQ(e.char_fn(0.0), std::complex<double>(1.0, 0.0));
    for (double a : {0.5, 3.0, 11.0}) {
        const auto p = e.char_fn(a), q = e.char_fn(-a);
        EXPECT_NEAR(p.real(), q.real(), 1e-14);
        EXPECT_NEAR(p.imag(), -q.imag(), 1e-14);
        EXPECT_LE(std::abs(p), 1.0 + 1e-14);
    }
}

TEST(Transform, SingleTermBessel) {
    const ModelSpec single{Family::divisor, 1, 1};
    EXPECT_NEAR(char_fn(single, pi * std::sqrt(2.0)).real(), oracle::bessel_j0_1, 1e-12);
    // Laplace of c cos(2 pi U + beta) is I0(c lambda) = sum (c lambda / 2)^{2j} / j!^2.
    const double c = 1 / (pi * std::sqrt(2.0)), lambda = 3.0;
    double i0 = 0, term = 1;
    for (int j = 0; j < 40; ++j) {
        i0 += term;
        term *= (c * lambda / 2) * (c * lambda / 2) / ((j + 1.0) * (j + 1.0));
    }
    EXPECT_NEAR(laplace(single, lambda), i0, 1e-13);
}

TEST(Transform, MatchesMonteCarlo) {
    const ModelSpec m{Family::divisor, 20, 10};
    const auto b = sample(m, 200000, 8);
    TransformEngine e(build_model(m));
    for (double lambda : {0.5, 1.0}) {
        double acc = 0, acc2 = 0;
        for (double v : b.values) {
            const double x = std::exp(lambda * v);
            acc += x;
            acc2 += x * x;
        }
        const double n = static_cast<double>(b.count());
        const double mean = acc / n, se = std::sqrt((acc2 / n - mean * mean) / n);
        EXPECT_LE(std::abs(mean - e.laplace(lambda)), 4 * se) << lambda;
    }
}

TEST(Transform, LambdaCap) {
    TransformOptions opt;
    opt.lambda_cap = 8;
    TransformEngine e(build_model(ModelSpec{Family::divisor, 3, 3}), opt);
    EXPECT_THROW(e.laplace(9.0), Error);
}

TEST(Transform, ReportCarriesTailVariance) {
    const auto r = laplace_report(ModelSpec{Family::divisor, 50, 50}, 1.0);
    EXPECT_NEAR(r.value, std::exp(r.log_value), 1e-12 * r.value);
    EXPECT_GT(r.tail_variance, 0.0);
    EXPECT_LT(r.tail_variance, full_variance(Family::divisor));
}

}  // namespace
