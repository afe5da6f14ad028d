#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <etlab/arith.hpp>
#include <etlab/error.hpp>
#include <etlab/sieve_cache.hpp>

#include "oracle_values.hpp"

namespace {

using namespace etlab;

TEST(DivisorSieve, SmallValues) {
    const auto t = divisor_sieve(12);
    EXPECT_EQ(t.values[1], 1u);
    EXPECT_EQ(t.values[6], 4u);
    EXPECT_EQ(t.values[12], 6u);
    EXPECT_THROW(divisor_sieve(0), Error);
}

TEST(DivisorSieve, MatchesFactorization) {
    const auto t = divisor_sieve(5000);
    for (std::uint64_t n = 1; n <= 5000; ++n) ASSERT_EQ(t.values[n], divisor_count(n)) << n;
}

TEST(TwoSquares, SmallValues) {
    const auto t = two_squares_sieve(25);
    EXPECT_EQ(t.values[1], 4u);
    EXPECT_EQ(t.values[3], 0u);
    EXPECT_EQ(t.values[5], 8u);
    EXPECT_EQ(t.values[25], 12u);
}

TEST(TwoSquares, MatchesBruteForceLatticeCount) {
    const std::uint64_t limit = 3000;
    std::vector<std::uint32_t> brute(limit + 1, 0);
    for (std::int64_t a = -60; a <= 60; ++a)
        for (std::int64_t b = -60; b <= 60; ++b) {
            const auto n = static_cast<std::uint64_t>(a * a + b * b);
            if (n >= 1 && n <= limit) ++brute[n];
        }
    const auto t = two_squares_sieve(limit);
    for (std::uint64_t n = 1; n <= limit; ++n) {
        ASSERT_EQ(t.values[n], brute[n]) << n;
        ASSERT_EQ(two_squares_count(n), brute[n]) << n;
    }
}

TEST(Squarefree, Decompose) {
    auto d = squarefree_decompose(1);
    EXPECT_EQ(d.kernel, 1u);
    EXPECT_EQ(d.cofactor, 1u);
    d = squarefree_decompose(12);
    EXPECT_EQ(d.kernel, 3u);
    EXPECT_EQ(d.cofactor, 2u);
    d = squarefree_decompose(50);
    EXPECT_EQ(d.kernel, 2u);
    EXPECT_EQ(d.cofactor, 5u);
    for (std::uint64_t n = 1; n < 2000; ++n) {
        const auto s = squarefree_decompose(n);
        ASSERT_EQ(s.kernel * s.cofactor * s.cofactor, n);
        ASSERT_TRUE(is_squarefree(s.kernel));
    }
}

TEST(Isqrt, ExactAroundSquares) {
    for (std::uint64_t r : {1ull, 2ull, 3037000499ull, 4294967295ull}) {
        EXPECT_EQ(isqrt(r * r), r);
        EXPECT_EQ(isqrt(r * r - 1), r - 1);
    }
    const UInt128 big = UInt128{1} << 100;
    EXPECT_TRUE(isqrt(big) == (UInt128{1} << 50));
    EXPECT_TRUE(isqrt(big - 1) == (UInt128{1} << 50) - 1);
}

TEST(SummatoryDivisor, KnownValues) {
    EXPECT_TRUE(summatory_divisor(std::uint64_t{1}) == 1);
    EXPECT_TRUE(summatory_divisor(std::uint64_t{10}) == 27);
    EXPECT_TRUE(summatory_divisor(std::uint64_t{100}) == 482);
    EXPECT_TRUE(summatory_divisor(10.9) == 27);
}

TEST(SummatoryDivisor, MatchesTablePrefixSums) {
    const auto t = divisor_sieve(20000);
    Int128 acc = 0;
    for (std::uint64_t n = 1; n <= 20000; ++n) {
        acc += t.values[n];
        ASSERT_TRUE(summatory_divisor(n) == acc) << n;
    }
}

TEST(SummatoryDivisor, LargeArgumentIsExact) {
    // D(10^12) from the literature (OEIS A057494).
    EXPECT_EQ(to_string(summatory_divisor(std::uint64_t{1000000000000})), "27785452449086");
}

TEST(LatticeCount, KnownValues) {
    EXPECT_TRUE(lattice_count(std::uint64_t{0}) == 1);
    EXPECT_TRUE(lattice_count(std::uint64_t{1}) == 5);
    EXPECT_TRUE(lattice_count(std::uint64_t{2}) == 9);
    // Gauss circle counts N(10^k): 317, 31417, 3141549.
    EXPECT_TRUE(lattice_count(std::uint64_t{100}) == 317);
    EXPECT_TRUE(lattice_count(std::uint64_t{10000}) == 31417);
    EXPECT_TRUE(lattice_count(std::uint64_t{1000000}) == 3141549);
}

TEST(ErrorTerms, DivisorValues) {
    const auto v = delta(10.0);
    EXPECT_TRUE(v.exact_sum == 27);
    EXPECT_NEAR(v.remainder, oracle::delta_10, 1e-13);
    EXPECT_NEAR(delta(2.0).remainder, oracle::delta_2, 1e-14);
    EXPECT_THROW(delta(1.0), Error);
}

TEST(ErrorTerms, CircleValues) {
    EXPECT_NEAR(p_error(1.0).remainder, oracle::p_error_1, 1e-14);
    EXPECT_NEAR(p_error(2.0).remainder, oracle::p_error_2, 1e-14);
    EXPECT_NEAR(p_error(0.5).remainder, oracle::p_error_half, 1e-14);
}

TEST(ErrorTerms, ConstantSumBetweenIntegers) {
    // D is constant on [k, k+1): the remainder changes by minus the main-term increment.
    const double a = 37.0001, b = 37.9999;
    const auto va = delta(a), vb = delta(b);
    EXPECT_TRUE(va.exact_sum == vb.exact_sum);
    const double main_step = (vb.main_term.hi - va.main_term.hi) + (vb.main_term.lo - va.main_term.lo);
    EXPECT_NEAR(vb.remainder - va.remainder, -main_step, 1e-12);
}

TEST(ErrorTerms, LeftLimits) {
    EXPECT_TRUE(delta_left_limit(10.0).exact_sum == 23);  // D(9) = 23
    EXPECT_TRUE(p_error_left_limit(2.0).exact_sum == 4);  // norms 1 only
    EXPECT_TRUE(p_error_left_limit(2.5).exact_sum == p_error(2.5).exact_sum);
}

TEST(Constants, MatchOracles) {
    EXPECT_DOUBLE_EQ(constants::euler_gamma_dd().hi, oracle::euler_gamma);
    EXPECT_DOUBLE_EQ(constants::pi_dd().hi, std::numbers::pi);
}

TEST(SieveCacheFile, RoundTripsAndIsDeterministic) {
    const auto f = to_table_file(divisor_sieve(1000));
    std::stringstream s1, s2;
    write_table(s1, f);
    write_table(s2, to_table_file(divisor_sieve(1000)));
    EXPECT_EQ(s1.str(), s2.str());
    const auto back = read_table(s1);
    EXPECT_EQ(back.limit, 1000u);
    EXPECT_EQ(back.values, f.values);
}

TEST(SieveCacheFile, RejectsTruncationAndBadMagic) {
    std::stringstream s;
    write_table(s, to_table_file(two_squares_sieve(100)));
    const std::string bytes = s.str();
    std::stringstream cut(bytes.substr(0, bytes.size() - 3));
    EXPECT_THROW(read_table(cut), Error);
    std::stringstream bad("XXXX" + bytes.substr(4));
    EXPECT_THROW(read_table(bad), Error);
}

TEST(SieveCacheDir, BuildStatusClear) {
    const auto root = std::filesystem::temp_directory_path() / "etlab-unit-cache";
    std::filesystem::remove_all(root);
    SieveCache cache(root);
    EXPECT_TRUE(cache.status().empty());
    cache.build(1000);
    const auto entries = cache.status();
    ASSERT_EQ(entries.size(), 2u);
    for (const auto& e : entries) EXPECT_EQ(e.limit, 1000u);
    EXPECT_EQ(cache.divisor(1000).values, divisor_sieve(1000).values);
    EXPECT_EQ(cache.two_squares(500).values, two_squares_sieve(500).values);
    EXPECT_GE(cache.clear(), 2u);
    EXPECT_TRUE(cache.status().empty());
    std::filesystem::remove_all(root);
}

}  // namespace
