#include "etlab/arith.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "etlab/error.hpp"

namespace etlab {

namespace {

__float128 quad_gamma() {
    static const __float128 value = strtoflt128(constants::euler_gamma_text, nullptr);
    return value;
}

__float128 quad_pi() {
    static const __float128 value = strtoflt128(constants::pi_text, nullptr);
    return value;
}

DoubleDouble to_dd(__float128 v) {
    const double hi = static_cast<double>(v);
    const double lo = static_cast<double>(v - static_cast<__float128>(hi));
    return {hi, lo};
}

Int128 checked_add(Int128 a, Int128 b, const char* what) {
    Int128 out;
    if (__builtin_add_overflow(a, b, &out))
        raise(ErrorKind::overflow, std::string("128-bit accumulator overflow in ") + what);
    return out;
}

Int128 checked_mul(Int128 a, Int128 b, const char* what) {
    Int128 out;
    if (__builtin_mul_overflow(a, b, &out))
        raise(ErrorKind::overflow, std::string("128-bit accumulator overflow in ") + what);
    return out;
}

std::uint64_t floor_to_u64(double x, const char* what) {
    if (!(x >= 0.0) || x >= 18446744073709551616.0)
        raise(ErrorKind::invalid_argument, std::string(what) + ": argument outside [0, 2^64)");
    return static_cast<std::uint64_t>(std::floor(x));
}

}  // namespace

std::string to_string(Int128 value) {
    if (value == 0) return "0";
    const bool negative = value < 0;
    UInt128 mag = negative ? static_cast<UInt128>(-(value + 1)) + 1 : static_cast<UInt128>(value);
    std::string digits;
    while (mag != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
        mag /= 10;
    }
    if (negative) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

DivisorTable divisor_sieve(std::uint64_t limit) {
    if (limit == 0) raise(ErrorKind::invalid_argument, "divisor_sieve: limit must be >= 1");
    DivisorTable table;
    table.limit = limit;
    table.values.assign(limit + 1, 0);
    for (std::uint64_t d = 1; d <= limit; ++d)
        for (std::uint64_t m = d; m <= limit; m += d) ++table.values[m];
    return table;
}

TwoSquaresTable two_squares_sieve(std::uint64_t limit) {
    if (limit == 0) raise(ErrorKind::invalid_argument, "two_squares_sieve: limit must be >= 1");
    // r(n) = 4 (d_1(n) - d_3(n)), counting divisors by residue mod 4.
    std::vector<std::int64_t> acc(limit + 1, 0);
    for (std::uint64_t d = 1; d <= limit; d += 2) {
        const std::int64_t chi = (d % 4 == 1) ? 1 : -1;
        for (std::uint64_t m = d; m <= limit; m += d) acc[m] += chi;
    }
    TwoSquaresTable table;
    table.limit = limit;
    table.values.assign(limit + 1, 0);
    for (std::uint64_t n = 1; n <= limit; ++n) table.values[n] = static_cast<std::uint32_t>(4 * acc[n]);
    return table;
}

std::vector<PrimePower> factorize(std::uint64_t n) {
    if (n == 0) raise(ErrorKind::invalid_argument, "factorize: n must be >= 1");
    std::vector<PrimePower> out;
    auto strip = [&](std::uint64_t p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.push_back({p, e});
    };
    strip(2);
    strip(3);
    for (std::uint64_t p = 5; p * p <= n; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

bool is_squarefree(std::uint64_t n) {
    for (const auto& pp : factorize(n))
        if (pp.exponent > 1) return false;
    return true;
}

SquarefreeDecomposition squarefree_decompose(std::uint64_t n) {
    if (n == 0) raise(ErrorKind::invalid_argument, "squarefree_decompose: n must be >= 1");
    SquarefreeDecomposition out;
    for (const auto& [p, e] : factorize(n)) {
        if (e % 2) out.kernel *= p;
        for (unsigned i = 0; i < e / 2; ++i) out.cofactor *= p;
    }
    return out;
}

std::uint64_t divisor_count(const std::vector<PrimePower>& factors) {
    std::uint64_t d = 1;
    for (const auto& pp : factors) d *= pp.exponent + 1;
    return d;
}

std::uint64_t two_squares_count(const std::vector<PrimePower>& factors) {
    std::uint64_t r = 4;
    for (const auto& [p, e] : factors) {
        if (p == 2) continue;
        if (p % 4 == 1) {
            r *= e + 1;
        } else if (e % 2) {
            return 0;
        }
    }
    return r;
}

std::uint64_t divisor_count(std::uint64_t n) { return divisor_count(factorize(n)); }
std::uint64_t two_squares_count(std::uint64_t n) { return two_squares_count(factorize(n)); }

std::uint64_t isqrt(std::uint64_t n) noexcept {
    if (n < 2) return n;
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    // The double estimate is within a few units; correct in integers.
    while (r > 0 && (r > 0xFFFFFFFFull || r * r > n)) --r;
    while (r + 1 <= 0xFFFFFFFFull && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

UInt128 isqrt(UInt128 n) noexcept {
    if (n < 2) return n;
    if (n <= UInt128{~std::uint64_t{0}}) return isqrt(static_cast<std::uint64_t>(n));
    // Newton iteration from an upper bound.
    UInt128 x = static_cast<UInt128>(std::sqrt(static_cast<long double>(n))) + 2;
    while (true) {
        const UInt128 y = (x + n / x) / 2;
        if (y >= x) break;
        x = y;
    }
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
}

Int128 summatory_divisor(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t s = isqrt(n);
    Int128 acc = 0;
    for (std::uint64_t k = 1; k <= s; ++k) acc = checked_add(acc, static_cast<Int128>(n / k), "summatory_divisor");
    acc = checked_mul(acc, 2, "summatory_divisor");
    return acc - static_cast<Int128>(s) * static_cast<Int128>(s);
}

Int128 summatory_divisor(double x) { return summatory_divisor(floor_to_u64(x, "summatory_divisor")); }

Int128 lattice_count(std::uint64_t n) {
    const std::uint64_t s = isqrt(n);
    Int128 acc = 2 * static_cast<Int128>(s) + 1;  // a = 0 column
    for (std::uint64_t a = 1; a <= s; ++a) {
        const std::uint64_t b = isqrt(n - a * a);
        acc = checked_add(acc, 2 * (2 * static_cast<Int128>(b) + 1), "lattice_count");
    }
    return acc;
}

Int128 lattice_count(double x) { return lattice_count(floor_to_u64(x, "lattice_count")); }

namespace {

ErrorTermValue make_delta(double x, Int128 exact) {
    const __float128 xq = x;
    const __float128 main = xq * (logq(xq) + 2 * quad_gamma() - 1);
    ErrorTermValue v;
    v.x = x;
    v.family = ErrorFamily::divisor;
    v.exact_sum = exact;
    v.main_term = to_dd(main);
    v.remainder = static_cast<double>(static_cast<__float128>(exact) - main);
    return v;
}

ErrorTermValue make_p(double x, Int128 exact) {
    const __float128 main = quad_pi() * static_cast<__float128>(x);
    ErrorTermValue v;
    v.x = x;
    v.family = ErrorFamily::circle;
    v.exact_sum = exact;
    v.main_term = to_dd(main);
    v.remainder = static_cast<double>(static_cast<__float128>(exact) - main);
    return v;
}

}  // namespace

ErrorTermValue error_term_from_sum(ErrorFamily family, double x, Int128 exact_sum) {
    return family == ErrorFamily::divisor ? make_delta(x, exact_sum) : make_p(x, exact_sum);
}

ErrorTermValue delta(double x) {
    if (!(x > 1.0)) raise(ErrorKind::invalid_argument, "delta: x must be > 1");
    return make_delta(x, summatory_divisor(x));
}

ErrorTermValue p_error(double x) {
    if (!(x > 0.0)) raise(ErrorKind::invalid_argument, "p_error: x must be > 0");
    return make_p(x, lattice_count(x) - 1);
}

ErrorTermValue delta_left_limit(double x) {
    if (!(x > 1.0)) raise(ErrorKind::invalid_argument, "delta_left_limit: x must be > 1");
    const std::uint64_t k = floor_to_u64(x, "delta_left_limit");
    const std::uint64_t last = (static_cast<double>(k) == x) ? k - 1 : k;
    return make_delta(x, summatory_divisor(last));
}

ErrorTermValue p_error_left_limit(double x) {
    if (!(x > 0.0)) raise(ErrorKind::invalid_argument, "p_error_left_limit: x must be > 0");
    const std::uint64_t k = floor_to_u64(x, "p_error_left_limit");
    if (static_cast<double>(k) == x) return make_p(x, k == 0 ? 0 : lattice_count(k - 1) - 1);
    return make_p(x, lattice_count(k) - 1);
}

namespace constants {
DoubleDouble euler_gamma_dd() { return to_dd(quad_gamma()); }
DoubleDouble pi_dd() { return to_dd(quad_pi()); }
}  // namespace constants

}  // namespace etlab
