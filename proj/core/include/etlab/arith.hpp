#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "etlab/double_double.hpp"

namespace etlab {

using Int128 = __int128;
using UInt128 = unsigned __int128;

std::string to_string(Int128 value);

/// d(n) for 1 <= n <= limit; values[0] is unused and zero.
struct DivisorTable {
    std::uint64_t limit = 0;
    std::vector<std::uint32_t> values;

    std::uint32_t operator[](std::uint64_t n) const { return values[n]; }
};

/// r(n) = #{(a,b) in Z^2 : a^2 + b^2 = n} for 1 <= n <= limit.
struct TwoSquaresTable {
    std::uint64_t limit = 0;
    std::vector<std::uint32_t> values;

    std::uint32_t operator[](std::uint64_t n) const { return values[n]; }
};

DivisorTable divisor_sieve(std::uint64_t limit);
TwoSquaresTable two_squares_sieve(std::uint64_t limit);

/// n = kernel * cofactor^2 with kernel squarefree.
struct SquarefreeDecomposition {
    std::uint64_t kernel = 1;
    std::uint64_t cofactor = 1;

    friend bool operator==(const SquarefreeDecomposition&, const SquarefreeDecomposition&) = default;
};

SquarefreeDecomposition squarefree_decompose(std::uint64_t n);

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;
};

/// Trial division; intended for the moderate arguments used by coefficient
/// tables (n up to ~10^12).
std::vector<PrimePower> factorize(std::uint64_t n);

bool is_squarefree(std::uint64_t n);

// Pointwise arithmetic functions evaluated from a factorization, for
// arguments far beyond any sieve limit (e.g. d(n r^2) with r ~ 10^3).
std::uint64_t divisor_count(std::uint64_t n);
std::uint64_t two_squares_count(std::uint64_t n);
std::uint64_t divisor_count(const std::vector<PrimePower>& factors);
std::uint64_t two_squares_count(const std::vector<PrimePower>& factors);

std::uint64_t isqrt(std::uint64_t n) noexcept;
UInt128 isqrt(UInt128 n) noexcept;

/// D(n) = sum_{k <= n} d(k) by the hyperbola method, O(sqrt n).
/// Accumulates in 128 bits with checked arithmetic.
Int128 summatory_divisor(std::uint64_t n);
/// Sum runs over k <= floor(x).
Int128 summatory_divisor(double x);

/// N(n) = #{(a,b) : a^2 + b^2 <= n}, O(sqrt n).
Int128 lattice_count(std::uint64_t n);
Int128 lattice_count(double x);

enum class ErrorFamily { divisor, circle };

/// Exact remainder of the divisor or circle problem at a real point.
struct ErrorTermValue {
    double x = 0.0;
    ErrorFamily family = ErrorFamily::divisor;
    Int128 exact_sum = 0;        // sum over n <= floor(x) of d(n) or r(n)
    DoubleDouble main_term;      // x(log x + 2 gamma - 1) or pi x
    double remainder = 0.0;      // exact_sum - main_term
};

/// Delta(x) = D(x) - x(log x + 2 gamma - 1), x > 1.
ErrorTermValue delta(double x);
/// P(x) = sum_{n <= x} r(n) - pi x, x > 0.
ErrorTermValue p_error(double x);

/// Remainder for an exact sum the caller already holds (incremental scans).
ErrorTermValue error_term_from_sum(ErrorFamily family, double x, Int128 exact_sum);

/// The same remainders with the sum taken over n < x (left limit at an
/// integer jump); used by extreme-value scans.
ErrorTermValue delta_left_limit(double x);
ErrorTermValue p_error_left_limit(double x);

namespace constants {
// Euler-Mascheroni and pi to 40 significant digits. Tests recompute both
// with MPFR.
inline constexpr const char* euler_gamma_text = "0.5772156649015328606065120900824024310422";
inline constexpr const char* pi_text = "3.141592653589793238462643383279502884197";
inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr double pi = 3.14159265358979323846;
/// Double-double representations (hi + lo) of the constants above.
DoubleDouble euler_gamma_dd();
DoubleDouble pi_dd();
}  // namespace constants

}  // namespace etlab
