#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace etlab {

struct SignedTerm {
    int sign = 1;  // +1 or -1
    std::uint64_t n = 1;

    friend bool operator==(const SignedTerm&, const SignedTerm&) = default;
};

/// sum_j sign_j sqrt(n_j) with every n_j <= bound.
struct SignedRadicalSum {
    std::vector<SignedTerm> terms;
    std::uint64_t bound = 0;

    /// Checks nonempty, signs in {-1, +1}, 1 <= n_j <= bound.
    void validate() const;
};

struct RelationResult {
    bool is_zero = false;
    /// squarefree kernel -> sum of sign * cofactor
    std::map<std::uint64_t, std::int64_t> kernel_sums;
};

/// Exact: the sum vanishes iff every kernel sum does (square roots of
/// distinct squarefree integers are linearly independent over Q).
RelationResult detect_relation(std::span<const SignedTerm> terms);
RelationResult detect_relation(const SignedRadicalSum& sum);

struct HrBound {
    unsigned m = 0;
    std::uint64_t M = 0;
    /// (m sqrt M)^{-(2^{m-1} - 1)}; 0 when it underflows long double.
    long double value = 0.0L;
    double log_value = 0.0;
    bool underflow = false;
};

HrBound hr_lower_bound(unsigned m, std::uint64_t M);

/// Outward-rounded decimal enclosure of |sum|.
struct CertifiedValue {
    std::string lower;
    std::string upper;
    unsigned precision_bits = 0;
    double approx = 0.0;
};

inline constexpr unsigned certify_start_bits = 64;
inline constexpr unsigned certify_max_bits = 4096;

/// Encloses |sum| away from zero, doubling the precision from 64 bits; when
/// digits > 0 keeps doubling until the enclosure has that many correct
/// significant digits. Throws ErrorKind::precision at the 4096-bit ceiling,
/// and invalid_argument for exact zeros.
CertifiedValue certify_abs(std::span<const SignedTerm> terms, unsigned digits = 0);

struct VerifyOptions {
    /// Cap on (2M)^m.
    double enumeration_cap = 12960000.0;  // 60^4
    unsigned certified_digits = 20;
    unsigned workers = 0;
};

struct VerifyResult {
    std::uint64_t M = 0;
    unsigned m = 0;
    std::vector<SignedTerm> argmin;
    CertifiedValue min_nonzero;
    HrBound bound;
    /// Upper endpoint of the enclosure used for the comparison.
    std::string bound_upper;
    bool holds = false;
    std::uint64_t sums_enumerated = 0;
    std::uint64_t exact_zeros = 0;
    /// Sums that needed more than 64 bits to clear the bound.
    std::uint64_t refined = 0;
};

/// Every multiset of m signed terms +-sqrt(n), n <= M (order does not change
/// the sum). Each nonzero sum is certified >= the bound by interval
/// arithmetic; the minimum is certified to `certified_digits`.
VerifyResult exhaustive_verify(std::uint64_t M, unsigned m, const VerifyOptions& options = {});

struct SearchResult {
    std::vector<SignedTerm> tuple;
    CertifiedValue value;
    std::uint64_t evaluated = 0;
    bool exhaustive = false;
};

/// Smallest nonzero |sum| among `budget` random m-term sums (a prefix of a
/// fixed counter-based sequence, so larger budgets never do worse); runs the
/// exhaustive enumeration instead when the budget covers it.
SearchResult near_relation_search(std::uint64_t M, unsigned m, std::uint64_t budget, std::uint64_t seed);

}  // namespace etlab
