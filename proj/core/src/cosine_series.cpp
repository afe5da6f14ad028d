#include "etlab/cosine_series.hpp"

#include <quadmath.h>

#include <cmath>
#include <numbers>

#include "etlab/arith.hpp"
#include "etlab/error.hpp"

namespace etlab {

std::string_view to_string(Family family) noexcept {
    switch (family) {
        case Family::divisor: return "divisor";
        case Family::circle: return "circle";
        case Family::zeta2: return "zeta2";
    }
    return "divisor";
}

Family parse_family(std::string_view name) {
    if (name == "divisor") return Family::divisor;
    if (name == "circle") return Family::circle;
    if (name == "zeta2") return Family::zeta2;
    raise(ErrorKind::invalid_argument, "unknown family '" + std::string(name) + "' (divisor|circle|zeta2)");
}

FamilyConstants family_constants(Family family) {
    using std::numbers::pi;
    switch (family) {
        case Family::divisor: return {1.0 / (pi * std::numbers::sqrt2), DoubleDouble{2.0}, -pi / 4};
        case Family::circle: return {-1.0 / pi, DoubleDouble{1.0}, pi / 4};
        case Family::zeta2: {
            static const DoubleDouble alpha = [] {
                const __float128 a = sqrtq(2 / M_PIq);
                const double hi = static_cast<double>(a);
                return DoubleDouble{hi, static_cast<double>(a - static_cast<__float128>(hi))};
            }();
            return {std::pow(2.0 / pi, 0.25), alpha, -pi / 4};
        }
    }
    raise(ErrorKind::invalid_argument, "family_constants: unknown family");
}

namespace {

/// kappa(n q^2) with sign weight, walking the two factorizations in step
/// (no allocation). n_factors may have any exponents.
double merged_weight(Family family, const std::vector<PrimePower>& nf, const std::vector<PrimePower>& qf, bool odd) {
    std::uint64_t divisors = 1;
    std::uint64_t sums = 4;
    std::size_t i = 0, j = 0;
    while (i < nf.size() || j < qf.size()) {
        std::uint64_t p;
        unsigned e;
        if (j == qf.size() || (i < nf.size() && nf[i].prime < qf[j].prime)) {
            p = nf[i].prime;
            e = nf[i++].exponent;
        } else if (i == nf.size() || qf[j].prime < nf[i].prime) {
            p = qf[j].prime;
            e = 2 * qf[j++].exponent;
        } else {
            p = nf[i].prime;
            e = nf[i++].exponent + 2 * qf[j++].exponent;
        }
        divisors *= e + 1;
        if (p % 4 == 1) sums *= e + 1;
        else if (p % 4 == 3 && e % 2 == 1) sums = 0;
    }
    switch (family) {
        case Family::divisor: return static_cast<double>(divisors);
        case Family::circle: return static_cast<double>(sums);
        case Family::zeta2: return (odd ? -1.0 : 1.0) * static_cast<double>(divisors);
    }
    return 0.0;
}

class FactorCache {
  public:
    explicit FactorCache(std::uint64_t limit) : table_(limit + 1) {
        for (std::uint64_t r = 1; r <= limit; ++r) table_[r] = factorize(r);
    }
    const std::vector<PrimePower>& operator()(std::uint64_t r) const { return table_[r]; }

  private:
    std::vector<std::vector<PrimePower>> table_;
};

bool any_nonzero(const std::vector<double>& v) {
    for (double c : v)
        if (c != 0.0) return true;
    return false;
}

/// Shared builder: squarefree n in [n_begin, n_end), inner index up to
/// inner(n), coefficient amplitude * n^{-3/4} * weight(n r^2) * r^{-3/2}.
template <class InnerLimit>
std::vector<CosineKernel> build_kernels(Family family, double amplitude, std::uint64_t n_begin, std::uint64_t n_end,
                                        InnerLimit inner) {
    std::uint64_t max_inner = 0;
    for (std::uint64_t n = n_begin; n < n_end; ++n) max_inner = std::max(max_inner, inner(n));
    const FactorCache rf(max_inner);
    std::vector<CosineKernel> kernels;
    for (std::uint64_t n = std::max<std::uint64_t>(n_begin, 1); n < n_end; ++n) {
        const auto nf = factorize(n);
        bool squarefree = true;
        for (const auto& pp : nf) squarefree &= pp.exponent == 1;
        if (!squarefree) continue;
        const std::uint64_t limit = inner(n);
        CosineKernel k;
        k.kernel = n;
        k.coefficients.resize(limit);
        const double scale = amplitude * std::pow(static_cast<double>(n), -0.75);
        for (std::uint64_t r = 1; r <= limit; ++r) {
            const double w = merged_weight(family, nf, rf(r), (n * r) % 2 == 1);
            k.coefficients[r - 1] = scale * w * std::pow(static_cast<double>(r), -1.5);
        }
        if (any_nonzero(k.coefficients)) kernels.push_back(std::move(k));
    }
    return kernels;
}

}  // namespace

double arithmetic_weight(Family family, std::uint64_t m) {
    if (m == 0) raise(ErrorKind::invalid_argument, "arithmetic_weight: m must be >= 1");
    static const std::vector<PrimePower> none;
    return merged_weight(family, factorize(m), none, m % 2 == 1);
}

CosineSeries::CosineSeries(DoubleDouble frequency, double phase, std::vector<CosineKernel> kernels)
    : frequency_(frequency), phase_(phase), kernels_(std::move(kernels)) {
    for (const auto& k : kernels_) {
        if (k.kernel == 0) raise(ErrorKind::invalid_argument, "CosineSeries: kernel index must be >= 1");
        term_count_ += k.coefficients.size();
        max_harmonic_ = std::max(max_harmonic_, k.coefficients.size());
        for (double c : k.coefficients) {
            l1_ += std::abs(c);
            variance_ += 0.5 * c * c;
        }
    }
}

CosineSeries build_series(const SeriesSpec& spec) {
    const auto fc = family_constants(spec.family);
    const std::uint64_t N = spec.kernel_limit;
    std::vector<CosineKernel> kernels;
    switch (spec.family) {
        case Family::divisor:
            if (spec.inner_limit && *spec.inner_limit != N)
                raise(ErrorKind::invalid_argument, "divisor series: inner limit is fixed to r <= N");
            kernels = build_kernels(spec.family, fc.amplitude, 1, N + 1, [N](std::uint64_t) { return N; });
            break;
        case Family::circle: {
            const std::uint64_t Q = spec.inner_limit.value_or(N);
            if (N > 0 && Q == 0) raise(ErrorKind::invalid_argument, "circle series: inner limit must be >= 1");
            kernels = build_kernels(spec.family, fc.amplitude, 1, N + 1, [Q](std::uint64_t) { return Q; });
            break;
        }
        case Family::zeta2: {
            if (spec.inner_limit) raise(ErrorKind::invalid_argument, "zeta2 series: inner limit is fixed to n r^2 <= N^4");
            if (N > 65535) raise(ErrorKind::overflow, "zeta2 series: N^4 exceeds 64 bits");
            const std::uint64_t N4 = N * N * N * N;
            kernels = build_kernels(spec.family, fc.amplitude, 1, N + 1,
                                    [N4](std::uint64_t n) { return isqrt(N4 / n); });
            break;
        }
    }
    return CosineSeries(fc.frequency, fc.phase, std::move(kernels));
}

CosineSeries build_model(const ModelSpec& spec) {
    if (spec.kernel_limit > 0 && spec.inner_limit == 0)
        raise(ErrorKind::invalid_argument, "model: inner limit must be >= 1");
    const auto fc = family_constants(spec.family);
    const std::uint64_t L = spec.inner_limit;
    return CosineSeries(fc.frequency, fc.phase,
                        build_kernels(spec.family, fc.amplitude, 1, spec.kernel_limit + 1,
                                      [L](std::uint64_t) { return L; }));
}

CosineSeries amplitude_free_series(Family family, std::uint64_t n_begin, std::uint64_t n_end, std::uint64_t inner_limit) {
    const auto fc = family_constants(family);
    return CosineSeries(fc.frequency, fc.phase,
                        build_kernels(family, 1.0, n_begin, n_end, [inner_limit](std::uint64_t) { return inner_limit; }));
}

CosineSeries series_from_weights(std::span<const double> weights, DoubleDouble frequency, double phase) {
    const std::uint64_t M = weights.size();
    std::vector<CosineKernel> kernels;
    for (std::uint64_t n = 1; n <= M; ++n) {
        if (!is_squarefree(n)) continue;
        CosineKernel k;
        k.kernel = n;
        for (std::uint64_t r = 1; n * r * r <= M; ++r) k.coefficients.push_back(weights[n * r * r - 1]);
        if (any_nonzero(k.coefficients)) kernels.push_back(std::move(k));
    }
    return CosineSeries(frequency, phase, std::move(kernels));
}

double weighted_square_sum(Family family, std::uint64_t n_begin, std::uint64_t n_end, std::uint64_t q_begin,
                           std::uint64_t q_end, bool squarefree_only) {
    n_begin = std::max<std::uint64_t>(n_begin, 1);
    q_begin = std::max<std::uint64_t>(q_begin, 1);
    if (n_end <= n_begin || q_end <= q_begin) return 0.0;
    const FactorCache qf(q_end - 1);
    std::vector<double> q_cubed(q_end);
    for (std::uint64_t q = q_begin; q < q_end; ++q) q_cubed[q] = 1.0 / (static_cast<double>(q) * q * q);
    double total = 0.0;
    for (std::uint64_t n = n_begin; n < n_end; ++n) {
        const auto nf = factorize(n);
        if (squarefree_only) {
            bool sf = true;
            for (const auto& pp : nf) sf &= pp.exponent == 1;
            if (!sf) continue;
        }
        double s = 0.0;
        for (std::uint64_t q = q_begin; q < q_end; ++q) {
            const double w = merged_weight(family, nf, qf(q), false);
            s += w * w * q_cubed[q];
        }
        total += s * std::pow(static_cast<double>(n), -1.5);
    }
    return total;
}

double inner_tail_rms(Family family, std::uint64_t kernel_limit, std::uint64_t inner_limit) {
    const auto fc = family_constants(family);
    const std::uint64_t far = 64 * std::max<std::uint64_t>(inner_limit, 1);
    const double tail = weighted_square_sum(family, 1, kernel_limit + 1, inner_limit + 1, far + 1, true);
    return std::abs(fc.amplitude) * std::sqrt(0.5 * tail);
}

namespace detail {

namespace {

// cos and sin of 2 pi theta for theta in [0, 1), written so the block loop
// vectorizes. theta - q/4 is exact, leaving |z| <= pi/4 for the Taylor
// polynomials (truncation below 1e-19).
__attribute__((always_inline)) inline void cos_sin_2pi(double theta, double& c, double& s) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    constexpr double round_magic = 6755399441055744.0;  // 1.5 * 2^52: adding it rounds to an integer
    const double q = (4.0 * theta + round_magic) - round_magic;
    const double z = two_pi * (theta - 0.25 * q);
    const double z2 = z * z;
    double sp = 1.0 / 355687428096000.0;  // 1/17!
    sp = sp * -z2 + 1.0 / 1307674368000.0;
    sp = sp * -z2 + 1.0 / 6227020800.0;
    sp = sp * -z2 + 1.0 / 39916800.0;
    sp = sp * -z2 + 1.0 / 362880.0;
    sp = sp * -z2 + 1.0 / 5040.0;
    sp = sp * -z2 + 1.0 / 120.0;
    sp = sp * -z2 + 1.0 / 6.0;
    const double sz = z - z * z2 * sp;
    double cp = 1.0 / 6402373705728000.0;  // 1/18!
    cp = cp * -z2 + 1.0 / 20922789888000.0;
    cp = cp * -z2 + 1.0 / 87178291200.0;
    cp = cp * -z2 + 1.0 / 479001600.0;
    cp = cp * -z2 + 1.0 / 3628800.0;
    cp = cp * -z2 + 1.0 / 40320.0;
    cp = cp * -z2 + 1.0 / 720.0;
    cp = cp * -z2 + 1.0 / 24.0;
    cp = cp * -z2 + 0.5;
    const double cz = 1.0 - z2 * cp;
    // rotate by q quarter turns; q is 0..4 and 4 is a full turn
    const bool odd = q == 1.0 || q == 3.0;
    const bool flip = q == 2.0 || q == 3.0;
    const double c01 = odd ? -sz : cz;
    const double s01 = odd ? cz : sz;
    c = flip ? -c01 : c01;
    s = flip ? -s01 : s01;
}

}  // namespace

// Clenshaw on b_r = c_r + 2 cos(t) b_{r+1} - b_{r+2}:
//   sum c_r cos(r t) = cos(t) b_1 - b_2,  sum c_r sin(r t) = sin(t) b_1.
__attribute__((target_clones("avx2", "default")))
void accumulate_harmonics(std::span<const double> c, double cos_beta, double sin_beta, const double* theta, double* out,
                          std::size_t count) noexcept {
    const std::size_t R = c.size();
    if (R == 0 || count == 0) return;
    double th[block_size] = {}, x[block_size], y[block_size], b1[block_size] = {}, b2[block_size] = {};
    std::copy_n(theta, count, th);
    for (std::size_t b = 0; b < block_size; ++b) cos_sin_2pi(th[b], x[b], y[b]);
    for (std::size_t r = R; r >= 1; --r) {
        const double cr = c[r - 1];
        for (std::size_t b = 0; b < block_size; ++b) {
            const double t = cr + 2.0 * x[b] * b1[b] - b2[b];
            b2[b] = b1[b];
            b1[b] = t;
        }
    }
    for (std::size_t b = 0; b < count; ++b)
        out[b] += cos_beta * (x[b] * b1[b] - b2[b]) - sin_beta * (y[b] * b1[b]);
}

}  // namespace detail

}  // namespace etlab
