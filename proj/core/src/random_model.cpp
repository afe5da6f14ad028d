#include "etlab/random_model.hpp"

#include <immintrin.h>

#include <climits>
#include <cmath>
#include <complex>
#include <numbers>

#include "etlab/error.hpp"
#include "etlab/parallel.hpp"
#include "etlab/special.hpp"

namespace etlab {

namespace {

constexpr std::uint32_t philox_m0 = 0xD2511F53u, philox_m1 = 0xCD9E8D57u;
constexpr std::uint32_t philox_w0 = 0x9E3779B9u, philox_w1 = 0xBB67AE85u;

// (c0 * 2^21 + (c1 >> 11)) * 2^-53, i.e. CounterRng::uniform.
inline double to_unit(std::uint32_t c0, std::uint32_t c1) noexcept {
    return static_cast<double>(c0) * 0x1.0p-32 + static_cast<double>(c1 >> 11) * 0x1.0p-53;
}

void uniform_block_scalar(std::uint64_t seed, std::uint64_t first, std::uint32_t lane, Stream stream, double* out,
                          std::size_t n) noexcept {
    for (std::size_t b = 0; b < n; ++b) {
        const std::uint64_t idx = first + b;
        std::uint32_t c0 = static_cast<std::uint32_t>(idx), c1 = static_cast<std::uint32_t>(idx >> 32);
        std::uint32_t c2 = lane, c3 = static_cast<std::uint32_t>(stream);
        std::uint32_t k0 = static_cast<std::uint32_t>(seed), k1 = static_cast<std::uint32_t>(seed >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{philox_m0} * c0;
            const std::uint64_t p1 = std::uint64_t{philox_m1} * c2;
            c0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
            c2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
            c1 = static_cast<std::uint32_t>(p1);
            c3 = static_cast<std::uint32_t>(p0);
            k0 += philox_w0;
            k1 += philox_w1;
        }
        out[b] = to_unit(c0, c1);
    }
}

// Eight counters per register. mul_epu32 only sees the even 32-bit lanes,
// so odd lanes go through a second multiply after a 64-bit shift.
__attribute__((target("avx2"))) void uniform_block_avx2(std::uint64_t seed, std::uint64_t first,
                                                        std::uint32_t lane, Stream stream, double* out,
                                                        std::size_t n) noexcept {
    const __m256i m0 = _mm256_set1_epi64x(philox_m0), m1 = _mm256_set1_epi64x(philox_m1);
    const __m256i ramp = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    alignas(32) std::uint32_t w0[8], w1[8];
    std::size_t b = 0;
    for (; b + 8 <= n; b += 8) {
        const std::uint64_t base = first + b;
        const auto lo = static_cast<std::uint32_t>(base);
        // idx = base + j; carry into the high word when the low word wraps
        __m256i c0 = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(lo)), ramp);
        const __m256i wrapped = _mm256_cmpgt_epi32(_mm256_set1_epi32(static_cast<int>(lo ^ 0x80000000u)),
                                                   _mm256_xor_si256(c0, _mm256_set1_epi32(INT32_MIN)));
        __m256i c1 = _mm256_sub_epi32(_mm256_set1_epi32(static_cast<int>(base >> 32)), wrapped);
        __m256i c2 = _mm256_set1_epi32(static_cast<int>(lane));
        __m256i c3 = _mm256_set1_epi32(static_cast<int>(stream));
        std::uint32_t k0 = static_cast<std::uint32_t>(seed), k1 = static_cast<std::uint32_t>(seed >> 32);
        for (int round = 0; round < 10; ++round) {
            const __m256i e0 = _mm256_mul_epu32(c0, m0), o0 = _mm256_mul_epu32(_mm256_srli_epi64(c0, 32), m0);
            const __m256i e1 = _mm256_mul_epu32(c2, m1), o1 = _mm256_mul_epu32(_mm256_srli_epi64(c2, 32), m1);
            const __m256i lo0 = _mm256_blend_epi32(e0, _mm256_slli_epi64(o0, 32), 0xAA);
            const __m256i hi0 = _mm256_blend_epi32(_mm256_srli_epi64(e0, 32), o0, 0xAA);
            const __m256i lo1 = _mm256_blend_epi32(e1, _mm256_slli_epi64(o1, 32), 0xAA);
            const __m256i hi1 = _mm256_blend_epi32(_mm256_srli_epi64(e1, 32), o1, 0xAA);
            c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), _mm256_set1_epi32(static_cast<int>(k0)));
            c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), _mm256_set1_epi32(static_cast<int>(k1)));
            c1 = lo1;
            c3 = lo0;
            k0 += philox_w0;
            k1 += philox_w1;
        }
        _mm256_store_si256(reinterpret_cast<__m256i*>(w0), c0);
        _mm256_store_si256(reinterpret_cast<__m256i*>(w1), c1);
        for (int j = 0; j < 8; ++j) out[b + j] = to_unit(w0[j], w1[j]);
    }
    if (b < n) uniform_block_scalar(seed, first + b, lane, stream, out + b, n - b);
}

using UniformBlock = void (*)(std::uint64_t, std::uint64_t, std::uint32_t, Stream, double*, std::size_t) noexcept;

// Integer-only, so both paths give identical bits.
const UniformBlock uniform_block = __builtin_cpu_supports("avx2") ? uniform_block_avx2 : uniform_block_scalar;

}  // namespace

std::vector<double> sample_series(const CosineSeries& series, std::uint64_t seed, std::uint64_t first_index,
                                  std::size_t count, unsigned workers) {
    for (const auto& k : series.kernels())
        if (k.kernel > 0xFFFFFFFFull) raise(ErrorKind::overflow, "sample: kernel index does not fit a 32-bit lane");
    std::vector<double> out(count, 0.0);
    const CounterRng rng(seed);
    const double cb = std::cos(series.phase()), sb = std::sin(series.phase());
    const std::size_t blocks = (count + detail::block_size - 1) / detail::block_size;
    parallel_chunks(blocks, workers, [&](std::size_t begin, std::size_t end) {
        double theta[detail::block_size];
        for (std::size_t blk = begin; blk < end; ++blk) {
            const std::size_t first = blk * detail::block_size;
            const std::size_t n = std::min(detail::block_size, count - first);
            for (const auto& k : series.kernels()) {
                const auto lane = static_cast<std::uint32_t>(k.kernel);
                uniform_block(rng.seed(), first_index + first, lane, Stream::model_phase, theta, n);
                detail::accumulate_harmonics(k.coefficients, cb, sb, theta, out.data() + first, n);
            }
        }
    });
    return out;
}

SampleBatch sample(const ModelSpec& model, std::size_t count, std::uint64_t seed, unsigned workers) {
    if (count == 0) raise(ErrorKind::invalid_argument, "sample: count must be >= 1");
    SampleBatch batch;
    batch.model = model;
    batch.seed = seed;
    batch.values = sample_series(build_model(model), seed, 0, count, workers);
    return batch;
}

std::string_view to_string(MomentMethod m) noexcept {
    return m == MomentMethod::exact ? "exact" : "monte-carlo";
}

namespace {

/// E[Y^j], j = 0..k, for Y = Re(e^{i beta} sum_r c_r z^r), z uniform on the circle.
std::vector<double> kernel_moments(std::span<const double> c, double beta, unsigned k) {
    const std::size_t R = c.size();
    // p(z) = sum_r (c_r/2)(e^{i beta} z^r + e^{-i beta} z^{-r}); index offset R
    std::vector<std::complex<double>> p(2 * R + 1);
    const std::complex<double> e = std::polar(1.0, beta);
    for (std::size_t r = 1; r <= R; ++r) {
        p[R + r] = 0.5 * c[r - 1] * e;
        p[R - r] = 0.5 * c[r - 1] * std::conj(e);
    }
    std::vector<double> m(k + 1, 0.0);
    m[0] = 1.0;
    std::vector<std::complex<double>> power{1.0};  // p^0, offset 0
    for (unsigned j = 1; j <= k; ++j) {
        const std::size_t half = (power.size() - 1) / 2;
        std::vector<std::complex<double>> next(power.size() + 2 * R);
        for (std::size_t a = 0; a < power.size(); ++a) {
            if (power[a] == 0.0) continue;
            for (std::size_t b = 0; b < p.size(); ++b)
                if (p[b] != 0.0) next[a + b] += power[a] * p[b];
        }
        power = std::move(next);
        m[j] = power[half + R].real();
    }
    return m;
}

double binomial(unsigned n, unsigned k) {
    double b = 1.0;
    for (unsigned i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

}  // namespace

MomentValue exact_moment(const CosineSeries& series, unsigned k, double budget) {
    double work = 0.0;
    for (const auto& kn : series.kernels()) {
        const double R = static_cast<double>(kn.coefficients.size());
        work += static_cast<double>(k) * k * R * R;
    }
    if (work > budget)
        raise(ErrorKind::resource, "exact_moment: enumeration budget exceeded (" + std::to_string(work) +
                                       " work units); use Monte Carlo (model moment --method mc)");
    std::vector<double> total(k + 1, 0.0);
    total[0] = 1.0;
    for (const auto& kn : series.kernels()) {
        const auto m = kernel_moments(kn.coefficients, series.phase(), k);
        std::vector<double> next(k + 1, 0.0);
        for (unsigned j = 0; j <= k; ++j)
            for (unsigned i = 0; i <= j; ++i) next[j] += binomial(j, i) * total[i] * m[j - i];
        total = std::move(next);
    }
    MomentValue v;
    v.order = k;
    v.value = total[k];
    v.method = MomentMethod::exact;
    return v;
}

MomentValue exact_moment(const ModelSpec& model, unsigned k, double budget) {
    return exact_moment(build_model(model), k, budget);
}

MomentValue sample_moment(std::span<const double> values, unsigned k) {
    if (values.empty()) raise(ErrorKind::invalid_argument, "sample_moment: empty sample");
    double mean = 0.0, m2 = 0.0;
    std::size_t n = 0;
    for (double x : values) {
        // Welford on x^k
        const double y = std::pow(x, static_cast<int>(k));
        ++n;
        const double d = y - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (y - mean);
    }
    MomentValue v;
    v.order = k;
    v.value = mean;
    v.method = MomentMethod::monte_carlo;
    v.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    v.error_bound = 1.96 * v.std_error;
    return v;
}

MomentValue variance_closed_form(Family family, std::uint64_t kernel_limit, std::uint64_t inner_limit) {
    const double c0 = family_constants(family).amplitude;
    MomentValue v;
    v.order = 2;
    v.method = MomentMethod::exact;
    v.value = 0.5 * c0 * c0 * weighted_square_sum(family, 1, kernel_limit + 1, 1, inner_limit + 1, true);
    return v;
}

double full_variance(Family family) {
    const double c0 = family_constants(family).amplitude;
    const double s = 1.5;
    double sum = 0.0;
    if (family == Family::circle) {
        // sum r(n)^2 n^{-s} = 16 zeta(s)^2 beta(s)^2 / ((1 + 2^{-s}) zeta(2s))
        const double z = special::zeta(s), b = special::dirichlet_beta(s);
        sum = 16.0 * z * z * b * b / ((1.0 + std::pow(2.0, -s)) * special::zeta(2 * s));
    } else {
        sum = std::pow(special::zeta(s), 4) / special::zeta(2 * s);
    }
    return 0.5 * c0 * c0 * sum;
}

double moment_upper_bound(Family family, std::uint64_t N, std::uint64_t M, std::uint64_t L, unsigned k) {
    if (N < 1 || N >= M) raise(ErrorKind::invalid_argument, "moment_upper_bound: need 1 <= N < M");
    if (L < 1) raise(ErrorKind::invalid_argument, "moment_upper_bound: need L >= 1");
    if (k < 1) raise(ErrorKind::invalid_argument, "moment_upper_bound: need k >= 1");
    const double base = weighted_square_sum(family, N, M, 1, L + 1, false);
    return std::tgamma(static_cast<double>(k) + 1.0) * std::pow(base, static_cast<double>(k));
}

TailEstimate tail_from_samples(std::span<const double> values, double V) {
    if (values.empty()) raise(ErrorKind::invalid_argument, "tail estimate: empty sample");
    std::size_t above = 0;
    for (double v : values) above += v > V;
    TailEstimate e;
    e.threshold = V;
    e.count = values.size();
    const double n = static_cast<double>(values.size());
    e.probability = static_cast<double>(above) / n;
    e.std_error = std::sqrt(e.probability * (1.0 - e.probability) / n);
    e.half_width = 1.96 * e.std_error;
    return e;
}

TailEstimate tail_mc(const ModelSpec& model, double V, std::size_t count, std::uint64_t seed, unsigned workers) {
    if (count < 1000) raise(ErrorKind::invalid_argument, "tail_mc: count must be >= 1000");
    const auto batch = sample(model, count, seed, workers);
    return tail_from_samples(batch.values, V);
}

}  // namespace etlab
