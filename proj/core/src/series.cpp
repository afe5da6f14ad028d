#include "etlab/series.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "etlab/arith.hpp"
#include "etlab/error.hpp"
#include "etlab/parallel.hpp"

namespace etlab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double unit_roundoff = 0x1.0p-53;
// Relative error of sqrt, the two products and the stored constant, in
// double-double; generous.
constexpr double dd_relative = 0x1.0p-100;

void check_t(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) raise(ErrorKind::invalid_argument, "series: t must be finite and > 0");
}

void check_kernel(std::uint64_t n) {
    if (n >= (std::uint64_t{1} << 53)) raise(ErrorKind::overflow, "series: kernel index exceeds 2^53");
}

/// theta = frac(alpha sqrt(n t)) and |alpha sqrt(nt)| (for error bounds).
inline double base_phase(std::uint64_t n, double t, DoubleDouble alpha, double& magnitude) {
    const DoubleDouble nt = dd::two_prod(static_cast<double>(n), t);
    const DoubleDouble v = dd::mul(dd::sqrt(nt), alpha);
    magnitude = std::abs(v.hi);
    return dd::frac(v);
}

[[noreturn]] void phase_failure(std::uint64_t n, std::uint64_t r, double t, double bound) {
    std::ostringstream os;
    os.precision(17);
    os << "phase error budget exceeded at (n=" << n << ", r=" << r << ", t=" << t << "): bound " << bound;
    raise(ErrorKind::precision, os.str());
}

struct KernelWeights {
    double harmonic_l1 = 0.0;   // sum |c_r| r
    double l1 = 0.0;            // sum |c_r|
};

std::vector<KernelWeights> kernel_weights(const CosineSeries& s) {
    std::vector<KernelWeights> w;
    w.reserve(s.kernels().size());
    for (const auto& k : s.kernels()) {
        KernelWeights kw;
        for (std::size_t r = 0; r < k.coefficients.size(); ++r) {
            kw.l1 += std::abs(k.coefficients[r]);
            kw.harmonic_l1 += std::abs(k.coefficients[r]) * static_cast<double>(r + 1);
        }
        w.push_back(kw);
    }
    return w;
}

/// Evaluates one block of up to block_size points; also returns the error bound
/// for each point when `bounds` is non-null.
void eval_block(const CosineSeries& s, const std::vector<KernelWeights>& w, const double* ts, std::size_t count,
                double* out, double* bounds) {
    const double cb = std::cos(s.phase()), sb = std::sin(s.phase());
    double theta[detail::block_size];
    for (std::size_t b = 0; b < count; ++b) {
        out[b] = 0.0;
        if (bounds) bounds[b] = 0.0;
    }
    const auto& kernels = s.kernels();
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        const auto& k = kernels[i];
        const std::size_t R = k.coefficients.size();
        for (std::size_t b = 0; b < count; ++b) {
            double mag = 0.0;
            theta[b] = base_phase(k.kernel, ts[b], s.frequency(), mag);
            // Phase error of theta, amplified by r in the r-th harmonic.
            const double delta = mag * dd_relative + unit_roundoff;
            if (static_cast<double>(R) * delta >= phase_error_threshold)
                phase_failure(k.kernel, R, ts[b], static_cast<double>(R) * delta);
            if (bounds) {
                // phase error, cos/sin of 2 pi theta, Clenshaw rounding (grows like R r)
                bounds[b] += two_pi * delta * w[i].harmonic_l1 +
                             4.0 * unit_roundoff * static_cast<double>(R + 1) * w[i].harmonic_l1;
            }
        }
        detail::accumulate_harmonics(k.coefficients, cb, sb, theta, out, count);
    }
    if (bounds) {
        // final summation across kernels
        const double across = static_cast<double>(kernels.size()) * unit_roundoff * s.l1_norm();
        for (std::size_t b = 0; b < count; ++b) bounds[b] += across;
    }
}

}  // namespace

PhaseValue phase(std::uint64_t n, std::uint64_t r, double t, DoubleDouble alpha) {
    if (n == 0 || r == 0) raise(ErrorKind::invalid_argument, "phase: n and r must be >= 1");
    check_t(t);
    check_kernel(n);
    check_kernel(r);
    const DoubleDouble nt = dd::two_prod(static_cast<double>(n), t);
    const DoubleDouble v = dd::mul(dd::mul(dd::sqrt(nt), alpha), static_cast<double>(r));
    PhaseValue p;
    p.value_mod_1 = dd::frac(v);
    p.absolute_error_bound = std::abs(v.hi) * dd_relative + unit_roundoff;
    if (p.absolute_error_bound >= phase_error_threshold) phase_failure(n, r, t, p.absolute_error_bound);
    return p;
}

SeriesValue eval_certified(const CosineSeries& series, double t) {
    check_t(t);
    const auto w = kernel_weights(series);
    SeriesValue v;
    eval_block(series, w, &t, 1, &v.value, &v.error_bound);
    return v;
}

double eval_truncated(const CosineSeries& series, double t) { return eval_certified(series, t).value; }

double eval_truncated(const SeriesSpec& spec, double t) { return eval_truncated(build_series(spec), t); }

std::vector<double> eval_many(const CosineSeries& series, std::span<const double> ts, unsigned workers) {
    for (double t : ts) check_t(t);
    for (const auto& k : series.kernels()) check_kernel(k.kernel);
    std::vector<double> out(ts.size(), 0.0);
    const auto w = kernel_weights(series);
    const std::size_t blocks = (ts.size() + detail::block_size - 1) / detail::block_size;
    parallel_chunks(blocks, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t blk = begin; blk < end; ++blk) {
            const std::size_t first = blk * detail::block_size;
            const std::size_t count = std::min(detail::block_size, ts.size() - first);
            eval_block(series, w, ts.data() + first, count, out.data() + first, nullptr);
        }
    });
    return out;
}

double voronoi_main_sum(std::uint64_t M, double t) {
    if (M == 0) raise(ErrorKind::invalid_argument, "voronoi_main_sum: M must be >= 1");
    check_t(t);
    check_kernel(M);
    const auto d = divisor_sieve(M);
    const double c0 = 1.0 / (std::numbers::pi * std::numbers::sqrt2);
    double sum = 0.0;
    for (std::uint64_t n = 1; n <= M; ++n) {
        double mag = 0.0;
        const double theta = base_phase(n, t, DoubleDouble{2.0}, mag);
        sum += d[n] * std::pow(static_cast<double>(n), -0.75) * std::cos(two_pi * theta - std::numbers::pi / 4);
    }
    return c0 * sum;
}

std::complex<double> oscillatory_integral(double eta, double T) {
    if (eta == 0.0 || !std::isfinite(eta)) raise(ErrorKind::invalid_argument, "oscillatory_integral: eta must be nonzero");
    if (!(T > 0.0) || !std::isfinite(T)) raise(ErrorKind::invalid_argument, "oscillatory_integral: T must be > 0");
    // t = u^2: int 2u e(eta u) du, antiderivative 2 e^{iku} (u/(ik) + 1/k^2), k = 2 pi eta.
    const double k = two_pi * eta;
    auto G = [&](double x) {
        const DoubleDouble u = dd::sqrt(DoubleDouble{x});
        const double f = dd::frac(dd::mul(u, eta));
        const std::complex<double> e(std::cos(two_pi * f), std::sin(two_pi * f));
        return 2.0 * e * std::complex<double>(1.0 / (k * k), -u.to_double() / k);
    };
    return G(2.0 * T) - G(T);
}

}  // namespace etlab
