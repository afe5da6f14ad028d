#include "etlab/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "etlab/error.hpp"
#include "etlab/independence.hpp"
#include "etlab/rng.hpp"
#include "etlab/series.hpp"

namespace etlab {

std::string_view to_string(GridStrategy s) noexcept {
    switch (s) {
        case GridStrategy::jittered_stratified: return "stratified";
        case GridStrategy::uniform_random: return "uniform";
        case GridStrategy::midpoint: return "midpoint";
    }
    return "stratified";
}

GridStrategy parse_grid_strategy(std::string_view name) {
    if (name == "stratified" || name == "jittered-stratified") return GridStrategy::jittered_stratified;
    if (name == "uniform" || name == "uniform-random") return GridStrategy::uniform_random;
    if (name == "midpoint") return GridStrategy::midpoint;
    raise(ErrorKind::invalid_argument, "unknown grid strategy '" + std::string(name) + "' (stratified|uniform|midpoint)");
}

TGrid t_grid(double T, std::size_t count, GridStrategy strategy, std::uint64_t seed) {
    if (!(T >= 2.0) || !std::isfinite(T)) raise(ErrorKind::invalid_argument, "t_grid: T must be >= 2");
    if (count == 0) raise(ErrorKind::invalid_argument, "t_grid: count must be >= 1");
    TGrid g;
    g.T = T;
    g.count = count;
    g.strategy = strategy;
    g.seed = seed;
    g.points.resize(count);
    const CounterRng rng(seed);
    const double n = static_cast<double>(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double lo = T + T * (static_cast<double>(j) / n);
        const double hi = T + T * (static_cast<double>(j + 1) / n);
        double t = 0.0;
        switch (strategy) {
            case GridStrategy::jittered_stratified: {
                t = lo + (hi - lo) * rng.uniform(j, 0, Stream::grid_jitter);
                if (t >= hi) t = std::nextafter(hi, lo);
                break;
            }
            case GridStrategy::uniform_random:
                t = std::min(2 * T, T + T * rng.uniform(j, 0, Stream::grid_uniform));
                break;
            case GridStrategy::midpoint: t = 0.5 * (lo + hi); break;
        }
        g.points[j] = std::clamp(t, T, 2 * T);
    }
    return g;
}

ECDF::ECDF(std::vector<double> values) : sorted_(std::move(values)) {
    if (sorted_.empty()) raise(ErrorKind::invalid_argument, "empirical_cdf: empty sample");
    for (double v : sorted_)
        if (std::isnan(v)) raise(ErrorKind::invalid_argument, "empirical_cdf: NaN in sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double ECDF::operator()(double u) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), u);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

ECDF empirical_cdf(std::span<const double> values) { return ECDF(std::vector<double>(values.begin(), values.end())); }

double ks_distance(const ECDF& a, const ECDF& b) {
    const auto& x = a.values();
    const auto& y = b.values();
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() || j < y.size()) {
        double u;
        if (j == y.size() || (i < x.size() && x[i] <= y[j]))
            u = x[i];
        else
            u = y[j];
        while (i < x.size() && x[i] == u) ++i;
        while (j < y.size() && y[j] == u) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

MomentValue empirical_moment(const CosineSeries& series, const TGrid& grid, unsigned k, unsigned workers) {
    const auto values = eval_many(series, grid.points, workers);
    return sample_moment(values, k);
}

MomentMatchReport moment_match_report(std::span<const double> weights, DoubleDouble alpha, double beta, double T,
                                      unsigned h, const TGrid& grid, unsigned workers) {
    if (h < 1) raise(ErrorKind::invalid_argument, "moment_match_report: h must be >= 1");
    if (weights.empty()) raise(ErrorKind::invalid_argument, "moment_match_report: M must be >= 1");
    const CosineSeries series = series_from_weights(weights, alpha, beta);
    MomentMatchReport r;
    r.h = h;
    r.M = weights.size();
    r.T = T;
    r.grid_count = grid.points.size();
    r.strategy = grid.strategy;
    r.empirical = empirical_moment(series, grid, h, workers).value;
    r.exact_model = exact_moment(series, h).value;
    r.difference = r.empirical - r.exact_model;
    const double hd = static_cast<double>(h);
    r.M_limit = std::pow(T, 1.0 / (std::pow(2.0, hd) + 4.0 * hd)) / (hd * hd);
    r.h_limit = std::log(std::log(T)) / 4.0;
    r.M_admissible = static_cast<double>(r.M) <= r.M_limit;
    r.h_admissible = hd <= r.h_limit;
    return r;
}

double t_average_by_expansion(std::span<const double> weights, DoubleDouble alpha, double beta, double T, unsigned h) {
    const std::uint64_t M = weights.size();
    if (M == 0) raise(ErrorKind::invalid_argument, "t_average_by_expansion: M must be >= 1");
    if (h == 0) return 1.0;
    const double space = std::pow(2.0 * static_cast<double>(M), static_cast<double>(h));
    if (space > 1e8) raise(ErrorKind::resource, "t_average_by_expansion: (2M)^h exceeds 1e8");
    std::vector<double> roots(M + 1);
    for (std::uint64_t m = 1; m <= M; ++m) roots[m] = std::sqrt(static_cast<double>(m));
    const std::complex<double> eb = std::polar(1.0, beta);
    const double a = alpha.to_double();
    std::vector<std::uint64_t> idx(h, 0);
    std::vector<SignedTerm> terms(h);
    std::complex<double> total = 0.0;
    const std::uint64_t items = 2 * M;
    while (true) {
        std::complex<double> coef = 1.0;
        double eta = 0.0;
        for (unsigned j = 0; j < h; ++j) {
            const bool plus = idx[j] < M;
            const std::uint64_t m = (plus ? idx[j] : idx[j] - M) + 1;
            coef *= 0.5 * weights[m - 1] * (plus ? eb : std::conj(eb));
            eta += plus ? roots[m] : -roots[m];
            terms[j] = {plus ? 1 : -1, m};
        }
        if (coef != 0.0) {
            if (detect_relation(terms).is_zero)
                total += coef;
            else
                total += coef * oscillatory_integral(a * eta, T) / T;
        }
        int j = static_cast<int>(h) - 1;
        while (j >= 0 && idx[j] + 1 == items) idx[j--] = 0;
        if (j < 0) break;
        ++idx[j];
    }
    return total.real();
}

ClippedLaplace clipped_laplace(std::span<const double> values, double lambda, double V) {
    if (!(V > 0.0)) raise(ErrorKind::invalid_argument, "clipped_laplace: V must be > 0");
    if (values.empty()) raise(ErrorKind::invalid_argument, "clipped_laplace: empty sample");
    ClippedLaplace c;
    c.count = values.size();
    double s = 0.0;
    for (double v : values) {
        if (std::abs(v) <= V) {
            s += std::exp(lambda * v);
            ++c.kept;
        }
    }
    if (c.kept == 0) raise(ErrorKind::degenerate_input, "clipped_laplace: every sample exceeds the clip level");
    c.value = s / static_cast<double>(c.count);
    c.excluded_fraction = static_cast<double>(c.count - c.kept) / static_cast<double>(c.count);
    return c;
}

ClipThreshold paper_clip_threshold(double T, double C3) {
    if (!(T > std::exp(1.0))) raise(ErrorKind::invalid_argument, "clip threshold: T must exceed e");
    if (!(C3 > 0.0)) raise(ErrorKind::invalid_argument, "clip threshold: C3 must be > 0");
    ClipThreshold c;
    c.K = std::max(2.0, std::floor(std::log(std::log(T)) / 8.0));
    c.V = C3 * std::pow(c.K, 0.25) * std::pow(std::log(c.K), 1.25);
    return c;
}

std::complex<double> char_fn_empirical(std::span<const double> values, double alpha) {
    if (values.empty()) raise(ErrorKind::invalid_argument, "char_fn_empirical: empty sample");
    double re = 0.0, im = 0.0;
    for (double v : values) {
        re += std::cos(alpha * v);
        im += std::sin(alpha * v);
    }
    const double n = static_cast<double>(values.size());
    return {re / n, im / n};
}

double berry_esseen_bound(const BerryEsseenInput& in) {
    if (!(in.R > 0.0)) raise(ErrorKind::invalid_argument, "berry_esseen_bound: R must be > 0");
    if (!(in.small_alpha > 0.0) || in.small_alpha >= in.R)
        raise(ErrorKind::invalid_argument, "berry_esseen_bound: need 0 < small_alpha < R");
    std::size_t n = std::max<std::size_t>(2, in.nodes);
    if (n % 2) ++n;
    auto f = [&](double a) { return std::abs(in.phi_a(a) - in.phi_b(a)) / a; };
    // composite Simpson on [small_alpha, R]
    const double lo = in.small_alpha, step = (in.R - lo) / static_cast<double>(n);
    double s = f(lo) + f(in.R);
    for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + step * static_cast<double>(i));
    const double integral = s * step / 3.0;
    const double near_zero = in.small_alpha * (in.abs_mean_a + in.abs_mean_b);
    return 1.0 / in.R + 2.0 * (integral + near_zero);
}

DiscrepancyReport discrepancy_report(std::span<const double> a, std::span<const double> b, double R, std::size_t nodes) {
    DiscrepancyReport r;
    r.ks_value = ks_distance(empirical_cdf(a), empirical_cdf(b));
    r.count_a = a.size();
    r.count_b = b.size();
    r.R = R;
    auto abs_mean = [](std::span<const double> v) {
        double s = 0.0;
        for (double x : v) s += std::abs(x);
        return s / static_cast<double>(v.size());
    };
    BerryEsseenInput in;
    in.phi_a = [a](double t) { return char_fn_empirical(a, t); };
    in.phi_b = [b](double t) { return char_fn_empirical(b, t); };
    in.R = R;
    in.abs_mean_a = abs_mean(a);
    in.abs_mean_b = abs_mean(b);
    in.nodes = nodes;
    r.berry_esseen_rhs = berry_esseen_bound(in);
    return r;
}

double extreme_reference(double X, ErrorFamily family) {
    if (!(X > std::exp(1.0))) raise(ErrorKind::invalid_argument, "extreme_reference: X must exceed e");
    const double e = family == ErrorFamily::divisor ? 0.75 * (std::cbrt(16.0) - 1.0) : 0.75 * (std::cbrt(2.0) - 1.0);
    return std::pow(X * std::log(X), 0.25) * std::pow(std::log(std::log(X)), e);
}

ExtremeScan extreme_scan(double X, double density, ErrorFamily family) {
    if (!(X >= 10.0) || !std::isfinite(X)) raise(ErrorKind::invalid_argument, "extreme_scan: X must be >= 10");
    if (!(density > 0.0) || !std::isfinite(density)) raise(ErrorKind::invalid_argument, "extreme_scan: density must be > 0");
    if (2.0 * X > 4e9) raise(ErrorKind::resource, "extreme_scan: X too large for the incremental sieve");
    const std::uint64_t k0 = static_cast<std::uint64_t>(std::floor(X));
    const std::uint64_t k1 = static_cast<std::uint64_t>(std::floor(2.0 * X));
    // S[k - k0] = exact sum over n <= k
    std::vector<Int128> S(k1 - k0 + 1);
    if (family == ErrorFamily::divisor) {
        const auto d = divisor_sieve(k1);
        S[0] = summatory_divisor(k0);
        for (std::uint64_t k = k0 + 1; k <= k1; ++k) S[k - k0] = S[k - k0 - 1] + d[k];
    } else {
        const auto r = two_squares_sieve(k1);
        S[0] = lattice_count(k0) - 1;
        for (std::uint64_t k = k0 + 1; k <= k1; ++k) S[k - k0] = S[k - k0 - 1] + r[k];
    }
    ExtremeScan out;
    out.X = X;
    out.density = density;
    out.max = -INFINITY;
    auto consider = [&](double x, Int128 sum, bool left) {
        const double v = error_term_from_sum(family, x, sum).remainder;
        ++out.points;
        if (v > out.max) {
            out.max = v;
            out.argmax = x;
            out.argmax_is_left_limit = left;
        }
    };
    const auto steps = static_cast<std::uint64_t>(std::floor(X * density));
    for (std::uint64_t j = 0; j <= steps; ++j) {
        const double x = X + static_cast<double>(j) / density;
        if (x > 2.0 * X) break;
        consider(x, S[static_cast<std::uint64_t>(std::floor(x)) - k0], false);
    }
    // both sides of every jump inside [X, 2X]
    for (std::uint64_t k = k0; k <= k1; ++k) {
        const double x = static_cast<double>(k);
        if (x < X) continue;
        consider(x, S[k - k0], false);
        if (x > X) consider(x, S[k - k0 - 1], true);
    }
    out.reference = extreme_reference(X, family);
    return out;
}

}  // namespace etlab
