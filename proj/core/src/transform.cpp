#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "etlab/error.hpp"
#include "etlab/random_model.hpp"

namespace etlab {

struct TransformEngine::Impl {
    CosineSeries series;
    TransformOptions options;
    // Kernel values on the finest grid computed so far (j / size, j < size).
    std::vector<std::vector<double>> cache;

    std::size_t start_points(std::size_t i) const {
        std::size_t p = 64;
        while (p < 4 * series.kernels()[i].coefficients.size()) p *= 2;
        return p;
    }

    void fill(std::size_t i, std::vector<double>& out, std::size_t points, std::size_t first, std::size_t step) const {
        // out[first + step*j] = Y_i((first + step*j) / points)
        const auto& k = series.kernels()[i];
        const double cb = std::cos(series.phase()), sb = std::sin(series.phase());
        double theta[detail::block_size], vals[detail::block_size];
        const std::size_t count = (points - first + step - 1) / step;
        for (std::size_t j0 = 0; j0 < count; j0 += detail::block_size) {
            const std::size_t n = std::min(detail::block_size, count - j0);
            for (std::size_t b = 0; b < n; ++b) {
                theta[b] = static_cast<double>(first + step * (j0 + b)) / static_cast<double>(points);
                vals[b] = 0.0;
            }
            detail::accumulate_harmonics(k.coefficients, cb, sb, theta, vals, n);
            for (std::size_t b = 0; b < n; ++b) out[first + step * (j0 + b)] = vals[b];
        }
    }

    const std::vector<double>& values(std::size_t i, std::size_t points) {
        auto& v = cache[i];
        if (v.empty()) {
            v.assign(points, 0.0);
            fill(i, v, points, 0, 1);
        }
        while (v.size() < points) {
            std::vector<double> finer(2 * v.size());
            for (std::size_t j = 0; j < v.size(); ++j) finer[2 * j] = v[j];
            fill(i, finer, finer.size(), 1, 2);
            v = std::move(finer);
        }
        return v;
    }

    /// Mean over the first-level subgrid of `points` of f(Y).
    template <class F>
    auto grid_mean(std::size_t i, std::size_t points, F f) {
        const auto& v = values(i, points);
        const std::size_t stride = v.size() / points;
        decltype(f(0.0)) s{};
        for (std::size_t j = 0; j < v.size(); j += stride) s += f(v[j]);
        return s / static_cast<double>(points);
    }

    [[noreturn]] void fail(std::size_t i, const char* what, double arg) const {
        std::ostringstream os;
        os << what << ": trapezoid rule did not converge for kernel " << series.kernels()[i].kernel << " at " << arg
           << " within " << (std::size_t{64} << options.max_level) << " points";
        raise(ErrorKind::precision, os.str());
    }

    double log_factor(std::size_t i, double lambda) {
        auto log_mean = [&](std::size_t points) {
            const auto& v = values(i, points);
            const std::size_t stride = v.size() / points;
            double shift = -INFINITY;
            for (std::size_t j = 0; j < v.size(); j += stride) shift = std::max(shift, lambda * v[j]);
            double s = 0.0;
            for (std::size_t j = 0; j < v.size(); j += stride) s += std::exp(lambda * v[j] - shift);
            return shift + std::log(s / static_cast<double>(points));
        };
        const std::size_t limit = std::size_t{64} << options.max_level;
        std::size_t points = start_points(i);
        double prev = log_mean(points);
        for (points *= 2; points <= limit; points *= 2) {
            const double cur = log_mean(points);
            if (std::abs(cur - prev) <= options.relative_tolerance) return cur;
            prev = cur;
        }
        fail(i, "laplace", lambda);
    }

    std::complex<double> char_factor(std::size_t i, double alpha) {
        auto mean = [&](std::size_t points) {
            return grid_mean(i, points, [alpha](double y) { return std::polar(1.0, alpha * y); });
        };
        const std::size_t limit = std::size_t{64} << options.max_level;
        std::size_t points = start_points(i);
        auto prev = mean(points);
        for (points *= 2; points <= limit; points *= 2) {
            const auto cur = mean(points);
            // absolute: factors are bounded by 1 and may vanish
            if (std::abs(cur - prev) <= options.relative_tolerance) return cur;
            prev = cur;
        }
        fail(i, "char_fn", alpha);
    }
};

TransformEngine::TransformEngine(CosineSeries series, TransformOptions options)
    : impl_(std::make_unique<Impl>()) {
    impl_->series = std::move(series);
    impl_->options = options;
    impl_->cache.resize(impl_->series.kernels().size());
}

TransformEngine::~TransformEngine() = default;
TransformEngine::TransformEngine(TransformEngine&&) noexcept = default;
TransformEngine& TransformEngine::operator=(TransformEngine&&) noexcept = default;

const CosineSeries& TransformEngine::series() const noexcept { return impl_->series; }

double TransformEngine::log_laplace(double lambda) {
    if (!std::isfinite(lambda) || std::abs(lambda) > impl_->options.lambda_cap)
        raise(ErrorKind::out_of_range, "laplace: |lambda| exceeds the configured cap");
    if (lambda == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < impl_->cache.size(); ++i) s += impl_->log_factor(i, lambda);
    return s;
}

double TransformEngine::laplace(double lambda) { return std::exp(log_laplace(lambda)); }

std::complex<double> TransformEngine::char_fn(double alpha) {
    if (!std::isfinite(alpha)) raise(ErrorKind::invalid_argument, "char_fn: alpha must be finite");
    if (alpha == 0.0) return 1.0;
    std::complex<double> p = 1.0;
    for (std::size_t i = 0; i < impl_->cache.size(); ++i) p *= impl_->char_factor(i, alpha);
    return p;
}

TransformReport laplace_report(const ModelSpec& model, double lambda, TransformOptions options) {
    TransformEngine engine(build_model(model), options);
    TransformReport r;
    r.lambda = lambda;
    r.log_value = engine.log_laplace(lambda);
    r.value = std::exp(r.log_value);
    r.tail_variance = std::max(0.0, full_variance(model.family) - engine.series().variance());
    return r;
}

double laplace(const ModelSpec& model, double lambda, TransformOptions options) {
    return laplace_report(model, lambda, options).value;
}

std::complex<double> char_fn(const ModelSpec& model, double alpha, TransformOptions options) {
    TransformEngine engine(build_model(model), options);
    return engine.char_fn(alpha);
}

}  // namespace etlab
