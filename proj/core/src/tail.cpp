#include "etlab/tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "etlab/error.hpp"

namespace etlab {

std::string_view to_string(CurveSource s) noexcept {
    switch (s) {
        case CurveSource::model_analytic: return "model-analytic";
        case CurveSource::empirical_clipped: return "empirical-clipped";
        case CurveSource::synthetic: return "synthetic";
    }
    return "synthetic";
}

LaplaceCurve::LaplaceCurve(std::vector<double> lambdas, std::vector<double> log_values, CurveSource source)
    : source_(source) {
    if (lambdas.empty() || lambdas.size() != log_values.size())
        raise(ErrorKind::invalid_argument, "LaplaceCurve: need matching, nonempty lambda and value arrays");
    lambdas_.reserve(lambdas.size() + 1);
    log_values_.reserve(lambdas.size() + 1);
    lambdas_.push_back(0.0);
    log_values_.push_back(0.0);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > lambdas_.back()) || !std::isfinite(lambdas[i]))
            raise(ErrorKind::invalid_argument, "LaplaceCurve: lambda grid must be positive and increasing");
        if (!std::isfinite(log_values[i])) raise(ErrorKind::invalid_argument, "LaplaceCurve: values must be positive and finite");
        lambdas_.push_back(lambdas[i]);
        log_values_.push_back(log_values[i]);
    }
    // slopes of log L must not decrease (Hoelder)
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < lambdas_.size(); ++i) {
        const double s = (log_values_[i + 1] - log_values_[i]) / (lambdas_[i + 1] - lambdas_[i]);
        if (s < prev - 1e-9 * (1.0 + std::abs(prev))) {
            std::ostringstream os;
            os << "LaplaceCurve: log L is not convex near lambda = " << lambdas_[i];
            raise(ErrorKind::invalid_argument, os.str());
        }
        prev = s;
    }
}

LaplaceCurve LaplaceCurve::from_values(std::vector<double> lambdas, const std::vector<double>& values, CurveSource source) {
    std::vector<double> logs(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0)) raise(ErrorKind::invalid_argument, "LaplaceCurve: values must be positive");
        logs[i] = std::log(values[i]);
    }
    return LaplaceCurve(std::move(lambdas), std::move(logs), source);
}

double LaplaceCurve::log_value(double lambda) const {
    const double top = lambdas_.back();
    if (!(lambda >= 0.0) || lambda > top * (1 + 1e-15)) {
        std::ostringstream os;
        os << "LaplaceCurve: lambda = " << lambda << " outside [0, " << top << "]";
        raise(ErrorKind::out_of_range, os.str());
    }
    const std::size_t n = lambdas_.size();
    if (n < 4) {
        // linear in log space on short curves
        std::size_t i = std::upper_bound(lambdas_.begin(), lambdas_.end(), lambda) - lambdas_.begin();
        i = std::clamp<std::size_t>(i, 1, n - 1);
        const double w = (lambda - lambdas_[i - 1]) / (lambdas_[i] - lambdas_[i - 1]);
        return (1 - w) * log_values_[i - 1] + w * log_values_[i];
    }
    std::size_t i = std::upper_bound(lambdas_.begin(), lambdas_.end(), lambda) - lambdas_.begin();
    // nodes i-2 .. i+1, shifted into range
    std::size_t first = i >= 2 ? i - 2 : 0;
    first = std::min(first, n - 4);
    double s = 0.0;
    for (std::size_t a = first; a < first + 4; ++a) {
        double w = 1.0;
        for (std::size_t b = first; b < first + 4; ++b)
            if (b != a) w *= (lambda - lambdas_[b]) / (lambdas_[a] - lambdas_[b]);
        s += w * log_values_[a];
    }
    return s;
}

std::vector<double> default_lambda_grid(double cap) {
    if (!(cap > 0.0)) raise(ErrorKind::invalid_argument, "lambda grid: cap must be > 0");
    std::vector<double> g;
    for (int j = 0;; ++j) {
        const double l = std::exp2(-6.0 + j / 8.0);
        if (l > cap * (1 + 1e-12)) break;
        g.push_back(l);
    }
    if (g.empty()) g.push_back(cap);
    return g;
}

LaplaceCurve model_curve(TransformEngine& engine, std::span<const double> lambdas) {
    std::vector<double> l(lambdas.begin(), lambdas.end()), logs;
    logs.reserve(l.size());
    for (double x : l) logs.push_back(engine.log_laplace(x));
    return LaplaceCurve(std::move(l), std::move(logs), CurveSource::model_analytic);
}

double chernov_upper(const LaplaceCurve& curve, double V) {
    double best = 0.0;  // log of the lambda = 0 node
    const auto& l = curve.lambdas();
    const auto& y = curve.log_values();
    for (std::size_t i = 0; i < l.size(); ++i) best = std::min(best, y[i] - l[i] * V);
    return std::min(1.0, std::exp(best));
}

double solve_lambda(const LaplaceCurve& curve, double V) {
    const auto& l = curve.lambdas();
    const auto& y = curve.log_values();
    const double log2 = std::log(2.0);
    auto g = [&](double lambda) { return curve.log_value(lambda) - log2 - lambda * V; };
    std::size_t k = 1;
    while (k < l.size() && y[k] - log2 - l[k] * V <= 0.0) ++k;
    if (k == l.size()) {
        std::ostringstream os;
        os << "solve_lambda: no crossing L(lambda) = 2 e^{lambda V} on the grid for V = " << V
           << " (needs L(lambda_max) > 2 e^{lambda_max V})";
        raise(ErrorKind::out_of_range, os.str());
    }
    double lo = l[k - 1], hi = l[k];
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double pz_lower(const LaplaceCurve& curve, double V) {
    const double lambda = solve_lambda(curve, V);
    if (2.0 * lambda > curve.lambda_max()) {
        std::ostringstream os;
        os << "pz_lower: 2 lambda* = " << 2.0 * lambda << " lies beyond the grid (lambda_max = " << curve.lambda_max() << ")";
        raise(ErrorKind::out_of_range, os.str());
    }
    return 0.25 * std::exp(2.0 * curve.log_value(lambda) - curve.log_value(2.0 * lambda));
}

double lau_log_exponent(Family family) {
    return family == Family::circle ? 3.0 * (std::cbrt(2.0) - 1.0) : 3.0 * (std::cbrt(16.0) - 1.0);
}

double lau_reference(double V, Family family, double b) {
    if (!(V > 1.0)) raise(ErrorKind::invalid_argument, "lau_reference: V must be > 1");
    return std::exp(-b * std::pow(V, 4.0) * std::pow(std::log(V), -lau_log_exponent(family)));
}

double fit_exponent(std::span<const double> V, std::span<const double> p) {
    if (V.size() != p.size()) raise(ErrorKind::invalid_argument, "fit_exponent: mismatched arrays");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < V.size(); ++i) {
        if (!(p[i] > 0.0 && p[i] < 1.0) || !(V[i] > 0.0)) continue;
        const double x = std::log(V[i]), y = std::log(-std::log(p[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) raise(ErrorKind::degenerate_input, "fit_exponent: fewer than two usable tail points");
    const double dn = static_cast<double>(n);
    const double den = sxx - sx * sx / dn;
    if (!(den > 0.0)) raise(ErrorKind::degenerate_input, "fit_exponent: all V equal");
    return (sxy - sx * sy / dn) / den;
}

TailReport tail_report(const LaplaceCurve& curve, std::span<const double> samples, std::span<const double> V_grid,
                       Family family, double b) {
    TailReport r;
    r.family = family;
    for (double V : V_grid) {
        TailRow row;
        row.V = V;
        row.chernov = chernov_upper(curve, V);
        try {
            row.pz = pz_lower(curve, V);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::out_of_range) throw;
            row.pz = std::numeric_limits<double>::quiet_NaN();
        }
        if (!samples.empty()) {
            const auto t = tail_from_samples(samples, V);
            row.mc = t.probability;
            row.mc_std_error = t.std_error;
        } else {
            row.mc = row.mc_std_error = std::numeric_limits<double>::quiet_NaN();
        }
        row.reference = V > 1.0 ? lau_reference(V, family, b) : std::numeric_limits<double>::quiet_NaN();
        r.rows.push_back(row);
    }
    return r;
}

}  // namespace etlab
