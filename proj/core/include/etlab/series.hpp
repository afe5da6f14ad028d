#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "etlab/cosine_series.hpp"

namespace etlab {

/// alpha0 * r * sqrt(n t) reduced mod 1.
struct PhaseValue {
    double value_mod_1 = 0.0;
    double absolute_error_bound = 0.0;
};

inline constexpr double phase_error_threshold = 1e-6;

/// Double-double sqrt(nt) and mod-1 reduction. Throws ErrorKind::precision
/// when the propagated bound reaches phase_error_threshold.
PhaseValue phase(std::uint64_t n, std::uint64_t r, double t, DoubleDouble alpha);

struct SeriesValue {
    double value = 0.0;
    /// Rounding (phase + summation) bound; excludes any truncation.
    double error_bound = 0.0;
};

/// Evaluates the series with theta_n = alpha0 sqrt(nt). t > 0.
SeriesValue eval_certified(const CosineSeries& series, double t);
double eval_truncated(const CosineSeries& series, double t);
/// Convenience: build_series(spec) then evaluate.
double eval_truncated(const SeriesSpec& spec, double t);

/// Evaluates at every t, in blocks, on up to `workers` threads.
/// Output order matches `ts`; values do not depend on the worker count.
std::vector<double> eval_many(const CosineSeries& series, std::span<const double> ts, unsigned workers = 0);

/// (1/(pi sqrt 2)) sum_{n <= M} d(n) n^{-3/4} cos(4 pi sqrt(nt) - pi/4), not regrouped.
double voronoi_main_sum(std::uint64_t M, double t);

/// int_T^{2T} e(eta sqrt t) dt in closed form, e(x) = exp(2 pi i x).
std::complex<double> oscillatory_integral(double eta, double T);

}  // namespace etlab
