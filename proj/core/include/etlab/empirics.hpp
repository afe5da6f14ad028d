#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "etlab/arith.hpp"
#include "etlab/cosine_series.hpp"
#include "etlab/random_model.hpp"

namespace etlab {

/// midpoint is a deterministic cell-centre rule, used for quadrature.
enum class GridStrategy { jittered_stratified, uniform_random, midpoint };

std::string_view to_string(GridStrategy s) noexcept;
GridStrategy parse_grid_strategy(std::string_view name);

/// Points in [T, 2T].
struct TGrid {
    double T = 0.0;
    std::size_t count = 0;
    GridStrategy strategy = GridStrategy::jittered_stratified;
    std::uint64_t seed = 0;
    std::vector<double> points;
};

TGrid t_grid(double T, std::size_t count, GridStrategy strategy, std::uint64_t seed);

/// Right-continuous step function with jump 1/count at each sorted value.
class ECDF {
  public:
    explicit ECDF(std::vector<double> values);

    const std::vector<double>& values() const noexcept { return sorted_; }
    std::size_t size() const noexcept { return sorted_.size(); }
    /// Fraction of values <= u.
    double operator()(double u) const;

  private:
    std::vector<double> sorted_;
};

ECDF empirical_cdf(std::span<const double> values);

/// Exact two-sample statistic sup_u |F_a(u) - F_b(u)|.
double ks_distance(const ECDF& a, const ECDF& b);

/// (1/count) sum v^k over the grid values of the series.
MomentValue empirical_moment(const CosineSeries& series, const TGrid& grid, unsigned k, unsigned workers = 0);

/// sum_{m <= M} a_m cos(2 pi alpha0 sqrt(mt) + beta0) averaged over [T, 2T],
/// against its random-model counterpart.
struct MomentMatchReport {
    unsigned h = 0;
    std::uint64_t M = 0;
    double T = 0.0;
    std::size_t grid_count = 0;
    GridStrategy strategy = GridStrategy::midpoint;
    double empirical = 0.0;
    double exact_model = 0.0;
    double difference = 0.0;
    /// M <= T^{1/(2^h + 4h)} / h^2 and h <= log log T / 4; reported only.
    double M_limit = 0.0;
    double h_limit = 0.0;
    bool M_admissible = false;
    bool h_admissible = false;
};

MomentMatchReport moment_match_report(std::span<const double> weights, DoubleDouble alpha, double beta, double T,
                                      unsigned h, const TGrid& grid, unsigned workers = 0);

/// Exact value of (1/T) int_T^{2T} (sum a_m cos(2 pi alpha0 sqrt(mt) + beta0))^h dt
/// by expanding into exponentials; vanishing frequencies are detected
/// exactly, the rest use oscillatory_integral. Cost (2M)^h.
double t_average_by_expansion(std::span<const double> weights, DoubleDouble alpha, double beta, double T, unsigned h);

struct ClippedLaplace {
    double value = 0.0;
    double excluded_fraction = 0.0;
    std::size_t kept = 0;
    std::size_t count = 0;
};

/// (1/count) sum over |v| <= V of exp(lambda v). V may be +infinity.
ClippedLaplace clipped_laplace(std::span<const double> values, double lambda, double V);

struct ClipThreshold {
    double K = 0.0;
    double V = 0.0;
};

/// K = floor(log log T / 8), raised to 2 so that log K > 0, and
/// V = C3 K^{1/4} (log K)^{5/4}.
ClipThreshold paper_clip_threshold(double T, double C3 = 10.0);

std::complex<double> char_fn_empirical(std::span<const double> values, double alpha);

struct BerryEsseenInput {
    std::function<std::complex<double>(double)> phi_a;
    std::function<std::complex<double>(double)> phi_b;
    double R = 1.0;
    double abs_mean_a = 0.0;  // E|X_a|
    double abs_mean_b = 0.0;
    /// On [0, small_alpha] the integrand is bounded by abs_mean_a + abs_mean_b.
    double small_alpha = 1e-3;
    std::size_t nodes = 4000;
};

/// 1/R + int_{-R}^{R} |phi_a - phi_b| / |alpha| d alpha (both transforms of real variables).
double berry_esseen_bound(const BerryEsseenInput& in);

struct DiscrepancyReport {
    double ks_value = 0.0;
    std::size_t count_a = 0;
    std::size_t count_b = 0;
    double berry_esseen_rhs = 0.0;
    double R = 0.0;
};

/// KS distance plus the smoothing bound built from the two empirical
/// characteristic functions.
DiscrepancyReport discrepancy_report(std::span<const double> a, std::span<const double> b, double R,
                                     std::size_t nodes = 4000);

struct ExtremeScan {
    double X = 0.0;
    double density = 0.0;
    double max = 0.0;
    double argmax = 0.0;
    bool argmax_is_left_limit = false;
    double reference = 0.0;
    std::size_t points = 0;
};

/// (X log X)^{1/4} (log log X)^{(3/4)(2^{4/3} - 1)} for the divisor problem;
/// exponent (3/4)(2^{1/3} - 1) for the circle problem.
double extreme_reference(double X, ErrorFamily family);

/// Max of the exact remainder over grid points X + j/density in [X, 2X],
/// plus both one-sided values at every integer jump.
ExtremeScan extreme_scan(double X, double density, ErrorFamily family);

}  // namespace etlab
