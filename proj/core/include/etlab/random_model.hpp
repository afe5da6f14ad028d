#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "etlab/cosine_series.hpp"
#include "etlab/rng.hpp"

namespace etlab {

struct SampleBatch {
    ModelSpec model;
    std::uint64_t seed = 0;
    std::vector<double> values;

    std::size_t count() const noexcept { return values.size(); }
};

/// Sample i uses theta_n = U(seed, index = first_index + i, lane = n); values
/// depend only on (series, seed, index).
std::vector<double> sample_series(const CosineSeries& series, std::uint64_t seed, std::uint64_t first_index,
                                  std::size_t count, unsigned workers = 0);

SampleBatch sample(const ModelSpec& model, std::size_t count, std::uint64_t seed, unsigned workers = 0);

enum class MomentMethod { exact, monte_carlo };
std::string_view to_string(MomentMethod m) noexcept;

struct MomentValue {
    unsigned order = 0;
    double value = 0.0;
    MomentMethod method = MomentMethod::exact;
    /// 0 for exact values; 95% half-width for Monte Carlo.
    double error_bound = 0.0;
    double std_error = 0.0;
};

/// Work units (kernel polynomial products) allowed in exact_moment.
inline constexpr double default_moment_budget = 2e9;

/// Exact E[Y^k] for Y = sum of independent kernel blocks. Each block is a
/// Laurent polynomial in z = e(X_n); its constant term gives the block
/// moments, which are then combined binomially.
MomentValue exact_moment(const CosineSeries& series, unsigned k, double budget = default_moment_budget);
MomentValue exact_moment(const ModelSpec& model, unsigned k, double budget = default_moment_budget);

/// Plain sample moment (1/n) sum v^k with its standard error.
MomentValue sample_moment(std::span<const double> values, unsigned k);

/// c0^2/2 * sum_{m squarefree <= kernel_limit} m^{-3/2} sum_{r <= L} kappa(m r^2)^2 / r^3.
MomentValue variance_closed_form(Family family, std::uint64_t kernel_limit, std::uint64_t inner_limit);

/// Variance of the untruncated model, from zeta and Dirichlet-beta values.
double full_variance(Family family);

/// k! (sum_{N <= n < M} n^{-3/2} sum_{q <= L} kappa(n q^2)^2 / q^3)^k, an upper bound
/// for the 2k-th moment of the amplitude-free series on [N, M).
double moment_upper_bound(Family family, std::uint64_t N, std::uint64_t M, std::uint64_t L, unsigned k);

struct TailEstimate {
    double threshold = 0.0;
    double probability = 0.0;
    double std_error = 0.0;
    double half_width = 0.0;  // 1.96 std_error
    std::size_t count = 0;
};

TailEstimate tail_from_samples(std::span<const double> values, double V);
TailEstimate tail_mc(const ModelSpec& model, double V, std::size_t count, std::uint64_t seed, unsigned workers = 0);

struct TransformOptions {
    double relative_tolerance = 1e-12;
    /// Grid has 64 * 2^level points; refinement stops with a precision
    /// error beyond this level.
    unsigned max_level = 14;
    double lambda_cap = 64.0;
};

/// Laplace and characteristic transforms of a model as products of
/// one-dimensional periodic integrals, each by trapezoid rule on doubling
/// grids. Kernel values on the grids are cached across calls.
class TransformEngine {
  public:
    explicit TransformEngine(CosineSeries series, TransformOptions options = {});
    ~TransformEngine();
    TransformEngine(TransformEngine&&) noexcept;
    TransformEngine& operator=(TransformEngine&&) noexcept;

    const CosineSeries& series() const noexcept;

    double log_laplace(double lambda);
    double laplace(double lambda);
    std::complex<double> char_fn(double alpha);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct TransformReport {
    double lambda = 0.0;
    double value = 0.0;
    double log_value = 0.0;
    /// Variance of the part of the full model left out by the truncation.
    double tail_variance = 0.0;
};

TransformReport laplace_report(const ModelSpec& model, double lambda, TransformOptions options = {});
double laplace(const ModelSpec& model, double lambda, TransformOptions options = {});
std::complex<double> char_fn(const ModelSpec& model, double alpha, TransformOptions options = {});

}  // namespace etlab
