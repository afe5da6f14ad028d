#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etlab/double_double.hpp"

namespace etlab {

/// The three Voronoi/Atkinson-type series: Delta(t), P(t) and E(t).
enum class Family { divisor, circle, zeta2 };

std::string_view to_string(Family family) noexcept;
Family parse_family(std::string_view name);

/// Amplitude c0, frequency alpha0 and phase beta0 of
///   c0 sum_n mu(n)^2 n^{-3/4} sum_r a_{nr^2} kappa(nr^2) r^{-3/2} cos(2 pi alpha0 r sqrt(nt) + beta0).
struct FamilyConstants {
    double amplitude;
    DoubleDouble frequency;
    double phase;
};

FamilyConstants family_constants(Family family);

/// kappa(m) times the sign weight a_m: d(m) (divisor), r(m) (circle),
/// (-1)^m d(m) (zeta2).
double arithmetic_weight(Family family, std::uint64_t m);

/// One squarefree kernel n with its harmonic coefficients:
/// coefficients[r - 1] multiplies cos(2 pi r theta_n + beta0).
struct CosineKernel {
    std::uint64_t kernel = 1;
    std::vector<double> coefficients;
};

/// A finite cosine series grouped by squarefree kernel. The same object
/// describes a truncated deterministic series (theta_n = alpha0 sqrt(nt))
/// and the matching random model (theta_n uniform on [0,1], independent).
class CosineSeries {
  public:
    CosineSeries() = default;
    CosineSeries(DoubleDouble frequency, double phase, std::vector<CosineKernel> kernels);

    const std::vector<CosineKernel>& kernels() const noexcept { return kernels_; }
    DoubleDouble frequency() const noexcept { return frequency_; }
    double phase() const noexcept { return phase_; }

    bool empty() const noexcept { return kernels_.empty(); }
    std::size_t term_count() const noexcept { return term_count_; }
    std::size_t max_harmonic() const noexcept { return max_harmonic_; }

    /// Sum of |coefficients|; a sup-norm bound for every evaluation.
    double l1_norm() const noexcept { return l1_; }
    /// Exact variance of the random model, (1/2) sum of squared coefficients.
    double variance() const noexcept { return variance_; }

  private:
    DoubleDouble frequency_{2.0};
    double phase_ = 0.0;
    std::vector<CosineKernel> kernels_;
    std::size_t term_count_ = 0;
    std::size_t max_harmonic_ = 0;
    double l1_ = 0.0;
    double variance_ = 0.0;
};

/// Truncated series F_N / P_N / E_N.
///   divisor: squarefree n <= N, r <= N
///   circle:  squarefree n <= N, q <= inner_limit (default N)
///   zeta2:   squarefree n <= N, n r^2 <= N^4
struct SeriesSpec {
    Family family = Family::divisor;
    std::uint64_t kernel_limit = 0;
    std::optional<std::uint64_t> inner_limit;
};

CosineSeries build_series(const SeriesSpec& spec);

/// Truncated random model: squarefree n <= kernel_limit, r <= inner_limit,
/// with the family's amplitude, phase and weights.
struct ModelSpec {
    Family family = Family::divisor;
    std::uint64_t kernel_limit = 0;
    std::uint64_t inner_limit = 1;
};

CosineSeries build_model(const ModelSpec& spec);

/// sum_{n_begin <= n < n_end} mu(n)^2 n^{-3/4} sum_{q <= L} a kappa(nq^2) q^{-3/2} cos(2 pi q X_n + beta0)
/// with unit amplitude.
CosineSeries amplitude_free_series(Family family, std::uint64_t n_begin, std::uint64_t n_end,
                                   std::uint64_t inner_limit);

/// sum_{m <= M} a_m cos(2 pi alpha0 sqrt(mt) + beta0), regrouped by m = n r^2.
/// weights[m - 1] holds a_m.
CosineSeries series_from_weights(std::span<const double> weights, DoubleDouble frequency, double phase);

/// sum_{n_begin <= n < n_end} n^{-3/2} sum_{q_begin <= q < q_end} kappa(n q^2)^2 q^{-3}
/// over all n, or squarefree n only.
double weighted_square_sum(Family family, std::uint64_t n_begin, std::uint64_t n_end, std::uint64_t q_begin,
                           std::uint64_t q_end, bool squarefree_only);

/// RMS size of the part of the family's model dropped by capping the inner
/// index at inner_limit (kernels n <= kernel_limit). Summed to 64x the
/// limit, so it is an estimate, not a bound.
double inner_tail_rms(Family family, std::uint64_t kernel_limit, std::uint64_t inner_limit);

namespace detail {

inline constexpr std::size_t block_size = 64;

/// out[b] += Re(e^{i beta} sum_r c_r e^{2 pi i r theta[b]}) for b < count <= block_size.
void accumulate_harmonics(std::span<const double> coefficients, double cos_beta, double sin_beta,
                          const double* theta, double* out, std::size_t count) noexcept;

}  // namespace detail

}  // namespace etlab
