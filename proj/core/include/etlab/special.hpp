#pragma once

namespace etlab::special {

/// Riemann zeta for real s > 1 via the alternating eta series with
/// Cohen-Villegas-Zagier acceleration.
double zeta(double s);

/// Dirichlet beta(s) = L(s, chi_4) = sum_k (-1)^k (2k+1)^{-s}, s > 0.
double dirichlet_beta(double s);

}  // namespace etlab::special
