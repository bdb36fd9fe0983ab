#pragma once

#include <cstddef>

/// Special functions needed by the constrained-triangle densities and moments.
///
/// Elliptic integrals use the modulus convention: K(k) integrates
/// (1 - k^2 sin^2 t)^(-1/2), never the parameter m = k^2. Every function here is
/// pure and safe to call concurrently. Domain violations throw std::domain_error.
namespace tri::specfun {

/// Carlson's symmetric integral R_F(x, y, z), by duplication. At most one
/// argument may be zero; all must be non-negative.
double carlson_rf(double x, double y, double z);

/// Complete elliptic integral of the first kind, 0 <= k < 1.
double ellip_k(double k);

/// K expressed through the complementary modulus kc = sqrt(1 - k^2), kc in (0, 1].
/// Use this near the logarithmic singularity, where forming 1 - k^2 would cancel.
double ellip_kc(double kc);

/// Complete elliptic integral of the second kind, 0 <= k <= 1.
double ellip_e(double k);

/// E through the complementary modulus, kc in [0, 1].
double ellip_ec(double kc);

/// Incomplete elliptic integral of the first kind F(phi, k) for phi in [0, pi/2].
/// k = 1 is accepted when phi < pi/2, where the integral converges.
double ellip_f(double phi, double k);

/// Real dilogarithm Li2(x) for x <= 1.
double dilog(double x);

/// Gamma function for x > 0 (Lanczos approximation, reflection below 1/2).
double gamma_fn(double x);

struct SeriesOptions {
  std::size_t max_terms = 1'000'000;
  double tolerance = 1e-12;
};

struct SeriesResult {
  double value = 0.0;
  /// Bound (x < 1) or extrapolation-difference estimate (x = 1) of the
  /// neglected tail.
  double tail_estimate = 0.0;
  std::size_t terms = 0;
  bool converged = false;
};

/// 3F2(1/2, 1/2, 3/2; 5/4, 7/4; x) on [0, 1], summed as
///   3/(4 sqrt(2 pi)) * sum_n Gamma(n+1/2)^2 Gamma(n+3/2) / (Gamma(n+5/4) Gamma(n+7/4)) x^n / n!
///
/// At x = 1 the terms decay like n^(-3/2); partial sums at geometrically
/// spaced cut-offs are Richardson-extrapolated in powers n^(-1/2 - j).
SeriesResult hyp3f2_halves(double x, const SeriesOptions& options = {});

}  // namespace tri::specfun
