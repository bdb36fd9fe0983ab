#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

/// Adaptive one- and two-dimensional integration.
///
/// Regular pieces use global adaptive Gauss-Kronrod (10/21) bisection. Pieces
/// with a flagged singular endpoint use tanh-sinh on the half adjacent to that
/// endpoint. Integrands may take an Abscissa instead of a bare double: it
/// carries the exact distance of the node to the ends of the piece being
/// integrated, so that factors such as 1/sqrt(1 - x) stay accurate when x
/// rounds to 1.
namespace tri::quad {

enum class Endpoint : unsigned { none = 0, lower = 1, upper = 2, both = 3 };

constexpr Endpoint operator|(Endpoint a, Endpoint b) {
  return static_cast<Endpoint>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}
constexpr bool has(Endpoint set, Endpoint e) {
  return (static_cast<unsigned>(set) & static_cast<unsigned>(e)) != 0;
}

struct IntegrationSpec {
  double absolute_tolerance = 1e-10;
  double relative_tolerance = 1e-10;
  std::size_t max_evaluations = 10'000'000;
  Endpoint singular_endpoints = Endpoint::none;
  /// Interior abscissae where the integrand is singular or not smooth. The
  /// interval is split there and both sides are treated as singular ends.
  std::vector<double> split_points;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

/// A quadrature node together with its exact offsets from the piece bounds.
struct Abscissa {
  double value;
  double lower;
  double upper;
  double lower_gap;  ///< value - lower, accurate even when tiny
  double upper_gap;  ///< upper - value, accurate even when tiny

  static Abscissa plain(double x, double lower, double upper) { return {x, lower, upper, x - lower, upper - x}; }
};

/// |x - point|, taken from the stored gap when point is one of the bounds.
double distance_to(const Abscissa& x, double point);

using Integrand = std::function<double(double)>;
using GapIntegrand = std::function<double(const Abscissa&)>;

/// Throws std::invalid_argument on bad limits or spec, std::domain_error when
/// the integrand is non-finite at an interior node.
QuadratureResult integrate_1d(const GapIntegrand& f, double lower, double upper, const IntegrationSpec& spec = {});
QuadratureResult integrate_1d(const Integrand& f, double lower, double upper, const IntegrationSpec& spec = {});

/// Admissible inner interval of a region at a fixed outer abscissa.
struct Section {
  double lower;
  double upper;
  Endpoint singular = Endpoint::none;
  std::vector<double> split_points = {};
};

/// Region described by exact inner limits: outer variable on [lower, upper],
/// inner variable on section(x). The section receives the outer node with its
/// gaps so that limits such as sqrt(1 - x^2) stay accurate near the ends.
struct Region {
  double lower;
  double upper;
  Endpoint singular = Endpoint::none;
  std::vector<double> split_points = {};
  std::function<std::optional<Section>(const Abscissa& outer)> section;
};

using Integrand2D = std::function<double(double, double)>;
using GapIntegrand2D = std::function<double(const Abscissa& outer, const Abscissa& inner)>;

/// Iterated adaptive integration over a region with exact inner limits.
QuadratureResult integrate_2d(const GapIntegrand2D& f, const Region& region, const IntegrationSpec& spec = {});
QuadratureResult integrate_2d(const Integrand2D& f, const Region& region, const IntegrationSpec& spec = {});

struct Box {
  double x_lower;
  double x_upper;
  double y_lower;
  double y_upper;
};

/// Integration over {inside(x, y)} within a box. Each vertical section of the
/// region must be a single interval; its ends are located by bisection on the
/// predicate and then treated as exact, possibly singular, limits.
QuadratureResult integrate_2d(const Integrand2D& f, const std::function<bool(double, double)>& inside, const Box& box,
                              const IntegrationSpec& spec = {});

}  // namespace tri::quad
