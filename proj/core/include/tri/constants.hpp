#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tri/models.hpp"
#include "tri/quadrature.hpp"

/// Named constants of the six models: closed forms, integral representations
/// and a reference table of printed values.
namespace tri::constants {

enum class Path : unsigned {
  closed_form = 1,
  quadrature = 2,
  series = 4,
  monte_carlo = 8,
};

constexpr unsigned operator|(Path a, Path b) { return static_cast<unsigned>(a) | static_cast<unsigned>(b); }
constexpr unsigned operator|(unsigned a, Path b) { return a | static_cast<unsigned>(b); }

struct ConstantRecord {
  std::string key;                ///< e.g. "m5.E_c"
  std::optional<ModelId> model;   ///< model the constant belongs to
  std::string reference_value;    ///< printed decimal, or the printed closed form
  unsigned paths = 0;             ///< bit set of Path
  std::string citation;           ///< where the value is stated

  bool has(Path p) const { return (paths & static_cast<unsigned>(p)) != 0; }
  /// True when reference_value is a printed decimal rather than an expression.
  bool is_decimal() const;
  /// Closed form when available, otherwise the parsed decimal.
  double expected() const;
  /// Agreement tolerance for the printed digits: one unit in the last place
  /// for decimals, 1e-7 for closed forms.
  double tolerance() const;
};

const std::vector<ConstantRecord>& reference_table();

/// Throws std::out_of_range for unknown keys.
const ConstantRecord& lookup(std::string_view key);

/// Throws std::out_of_range for unknown keys and std::invalid_argument for
/// keys without a closed form.
double closed_constant(std::string_view key);

/// Quadrature path of a record. Throws std::invalid_argument if none.
quad::QuadratureResult quadrature_constant(std::string_view key, const quad::IntegrationSpec& spec = {});

/// E(g) by 2D quadrature of g times the side or angle density.
quad::QuadratureResult quadrature_moment(ModelId model, Functional f, const quad::IntegrationSpec& spec = {});

/// Probability of an obtuse triangle: angle density over the obtuse region.
quad::QuadratureResult quadrature_obtuse(ModelId model, const quad::IntegrationSpec& spec = {});

enum class EcPath { defining_integral, k_alternate, f32_series, gamma_closed };

/// E(c) for the quarter-circle model by one of four independent routes.
double ec_m5(EcPath path);

/// E(ac) for M4 or M5 from its one-dimensional elliptic-integral representation.
double eac_integral(ModelId model);

/// 1/C of the eighth-sphere density, 2 * int_0^1 atan(x sqrt(1+x^2)) / (1+x^2) dx.
double inv_c_m6();
/// C itself. Computed once and cached.
double c_normalizer_m6();

/// arccos(sqrt(2/3)).
double lambda_m6();
/// Probability that the eighth-sphere construction yields a triangle.
double delta_m6();
/// Delta by 2D quadrature of the triangle region in the (phi, psi) square.
quad::QuadratureResult delta_m6_area(const quad::IntegrationSpec& spec = {});
/// Conditional obtuse probability of M6 from its one-dimensional integral.
double obtuse_m6();

}  // namespace tri::constants
