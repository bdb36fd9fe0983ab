#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "tri/quadrature.hpp"

/// The six constrained random-triangle models.
///
/// Side densities are over (a, b) for M1, M2, M6 and over (a, c) for M3, M4,
/// M5. Angle densities are over (alpha, beta) on the simplex x, y > 0, x + y < pi.
namespace tri {

enum class ModelId {
  m1_perimeter,            ///< a + b + c = 1, stick broken twice
  m2_quadratic_stick,      ///< a^2 + b^2 + c^2 = 1, stick broken twice
  m3_two_piece,            ///< a + b = 1, gamma uniform on [0, pi]
  m4_quadratic_two_piece,  ///< a^2 + b^2 = 1 (stick), gamma uniform
  m5_quarter_circle,       ///< (a, b) uniform in angle on the quarter circle, gamma uniform
  m6_eighth_sphere,        ///< (a, b, c) from uniform spherical angles on the eighth sphere
};

inline constexpr std::array<ModelId, 6> all_models = {
    ModelId::m1_perimeter,           ModelId::m2_quadratic_stick, ModelId::m3_two_piece,
    ModelId::m4_quadratic_two_piece, ModelId::m5_quarter_circle,  ModelId::m6_eighth_sphere};

/// "m1" ... "m6".
std::string_view model_key(ModelId model);
std::string_view model_description(ModelId model);
std::optional<ModelId> parse_model(std::string_view key);

enum class Variable { side_a, side_c, angle_alpha };

/// "a", "c", "alpha".
std::string_view variable_key(Variable v);
std::optional<Variable> parse_variable(std::string_view key);

/// Scalar functionals whose expectations form the moment tables.
enum class Functional { a, a2, ab, c, c2, ac, alpha, alpha2, alphabeta };

inline constexpr std::array<Functional, 9> all_functionals = {
    Functional::a,  Functional::a2,    Functional::ab,     Functional::c,        Functional::c2,
    Functional::ac, Functional::alpha, Functional::alpha2, Functional::alphabeta};

/// "E_a", "E_a2", ..., matching the constant-table key suffixes.
std::string_view functional_key(Functional f);
std::optional<Functional> parse_functional(std::string_view key);

/// Functionals listed in the model's moment table.
std::vector<Functional> table_functionals(ModelId model);

struct Sides {
  double a, b, c;
};

struct Angles {
  double alpha, beta, gamma;
};

struct TriangleSample {
  double a, b, c;
  double alpha, beta, gamma;  ///< opposite a, b, c
};

double evaluate(Functional f, const TriangleSample& t);

/// The two uniform variates consumed by one trial of a model's construction.
struct LatentDraw {
  ModelId model;
  double u1;
  double u2;
};

/// One trial of the model's construction; nullopt when the pieces do not
/// form a triangle. Throws std::domain_error if u1 or u2 is outside (0, 1).
std::optional<TriangleSample> realize(const LatentDraw& latent);

inline constexpr int max_rejection_trials = 10'000;

/// Rejection loop around realize. `uniform()` must return doubles in (0, 1).
template <class UniformSource>
TriangleSample sample(ModelId model, UniformSource& uniform) {
  for (int trial = 0; trial < max_rejection_trials; ++trial) {
    const double u1 = uniform();
    const double u2 = uniform();
    if (auto t = realize({model, u1, u2})) return *t;
  }
  throw std::logic_error("sample: rejection cap exceeded");
}

/// Angles opposite a, b, c. Uses atan2 of the (Kahan) Heron area against the
/// law-of-cosines numerator, which stays accurate for needle-like triangles.
/// Throws std::domain_error unless the strict triangle inequalities hold.
Angles angles_from_sides(double a, double b, double c);

/// Sides on the model's constraint surface with angles alpha, beta.
Sides sides_from_angles(ModelId model, double alpha, double beta);

bool side_support(ModelId model, double x, double y);
double side_density(ModelId model, double x, double y);
double angle_density(ModelId model, double x, double y);

bool has_univariate(ModelId model, Variable v);
/// Open support interval of a univariate marginal.
std::pair<double, double> support_interval(ModelId model, Variable v);

/// Closed-form univariate density; M6 angle_alpha is integrated numerically.
/// Throws std::invalid_argument for pairs without a marginal.
double univariate_density(ModelId model, Variable v, double x);

/// univariate_density taking the distance to the support walls from the
/// abscissa, for quadrature that reaches full accuracy at inverse-sqrt walls.
quad::GapIntegrand univariate_kernel(ModelId model, Variable v);

/// Interior points where the univariate density is unbounded (M5 side c at 1).
std::vector<double> univariate_singular_points(ModelId model, Variable v);

/// Marginal obtained by integrating the bivariate density over the other variable.
double marginal_density(ModelId model, Variable v, double x, const quad::IntegrationSpec& spec = {});

bool is_obtuse(const TriangleSample& t);
double acceptance_probability(ModelId model);

/// The angle omega(a) of the eighth-sphere side density, 0 < a < sqrt(2/3).
double omega(double a);

/// Integration domains and gap-aware density kernels.
namespace domains {

/// Outer variable a, inner variable b (M1, M2, M6) or c (M3, M4, M5).
quad::Region side_region(ModelId model);
quad::GapIntegrand2D side_kernel(ModelId model);

/// M3, M4, M5 only: outer variable c, inner variable a.
quad::Region side_region_by_c(ModelId model);
quad::GapIntegrand2D side_kernel_by_c(ModelId model);

/// Outer alpha, inner beta on the simplex.
quad::Region angle_region();
/// {alpha > pi/2}, {beta > pi/2}, {alpha + beta < pi/2}.
std::vector<quad::Region> obtuse_angle_regions();
quad::GapIntegrand2D angle_kernel(ModelId model);

}  // namespace domains

}  // namespace tri
