#include "tri/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tri/constants.hpp"
#include "tri/specfun.hpp"

namespace tri {
namespace {

constexpr double pi = std::numbers::pi;
// pi - double(pi)
constexpr double pi_lo = 1.2246467991473532e-16;
constexpr double half_pi = pi / 2;
constexpr double r_half = 0.70710678118654752440;  // sqrt(1/2)
constexpr double sqrt2 = std::numbers::sqrt2;
constexpr double sqrt3 = std::numbers::sqrt3;
const double x_max_quadratic = std::sqrt(2.0 / 3.0);

[[noreturn]] void bad_pair(const char* fn, ModelId m, Variable v) {
  throw std::invalid_argument(std::string(fn) + ": no univariate density for " + std::string(model_key(m)) +
                              " variable " + std::string(variable_key(v)));
}

// sin(x) for x in [0, pi], accurate near pi.
double sin_angle(double x) { return x <= half_pi ? std::sin(x) : std::sin((pi - x) + pi_lo); }

// pi - x - y for x, y >= 0, with the rounding of pi - x recovered exactly.
// `upper_gap` is used instead of fl(pi - x) - y when available.
double third_angle(double x, double y, const double* upper_gap = nullptr) {
  const double s = pi - x;
  const double err = (pi - s) - x;  // exact: pi - x = s - err
  const double d = upper_gap ? *upper_gap : s - y;
  return (d - err) + pi_lo;
}

// Strict triangle inequality, tested on sorted sides as c - (a - b) > 0.
bool strict_triangle(double a, double b, double c) {
  if (!(a > 0 && b > 0 && c > 0) || !std::isfinite(a + b + c)) return false;
  double s[3] = {a, b, c};
  std::sort(s, s + 3, std::greater<>());
  return s[2] - (s[0] - s[1]) > 0;
}

// Third side from the law of cosines, c^2 = (a - b)^2 + 4ab sin^2(gamma/2).
double third_side(double a, double b, double gamma) {
  const double h = std::sin(0.5 * gamma);
  const double d = a - b;
  return std::sqrt(d * d + 4 * a * b * h * h);
}

// --- model-specific pieces shared by densities, regions and kernels ---

// Section of the quadratic-sum supports (M2, M6) at outer a:
// |s - a|/2 < b < (a + s)/2 with s = sqrt(2 - 3a^2).
struct QuadraticSection {
  double s, lower, upper;
  double one_minus_2a2;  // 1 - 2a^2
};

QuadraticSection quadratic_section(const quad::Abscissa& x) {
  const double a = x.value;
  // 2 - 3a^2, from the gap to sqrt(2/3) when the node sits near it.
  double t;
  if (x_max_quadratic - a < 0.25) {
    const double g = quad::distance_to(x, x_max_quadratic);
    t = 3 * g * (x_max_quadratic + a) + std::fma(-3 * x_max_quadratic, x_max_quadratic, 2.0);
  } else {
    t = std::fma(-3 * a, a, 2.0);
  }
  const double s = std::sqrt(std::max(t, 0.0));
  const double q = std::fma(-2 * a, a, 1.0);
  // s - a = 2(1 - 2a^2)/(s + a)
  const double lower = std::abs(q) / (s + a);
  return {s, lower, 0.5 * (a + s), q};
}

// Section of the (a, c) supports of M4 and M5 at outer a: |a - b| < c < a + b.
struct CircleSection {
  double b, lower, upper;
};

CircleSection circle_section(const quad::Abscissa& x) {
  const double a = x.value;
  const double one_minus_a = a > 0.5 ? quad::distance_to(x, 1.0) : 1 - a;
  const double b = std::sqrt(one_minus_a * (1 + a));
  const double lower = std::abs(std::fma(2 * a, a, -1.0)) / (a + b);
  return {b, lower, a + b};
}

// Section of the (a, c) supports of M4 and M5 at outer c, in the variable a:
// sqrt(u_lo) < a < sqrt(u_hi) with u_lo + u_hi = 1.
struct CircleSectionByC {
  double u_lo, lower, upper;
  double one_minus_upper;  // 1 - sqrt(u_hi)
};

CircleSectionByC circle_section_by_c(const quad::Abscissa& c) {
  const double y = c.value;
  const double g = quad::distance_to(c, 1.0);
  const double one_minus_y = y < 1 ? g : -g;
  const double q = one_minus_y * (1 + y);            // 1 - c^2
  const double root = y * std::sqrt(std::max(std::fma(-y, y, 2.0), 0.0));  // sqrt(1 - q^2)
  const double u_lo = q * q / (2 * (1 + root));
  const double upper = std::sqrt(1 - u_lo);
  return {u_lo, std::sqrt(u_lo), upper, u_lo / (1 + upper)};
}

// Section of the M3 support at outer c: (1 - c)/2 < a < (1 + c)/2.
struct TwoPieceSectionByC {
  double lower, upper, one_minus_c;
};

TwoPieceSectionByC two_piece_section_by_c(const quad::Abscissa& c) {
  const double g = c.value > 0.5 ? quad::distance_to(c, 1.0) : 1 - c.value;
  return {0.5 * g, 0.5 * (1 + c.value), g};
}

// --- univariate angle densities, rewritten to avoid cancellation ---

double m1_angle(double alpha) {
  // s = cos^2(alpha/2), L = -2 ln sin(alpha/2).
  const double c = std::cos(0.5 * alpha);
  const double s = c * c;
  const double sa = std::sin(alpha);
  if (s >= 0.5) {
    const double L = -2 * std::log(std::sin(0.5 * alpha));
    return sa / (s * s * s) * ((2 - s) * L - 2 * s);
  }
  // sum_{n>=3} (n-2)/(n(n-1)) s^(n-3)
  double sum = 0, pw = 1;
  for (int n = 3; n < 200; ++n) {
    const double term = (n - 2.0) / (n * (n - 1.0)) * pw;
    sum += term;
    if (term < 1e-18 * sum) break;
    pw *= s;
  }
  return sa * sum;
}

double m2_angle(double alpha) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  const double w = 4 - c * c;
  return 6 * sqrt3 / pi * (2 + c * c) * s / std::pow(w, 2.5) * (half_pi + std::asin(c / 2)) +
         9 * sqrt3 / pi * c * s / (w * w);
}

double m3_angle(double alpha) {
  const double c = std::cos(alpha);
  if (std::abs(c) >= 0.5) {
    const double h = std::sin(0.5 * alpha);
    return -(std::log(2 * h * h) + c) / (pi * c * c);
  }
  // -ln(1 - c) - c = sum_{n>=2} c^n / n
  double sum = 0, pw = 1;
  for (int n = 2; n < 200; ++n) {
    const double term = pw / n;
    sum += term;
    if (std::abs(term) < 1e-18 * sum) break;
    pw *= c;
  }
  return sum / pi;
}

double m4_angle(double alpha) {
  const double c = std::cos(alpha);
  const double w = 2 - c * c;
  return c / (pi * w * std::sqrt(w)) * (half_pi + std::asin(c / sqrt2)) + 1 / (pi * w);
}

double m5_angle(double alpha) {
  const double c = std::cos(alpha);
  const double r = std::sqrt(2 - c * c);
  const double h = std::sin(0.5 * alpha);
  // (2-c+r)/(2-c-r) = (2-c+r)^2 / (2(1-c)^2), 1 - c = 2 sin^2(alpha/2)
  const double log_ratio = 2 * std::log((2 - c + r) / (sqrt2 * 2 * h * h));
  return 1 / (2 * pi) + c / (pi * pi * r) * log_ratio;
}

// omega for signed a, via atan2 of numerator and the exact complementary leg.
double omega_signed(double a) {
  const double m = std::abs(a);
  const double s = std::sqrt(std::fma(-3 * m, m, 2.0));
  const double q = std::fma(-2 * m, m, 1.0);  // 1 - 2a^2
  if (a >= 0) {
    // leg = sqrt(2) a |1 - 2a^2| / sqrt(1 - a^2 + a s)
    const double leg = sqrt2 * m * std::abs(q) / std::sqrt(1 - m * m + m * s);
    return std::atan2(m + s, leg);
  }
  // numerator s - a = 2(1 - 2a^2)/(s + a); leg = a sqrt(2(1 - a^2 + a s))
  const double num = 2 * q / (s + m);
  const double leg = m * std::sqrt(2 * (1 - m * m + m * s));
  return std::atan2(num, leg);
}

double m6_side_a(double a) {
  // Both F terms grow like ln(1/a) and their difference is O(a); integrate
  // the bivariate density directly where the cancellation would show.
  if (a < 1e-3) return marginal_density(ModelId::m6_eighth_sphere, Variable::side_a, a);
  const double k = std::sqrt((1 - a) * (1 + a));
  const double w1 = omega_signed(a);
  const double w2 = std::abs(omega_signed(-a));
  return constants::c_normalizer_m6() * (specfun::ellip_f(std::min(w1, half_pi), k) - specfun::ellip_f(w2, k));
}

}  // namespace

std::string_view model_key(ModelId model) {
  switch (model) {
    case ModelId::m1_perimeter: return "m1";
    case ModelId::m2_quadratic_stick: return "m2";
    case ModelId::m3_two_piece: return "m3";
    case ModelId::m4_quadratic_two_piece: return "m4";
    case ModelId::m5_quarter_circle: return "m5";
    case ModelId::m6_eighth_sphere: return "m6";
  }
  return "?";
}

std::string_view model_description(ModelId model) {
  switch (model) {
    case ModelId::m1_perimeter: return "a+b+c=1, stick broken in two places";
    case ModelId::m2_quadratic_stick: return "a^2+b^2+c^2=1, pieces of a broken stick are squares";
    case ModelId::m3_two_piece: return "a+b=1, gamma uniform on [0,pi]";
    case ModelId::m4_quadratic_two_piece: return "a^2+b^2=1 from a broken stick, gamma uniform";
    case ModelId::m5_quarter_circle: return "(a,b) on the quarter circle, theta uniform, gamma uniform";
    case ModelId::m6_eighth_sphere: return "(a,b,c) on the eighth sphere, phi and psi uniform";
  }
  return "?";
}

std::optional<ModelId> parse_model(std::string_view key) {
  for (ModelId m : all_models)
    if (model_key(m) == key) return m;
  return std::nullopt;
}

std::string_view variable_key(Variable v) {
  switch (v) {
    case Variable::side_a: return "a";
    case Variable::side_c: return "c";
    case Variable::angle_alpha: return "alpha";
  }
  return "?";
}

std::optional<Variable> parse_variable(std::string_view key) {
  for (Variable v : {Variable::side_a, Variable::side_c, Variable::angle_alpha})
    if (variable_key(v) == key) return v;
  return std::nullopt;
}

std::string_view functional_key(Functional f) {
  switch (f) {
    case Functional::a: return "E_a";
    case Functional::a2: return "E_a2";
    case Functional::ab: return "E_ab";
    case Functional::c: return "E_c";
    case Functional::c2: return "E_c2";
    case Functional::ac: return "E_ac";
    case Functional::alpha: return "E_alpha";
    case Functional::alpha2: return "E_alpha2";
    case Functional::alphabeta: return "E_alphabeta";
  }
  return "?";
}

std::optional<Functional> parse_functional(std::string_view key) {
  for (Functional f : all_functionals)
    if (functional_key(f) == key) return f;
  return std::nullopt;
}

std::vector<Functional> table_functionals(ModelId model) {
  switch (model) {
    case ModelId::m1_perimeter:
    case ModelId::m2_quadratic_stick:
    case ModelId::m6_eighth_sphere:
      return {Functional::a, Functional::a2, Functional::ab, Functional::alpha, Functional::alpha2,
              Functional::alphabeta};
    default:
      return {Functional::a,     Functional::a2,     Functional::c,        Functional::c2,
              Functional::ac,    Functional::alpha,  Functional::alpha2,   Functional::alphabeta};
  }
}

double evaluate(Functional f, const TriangleSample& t) {
  switch (f) {
    case Functional::a: return t.a;
    case Functional::a2: return t.a * t.a;
    case Functional::ab: return t.a * t.b;
    case Functional::c: return t.c;
    case Functional::c2: return t.c * t.c;
    case Functional::ac: return t.a * t.c;
    case Functional::alpha: return t.alpha;
    case Functional::alpha2: return t.alpha * t.alpha;
    case Functional::alphabeta: return t.alpha * t.beta;
  }
  return 0;
}

std::optional<TriangleSample> realize(const LatentDraw& latent) {
  const double u1 = latent.u1, u2 = latent.u2;
  if (!(u1 > 0 && u1 < 1 && u2 > 0 && u2 < 1)) throw std::domain_error("realize: latent variates must lie in (0, 1)");

  double a = 0, b = 0, c = 0;
  switch (latent.model) {
    case ModelId::m1_perimeter:
    case ModelId::m2_quadratic_stick: {
      const double lo = std::min(u1, u2), hi = std::max(u1, u2);
      a = lo;
      b = hi - lo;
      c = 1 - hi;
      if (latent.model == ModelId::m2_quadratic_stick) {
        a = std::sqrt(a);
        b = std::sqrt(b);
        c = std::sqrt(c);
      }
      break;
    }
    case ModelId::m3_two_piece:
      a = u1;
      b = 1 - u1;
      c = third_side(a, b, pi * u2);
      break;
    case ModelId::m4_quadratic_two_piece:
      a = std::sqrt(u1);
      b = std::sqrt(1 - u1);
      c = third_side(a, b, pi * u2);
      break;
    case ModelId::m5_quarter_circle: {
      const double theta = half_pi * u1;
      a = std::cos(theta);
      b = std::sin(theta);
      c = third_side(a, b, pi * u2);
      break;
    }
    case ModelId::m6_eighth_sphere: {
      const double phi = half_pi * u1, psi = half_pi * u2;
      a = std::sin(phi) * std::cos(psi);
      b = std::sin(phi) * std::sin(psi);
      c = std::cos(phi);
      break;
    }
  }
  if (!strict_triangle(a, b, c)) return std::nullopt;
  const Angles ang = angles_from_sides(a, b, c);
  return TriangleSample{a, b, c, ang.alpha, ang.beta, ang.gamma};
}

Angles angles_from_sides(double a, double b, double c) {
  if (!strict_triangle(a, b, c)) throw std::domain_error("angles_from_sides: sides violate the triangle inequality");
  double s[3] = {a, b, c};
  std::sort(s, s + 3, std::greater<>());
  // 4 * area, Kahan's arrangement of Heron's formula.
  const double four_area =
      std::sqrt((s[0] + (s[1] + s[2])) * (s[2] - (s[0] - s[1])) * (s[2] + (s[0] - s[1])) * (s[0] + (s[1] - s[2])));
  // y^2 + z^2 - x^2 as (y - x)(y + x) + z^2 with y the larger of y, z.
  auto angle = [four_area](double x, double y, double z) {
    if (y < z) std::swap(y, z);
    return std::atan2(four_area, (y - x) * (y + x) + z * z);
  };
  return {angle(a, b, c), angle(b, c, a), angle(c, a, b)};
}

Sides sides_from_angles(ModelId model, double alpha, double beta) {
  if (!(alpha > 0 && beta > 0 && alpha + beta < pi) || !std::isfinite(alpha + beta))
    throw std::domain_error("sides_from_angles: angles outside the simplex");
  // sin(gamma) = sin(alpha + beta); the sum is exact enough when gamma is obtuse.
  const double sum = alpha + beta;
  const double sa = sin_angle(alpha), sb = sin_angle(beta);
  const double sg = sum <= half_pi ? std::sin(sum) : std::sin(third_angle(alpha, beta));
  double d = 1;
  switch (model) {
    case ModelId::m1_perimeter: d = sa + sb + sg; break;
    case ModelId::m2_quadratic_stick:
    case ModelId::m6_eighth_sphere: d = std::sqrt(sa * sa + sb * sb + sg * sg); break;
    case ModelId::m3_two_piece: d = sa + sb; break;
    case ModelId::m4_quadratic_two_piece:
    case ModelId::m5_quarter_circle: d = std::sqrt(sa * sa + sb * sb); break;
  }
  return {sa / d, sb / d, sg / d};
}

bool side_support(ModelId model, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) return false;
  switch (model) {
    case ModelId::m1_perimeter: return x > 0 && x < 0.5 && y > 0 && y < 0.5 && x + y > 0.5;
    case ModelId::m2_quadratic_stick:
    case ModelId::m6_eighth_sphere: {
      if (!(x > 0 && y > 0)) return false;
      const double w = 1 - x * x - y * y;
      if (!(w > 0)) return false;
      const double c = std::sqrt(w);
      return std::abs(x - y) < c && c < x + y;
    }
    case ModelId::m3_two_piece: return std::abs(2 * x - 1) < y && y < 1;
    case ModelId::m4_quadratic_two_piece:
    case ModelId::m5_quarter_circle: {
      if (!(x > 0 && x < 1)) return false;
      const double b = std::sqrt((1 - x) * (1 + x));
      return std::abs(x - b) < y && y < x + b;
    }
  }
  return false;
}

double side_density(ModelId model, double x, double y) {
  if (!side_support(model, x, y)) return 0.0;
  switch (model) {
    case ModelId::m1_perimeter: return 8.0;
    case ModelId::m2_quadratic_stick: return 24 * sqrt3 / pi * x * y;
    case ModelId::m6_eighth_sphere:
      return constants::c_normalizer_m6() / (std::hypot(x, y) * std::sqrt(1 - x * x - y * y));
    case ModelId::m3_two_piece: {
      // 4x(1-x) - (1-y^2) = (y - |2x-1|)(y + |2x-1|)
      const double lo = std::abs(2 * x - 1);
      return 2 / pi * y / (std::sqrt((1 - y) * (1 + y)) * std::sqrt((y - lo) * (y + lo)));
    }
    case ModelId::m4_quadratic_two_piece:
    case ModelId::m5_quarter_circle: {
      const double b = std::sqrt((1 - x) * (1 + x));
      const double lo = std::abs(std::fma(2 * x, x, -1.0)) / (x + b), hi = x + b;
      const double d = (y - lo) * (y + lo) * (hi - y) * (hi + y);
      if (model == ModelId::m4_quadratic_two_piece) return 4 / pi * x * y / std::sqrt(d);
      return 4 / (pi * pi) * y / (b * std::sqrt(d));
    }
  }
  return 0.0;
}

namespace {

struct AngleSines {
  double sx, sy, sxy;
};

AngleSines angle_sines(const quad::Abscissa& x, const quad::Abscissa& y) {
  const double s = pi - x.value;
  const double* gap = (y.upper == s) ? &y.upper_gap : nullptr;
  const double g = third_angle(x.value, y.value, gap);
  double sx;
  if (x.value <= half_pi) {
    sx = std::sin(x.value);
  } else {
    sx = std::sin(quad::distance_to(x, pi) + pi_lo);
  }
  // sin(beta) = sin(gamma + alpha) when beta is past pi/2
  const double sy = y.value <= half_pi ? std::sin(y.value) : std::sin(g + x.value);
  return {sx, sy, std::sin(g)};
}

double angle_formula(ModelId model, const AngleSines& t) {
  const double sx = t.sx, sy = t.sy, sxy = t.sxy;
  switch (model) {
    case ModelId::m1_perimeter: {
      const double d = sx + sy + sxy;
      return 8 * sx * sy * sxy / (d * d * d);
    }
    case ModelId::m2_quadratic_stick: {
      const double d = sx * sx + sy * sy + sxy * sxy;
      const double p = sx * sy * sxy;
      return 24 * sqrt3 / pi * p * p / (d * d * d);
    }
    case ModelId::m3_two_piece: {
      const double d = sx + sy;
      return sxy / (pi * d * d);
    }
    case ModelId::m4_quadratic_two_piece: {
      const double d = sx * sx + sy * sy;
      return 2 / pi * sx * sy * sxy / (d * d);
    }
    case ModelId::m5_quarter_circle: return 2 / (pi * pi) * sxy / (sx * sx + sy * sy);
    case ModelId::m6_eighth_sphere: {
      const double d2 = sx * sx + sy * sy;
      return constants::c_normalizer_m6() * sx * sy * sxy / ((d2 + sxy * sxy) * std::sqrt(d2));
    }
  }
  return 0.0;
}

}  // namespace

double angle_density(ModelId model, double x, double y) {
  if (!(x > 0 && y > 0 && x + y < pi) || !std::isfinite(x + y)) return 0.0;
  const double g = third_angle(x, y);
  if (!(g > 0)) return 0.0;
  const AngleSines t{sin_angle(x), sin_angle(y), std::sin(g)};
  return angle_formula(model, t);
}

bool has_univariate(ModelId model, Variable v) {
  if (v != Variable::side_c) return true;
  return model == ModelId::m3_two_piece || model == ModelId::m4_quadratic_two_piece ||
         model == ModelId::m5_quarter_circle;
}

std::pair<double, double> support_interval(ModelId model, Variable v) {
  if (!has_univariate(model, v)) bad_pair("support_interval", model, v);
  if (v == Variable::angle_alpha) return {0.0, pi};
  if (v == Variable::side_c) return {0.0, model == ModelId::m3_two_piece ? 1.0 : sqrt2};
  switch (model) {
    case ModelId::m1_perimeter: return {0.0, 0.5};
    case ModelId::m2_quadratic_stick:
    case ModelId::m6_eighth_sphere: return {0.0, x_max_quadratic};
    default: return {0.0, 1.0};
  }
}

double univariate_density(ModelId model, Variable v, double x) {
  const auto [lo, hi] = support_interval(model, v);
  if (!(x > lo && x < hi)) return 0.0;
  if (v == Variable::angle_alpha) {
    switch (model) {
      case ModelId::m1_perimeter: return m1_angle(x);
      case ModelId::m2_quadratic_stick: return m2_angle(x);
      case ModelId::m3_two_piece: return m3_angle(x);
      case ModelId::m4_quadratic_two_piece: return m4_angle(x);
      case ModelId::m5_quarter_circle: return m5_angle(x);
      case ModelId::m6_eighth_sphere: {
        quad::IntegrationSpec spec;
        spec.absolute_tolerance = 1e-13;
        spec.relative_tolerance = 1e-12;
        return marginal_density(model, v, x, spec);
      }
    }
  }
  if (v == Variable::side_c) {
    switch (model) {
      case ModelId::m3_two_piece: return x / std::sqrt((1 - x) * (1 + x));
      case ModelId::m4_quadratic_two_piece: return x;
      case ModelId::m5_quarter_circle: {
        // K(c sqrt(2 - c^2)) has complementary modulus |1 - c^2|.
        const double kc = std::abs((1 - x) * (1 + x));
        if (kc == 0) return std::numeric_limits<double>::infinity();
        return 4 * x / (pi * pi) * specfun::ellip_kc(std::min(kc, 1.0));
      }
      default: break;
    }
    bad_pair("univariate_density", model, v);
  }
  switch (model) {
    case ModelId::m1_perimeter: return 8 * x;
    case ModelId::m2_quadratic_stick: return 12 * sqrt3 / pi * x * x * std::sqrt(std::fma(-3 * x, x, 2.0));
    case ModelId::m3_two_piece: return 1.0;
    case ModelId::m4_quadratic_two_piece: return 2 * x;
    case ModelId::m5_quarter_circle: return 2 / pi / std::sqrt((1 - x) * (1 + x));
    case ModelId::m6_eighth_sphere: return m6_side_a(x);
  }
  return 0.0;
}

quad::GapIntegrand univariate_kernel(ModelId model, Variable v) {
  support_interval(model, v);  // rejects pairs without a marginal
  if (v == Variable::side_c && model == ModelId::m3_two_piece) {
    return [](const quad::Abscissa& x) { return x.value / std::sqrt(quad::distance_to(x, 1.0) * (1 + x.value)); };
  }
  if (v == Variable::side_c && model == ModelId::m5_quarter_circle) {
    return [](const quad::Abscissa& x) {
      const double kc = quad::distance_to(x, 1.0) * (1 + x.value);
      if (kc == 0) return std::numeric_limits<double>::infinity();
      return 4 * x.value / (pi * pi) * specfun::ellip_kc(std::min(kc, 1.0));
    };
  }
  if (v == Variable::side_a && model == ModelId::m5_quarter_circle) {
    return [](const quad::Abscissa& x) {
      return 2 / pi / std::sqrt(quad::distance_to(x, 1.0) * (1 + x.value));
    };
  }
  return [model, v](const quad::Abscissa& x) { return univariate_density(model, v, x.value); };
}

std::vector<double> univariate_singular_points(ModelId model, Variable v) {
  support_interval(model, v);
  if (model == ModelId::m5_quarter_circle && v == Variable::side_c) return {1.0};
  return {};
}

double marginal_density(ModelId model, Variable v, double x, const quad::IntegrationSpec& spec) {
  const auto [lo, hi] = support_interval(model, v);
  if (!(x > lo && x < hi)) return 0.0;
  quad::Region region;
  quad::GapIntegrand2D kernel;
  if (v == Variable::side_a) {
    region = domains::side_region(model);
    kernel = domains::side_kernel(model);
  } else if (v == Variable::side_c) {
    region = domains::side_region_by_c(model);
    kernel = domains::side_kernel_by_c(model);
  } else {
    region = domains::angle_region();
    kernel = domains::angle_kernel(model);
  }
  const quad::Abscissa outer = quad::Abscissa::plain(x, region.lower, region.upper);
  const auto sec = region.section(outer);
  if (!sec || !(sec->lower < sec->upper)) return 0.0;
  quad::IntegrationSpec inner = spec;
  inner.singular_endpoints = sec->singular;
  inner.split_points = sec->split_points;
  const quad::GapIntegrand f = [&](const quad::Abscissa& y) { return kernel(outer, y); };
  return quad::integrate_1d(f, sec->lower, sec->upper, inner).value;
}

bool is_obtuse(const TriangleSample& t) { return std::max({t.alpha, t.beta, t.gamma}) > half_pi; }

double acceptance_probability(ModelId model) {
  switch (model) {
    case ModelId::m1_perimeter: return 0.25;
    case ModelId::m2_quadratic_stick: return sqrt3 * pi / 9;
    case ModelId::m6_eighth_sphere: return constants::delta_m6();
    default: return 1.0;
  }
}

double omega(double a) {
  if (!(a > 0) || !(3 * a * a < 2)) throw std::domain_error("omega: a must lie in (0, sqrt(2/3))");
  return omega_signed(a);
}

namespace domains {

using quad::Abscissa;
using quad::Endpoint;
using quad::Region;
using quad::Section;

Region side_region(ModelId model) {
  Region r;
  switch (model) {
    case ModelId::m1_perimeter:
      r.lower = 0;
      r.upper = 0.5;
      r.section = [](const Abscissa& x) -> std::optional<Section> { return Section{0.5 - x.value, 0.5}; };
      break;
    case ModelId::m2_quadratic_stick:
    case ModelId::m6_eighth_sphere: {
      r.lower = 0;
      r.upper = x_max_quadratic;
      r.singular = Endpoint::upper;
      r.split_points = {r_half};
      // The M6 density has a square-root wall where the section meets the unit circle.
      const Endpoint inner = model == ModelId::m6_eighth_sphere ? Endpoint::both : Endpoint::none;
      r.section = [inner](const Abscissa& x) -> std::optional<Section> {
        const auto s = quadratic_section(x);
        return Section{s.lower, s.upper, inner};
      };
      break;
    }
    case ModelId::m3_two_piece:
      r.lower = 0;
      r.upper = 1;
      r.split_points = {0.5};
      r.section = [](const Abscissa& x) -> std::optional<Section> {
        return Section{std::abs(2 * x.value - 1), 1.0, Endpoint::both};
      };
      break;
    case ModelId::m4_quadratic_two_piece:
    case ModelId::m5_quarter_circle:
      r.lower = 0;
      r.upper = 1;
      r.split_points = {r_half};
      if (model == ModelId::m5_quarter_circle) r.singular = Endpoint::upper;
      r.section = [](const Abscissa& x) -> std::optional<Section> {
        const auto s = circle_section(x);
        return Section{s.lower, s.upper, Endpoint::both};
      };
      break;
  }
  return r;
}

quad::GapIntegrand2D side_kernel(ModelId model) {
  switch (model) {
    case ModelId::m1_perimeter:
      return [](const Abscissa&, const Abscissa&) { return 8.0; };
    case ModelId::m2_quadratic_stick:
      return [](const Abscissa& x, const Abscissa& y) { return 24 * sqrt3 / pi * x.value * y.value; };
    case ModelId::m6_eighth_sphere: {
      const double cn = constants::c_normalizer_m6();
      return [cn](const Abscissa& x, const Abscissa& y) {
        const auto s = quadratic_section(x);
        const double a = x.value;
        // 1 - a^2 - y^2 = (1 - a^2 - hi^2) + (hi - y)(hi + y), exact in the section variables
        const double w_hi = s.one_minus_2a2 * s.one_minus_2a2 / (2 * (1 - a * a + a * s.s));
        const double w = w_hi + quad::distance_to(y, s.upper) * (s.upper + y.value);
        return cn / (std::hypot(a, y.value) * std::sqrt(w));
      };
    }
    case ModelId::m3_two_piece:
      return [](const Abscissa& x, const Abscissa& y) {
        const double lo = std::abs(2 * x.value - 1);
        const double c = y.value;
        const double one_minus_c = quad::distance_to(y, 1.0);
        return 2 / pi * c /
               (std::sqrt(one_minus_c * (1 + c)) * std::sqrt(quad::distance_to(y, lo) * (c + lo)));
      };
    case ModelId::m4_quadratic_two_piece:
    case ModelId::m5_quarter_circle: {
      const bool circle = model == ModelId::m5_quarter_circle;
      return [circle](const Abscissa& x, const Abscissa& y) {
        const auto s = circle_section(x);
        const double c = y.value;
        const double d = quad::distance_to(y, s.lower) * (c + s.lower) * quad::distance_to(y, s.upper) * (s.upper + c);
        if (!circle) return 4 / pi * x.value * c / std::sqrt(d);
        return 4 / (pi * pi) * c / (s.b * std::sqrt(d));
      };
    }
  }
  return {};
}

Region side_region_by_c(ModelId model) {
  Region r;
  switch (model) {
    case ModelId::m3_two_piece:
      r.lower = 0;
      r.upper = 1;
      r.singular = Endpoint::upper;
      r.section = [](const Abscissa& c) -> std::optional<Section> {
        const auto s = two_piece_section_by_c(c);
        return Section{s.lower, s.upper, Endpoint::both};
      };
      return r;
    case ModelId::m4_quadratic_two_piece:
    case ModelId::m5_quarter_circle:
      r.lower = 0;
      r.upper = sqrt2;
      r.split_points = {1.0};
      r.section = [](const Abscissa& c) -> std::optional<Section> {
        const auto s = circle_section_by_c(c);
        return Section{s.lower, s.upper, Endpoint::both};
      };
      return r;
    default:
      bad_pair("side_region_by_c", model, Variable::side_c);
  }
}

quad::GapIntegrand2D side_kernel_by_c(ModelId model) {
  switch (model) {
    case ModelId::m3_two_piece:
      return [](const Abscissa& c, const Abscissa& a) {
        const auto s = two_piece_section_by_c(c);
        // 4a(1-a) - (1-c^2) = 4(a - lower)(upper - a)
        const double d = 4 * quad::distance_to(a, s.lower) * quad::distance_to(a, s.upper);
        return 2 / pi * c.value / (std::sqrt(s.one_minus_c * (1 + c.value)) * std::sqrt(d));
      };
    case ModelId::m4_quadratic_two_piece:
    case ModelId::m5_quarter_circle: {
      const bool circle = model == ModelId::m5_quarter_circle;
      return [circle](const Abscissa& c, const Abscissa& a) {
        const auto s = circle_section_by_c(c);
        const double x = a.value;
        const double gap_hi = quad::distance_to(a, s.upper);
        // 4a^2(1-a^2) - (1-c^2)^2 = 4(a^2 - u_lo)(u_hi - a^2)
        const double d = 4 * quad::distance_to(a, s.lower) * (x + s.lower) * gap_hi * (s.upper + x);
        if (!circle) return 4 / pi * x * c.value / std::sqrt(d);
        const double one_minus_a = s.one_minus_upper + gap_hi;
        return 4 / (pi * pi) * c.value / (std::sqrt(one_minus_a * (1 + x)) * std::sqrt(d));
      };
    }
    default:
      bad_pair("side_kernel_by_c", model, Variable::side_c);
  }
}

Region angle_region() {
  Region r;
  r.lower = 0;
  r.upper = pi;
  r.singular = Endpoint::both;
  r.section = [](const Abscissa& x) -> std::optional<Section> { return Section{0.0, pi - x.value, Endpoint::both}; };
  return r;
}

std::vector<Region> obtuse_angle_regions() {
  std::vector<Region> parts(3);
  // alpha > pi/2
  parts[0].lower = half_pi;
  parts[0].upper = pi;
  parts[0].singular = Endpoint::both;
  parts[0].section = [](const Abscissa& x) -> std::optional<Section> {
    return Section{0.0, pi - x.value, Endpoint::both};
  };
  // beta > pi/2
  parts[1].lower = 0;
  parts[1].upper = half_pi;
  parts[1].singular = Endpoint::both;
  parts[1].section = [](const Abscissa& x) -> std::optional<Section> {
    return Section{half_pi, pi - x.value, Endpoint::both};
  };
  // gamma > pi/2
  parts[2].lower = 0;
  parts[2].upper = half_pi;
  parts[2].singular = Endpoint::both;
  parts[2].section = [](const Abscissa& x) -> std::optional<Section> {
    return Section{0.0, half_pi - x.value, Endpoint::both};
  };
  return parts;
}

quad::GapIntegrand2D angle_kernel(ModelId model) {
  if (model == ModelId::m6_eighth_sphere) constants::c_normalizer_m6();  // initialise outside the hot loop
  return [model](const Abscissa& x, const Abscissa& y) {
    if (!(y.lower_gap > 0) || !(y.upper_gap > 0)) return 0.0;
    return angle_formula(model, angle_sines(x, y));
  };
}

}  // namespace domains
}  // namespace tri
