#include "tri/constants.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tri/specfun.hpp"

namespace tri::constants {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double sqrt2 = std::numbers::sqrt2;
constexpr double sqrt3 = std::numbers::sqrt3;
constexpr double ln2 = std::numbers::ln2;

constexpr unsigned kClosed = static_cast<unsigned>(Path::closed_form);
constexpr unsigned kQuad = static_cast<unsigned>(Path::quadrature);
constexpr unsigned kSeries = static_cast<unsigned>(Path::series);
constexpr unsigned kMc = static_cast<unsigned>(Path::monte_carlo);

using Closed = std::function<double()>;

const std::map<std::string, Closed, std::less<>>& closed_forms() {
  static const std::map<std::string, Closed, std::less<>> table = {
      {"m1.accept", [] { return 0.25; }},
      {"m1.obtuse", [] { return 9 - 12 * ln2; }},
      {"m1.E_a", [] { return 1.0 / 3; }},
      {"m1.E_a2", [] { return 1.0 / 8; }},
      {"m1.E_ab", [] { return 5.0 / 48; }},
      {"m1.E_alpha", [] { return pi / 3; }},
      {"m1.E_alpha2", [] { return 8.0 / 3 - pi * pi / 9; }},
      {"m1.E_alphabeta", [] { return -4.0 / 3 + 2 * pi * pi / 9; }},

      {"m2.accept", [] { return sqrt3 * pi / 9; }},
      {"m2.obtuse", [] { return 1 - 3 * sqrt3 / (4 * pi); }},
      {"m2.E_a", [] { return 32 * std::sqrt(6.0) / (45 * pi); }},
      {"m2.E_a2", [] { return 1.0 / 3; }},
      {"m2.E_ab", [] { return (9 + sqrt3 * pi) / (9 * sqrt3 * pi); }},
      {"m2.E_alpha", [] { return pi / 3; }},
      {"m2.E_alpha2", [] { return (pi - sqrt3) * pi / 3; }},
      {"m2.E_alphabeta", [] { return sqrt3 * pi / 6; }},

      {"m3.obtuse", [] { return 1.5 - 2 / pi; }},
      {"m3.E_a", [] { return 0.5; }},
      {"m3.E_a2", [] { return 1.0 / 3; }},
      {"m3.E_c", [] { return pi / 4; }},
      {"m3.E_c2", [] { return 2.0 / 3; }},
      {"m3.E_ac", [] { return pi / 8; }},
      {"m3.E_alpha", [] { return pi / 4; }},

      {"m4.obtuse", [] { return 1.5 - 1 / sqrt2; }},
      {"m4.E_a", [] { return 2.0 / 3; }},
      {"m4.E_a2", [] { return 0.5; }},
      {"m4.E_c", [] { return 2 * sqrt2 / 3; }},
      {"m4.E_c2", [] { return 1.0; }},
      {"m4.E_alpha", [] { return pi / 4; }},
      {"m4.E_alpha2", [] { return 5 * pi * pi / 48 + ln2 * ln2 / 4; }},
      {"m4.E_alphabeta", [] { return pi * pi / 16 - ln2 * ln2 / 4; }},

      {"m5.obtuse", [] {
         const double l = std::log(1 + sqrt2);
         return 1 - 2 / (pi * pi) * l * l;
       }},
      {"m5.E_a", [] { return 2 / pi; }},
      {"m5.E_a2", [] { return 0.5; }},
      {"m5.E_c", [] { return ec_m5(EcPath::gamma_closed); }},
      {"m5.E_c2", [] { return 1.0; }},
      {"m5.E_alpha", [] { return pi / 4; }},
  };
  return table;
}

std::vector<ConstantRecord> build_table() {
  using M = ModelId;
  const unsigned cq = kClosed | kQuad | kMc;
  const unsigned q = kQuad | kMc;
  std::vector<ConstantRecord> t = {
      {"m1.accept", M::m1_perimeter, "1/4", cq, "perimeter model: triangle probability"},
      {"m1.obtuse", M::m1_perimeter, "9-12*ln(2)", cq, "perimeter model: obtuse probability"},
      {"m1.E_a", M::m1_perimeter, "1/3", cq, "perimeter model: side moments"},
      {"m1.E_a2", M::m1_perimeter, "1/8", cq, "perimeter model: side moments"},
      {"m1.E_ab", M::m1_perimeter, "5/48", cq, "perimeter model: side moments"},
      {"m1.E_alpha", M::m1_perimeter, "pi/3", cq, "perimeter model: angle moments"},
      {"m1.E_alpha2", M::m1_perimeter, "8/3-pi^2/9", cq, "perimeter model: angle moments"},
      {"m1.E_alphabeta", M::m1_perimeter, "-4/3+2*pi^2/9", cq, "perimeter model: angle moments"},

      {"m2.accept", M::m2_quadratic_stick, "sqrt(3)*pi/9", cq, "quadratic stick: triangle probability"},
      {"m2.obtuse", M::m2_quadratic_stick, "1-3*sqrt(3)/(4*pi)", cq, "quadratic stick: obtuse probability"},
      {"m2.E_a", M::m2_quadratic_stick, "32*sqrt(6)/(45*pi)", cq, "quadratic stick: side moments"},
      {"m2.E_a2", M::m2_quadratic_stick, "1/3", cq, "quadratic stick: side moments"},
      {"m2.E_ab", M::m2_quadratic_stick, "(9+sqrt(3)*pi)/(9*sqrt(3)*pi)", cq, "quadratic stick: side moments"},
      {"m2.E_alpha", M::m2_quadratic_stick, "pi/3", cq, "quadratic stick: angle moments"},
      {"m2.E_alpha2", M::m2_quadratic_stick, "(pi-sqrt(3))*pi/3", cq, "quadratic stick: angle moments"},
      {"m2.E_alphabeta", M::m2_quadratic_stick, "sqrt(3)*pi/6", cq, "quadratic stick: angle moments"},

      {"m3.obtuse", M::m3_two_piece, "3/2-2/pi", cq, "two-piece model: obtuse probability"},
      {"m3.E_a", M::m3_two_piece, "1/2", cq, "two-piece model: side moments"},
      {"m3.E_a2", M::m3_two_piece, "1/3", cq, "two-piece model: side moments"},
      {"m3.E_c", M::m3_two_piece, "pi/4", cq, "two-piece model: side moments"},
      {"m3.E_c2", M::m3_two_piece, "2/3", cq, "two-piece model: side moments"},
      {"m3.E_ac", M::m3_two_piece, "pi/8", cq, "two-piece model: side moments"},
      {"m3.E_alpha", M::m3_two_piece, "pi/4", cq, "two-piece model: angle moments"},
      {"m3.E_alpha2", M::m3_two_piece, "1.3029200473", q, "two-piece model: angle moments (numeric)"},
      {"m3.E_alphabeta", M::m3_two_piece, "0.3420140195", q, "two-piece model: angle moments (numeric)"},

      {"m4.obtuse", M::m4_quadratic_two_piece, "3/2-1/sqrt(2)", cq, "quadratic two-piece: obtuse probability"},
      {"m4.E_a", M::m4_quadratic_two_piece, "2/3", cq, "quadratic two-piece: side moments"},
      {"m4.E_a2", M::m4_quadratic_two_piece, "1/2", cq, "quadratic two-piece: side moments"},
      {"m4.E_c", M::m4_quadratic_two_piece, "2*sqrt(2)/3", cq, "quadratic two-piece: side moments"},
      {"m4.E_c2", M::m4_quadratic_two_piece, "1", cq, "quadratic two-piece: side moments"},
      {"m4.E_ac", M::m4_quadratic_two_piece, "0.6272922529", q,
       "quadratic two-piece: E(ac) as an integral of the complete elliptic integral E"},
      {"m4.E_alpha", M::m4_quadratic_two_piece, "pi/4", cq, "quadratic two-piece: angle moments"},
      {"m4.E_alpha2", M::m4_quadratic_two_piece, "5*pi^2/48+ln(2)^2/4", cq, "quadratic two-piece: angle moments"},
      {"m4.E_alphabeta", M::m4_quadratic_two_piece, "pi^2/16-ln(2)^2/4", cq, "quadratic two-piece: angle moments"},

      {"m5.obtuse", M::m5_quarter_circle, "1-(2/pi^2)*ln(1+sqrt(2))^2", cq, "quarter circle: obtuse probability"},
      {"m5.E_a", M::m5_quarter_circle, "2/pi", cq, "quarter circle: side moments"},
      {"m5.E_a2", M::m5_quarter_circle, "1/2", cq, "quarter circle: side moments"},
      {"m5.E_c", M::m5_quarter_circle, "0.9580913986", cq | kSeries,
       "quarter circle: E(c) by K-integral, 3F2 series and Gamma-function closed form"},
      {"m5.E_c2", M::m5_quarter_circle, "1", cq, "quarter circle: side moments"},
      {"m5.E_ac", M::m5_quarter_circle, "0.6080033617", q,
       "quarter circle: E(ac) as an integral of the complete elliptic integral K"},
      {"m5.E_alpha", M::m5_quarter_circle, "pi/4", cq, "quarter circle: angle moments"},
      {"m5.E_alpha2", M::m5_quarter_circle, "1.2565739217", q, "quarter circle: angle moments (numeric)"},
      {"m5.E_alphabeta", M::m5_quarter_circle, "0.3883601451", q, "quarter circle: angle moments (numeric)"},

      {"m6.accept", M::m6_eighth_sphere, "0.2815898507", q, "eighth sphere: triangle probability Delta"},
      {"m6.obtuse", M::m6_eighth_sphere, "0.6597451305", q, "eighth sphere: conditional obtuse probability"},
      {"m6.E_a", M::m6_eighth_sphere, "0.5361308550", q, "eighth sphere: side moments (numeric)"},
      {"m6.E_a2", M::m6_eighth_sphere, "0.3209403207", q, "eighth sphere: side moments (numeric)"},
      {"m6.E_ab", M::m6_eighth_sphere, "0.2707436816", q, "eighth sphere: side moments (numeric)"},
      {"m6.E_alpha", M::m6_eighth_sphere, "1.0018939715", q, "eighth sphere: angle moments (numeric)"},
      {"m6.E_alpha2", M::m6_eighth_sphere, "1.4360872743", q, "eighth sphere: angle moments (numeric)"},
      {"m6.E_alphabeta", M::m6_eighth_sphere, "0.8093206054", q, "eighth sphere: angle moments (numeric)"},
      {"m6.inv_C", M::m6_eighth_sphere, "0.6947951075", kQuad,
       "eighth sphere: 1/C, real arctan integral (dilogarithm form not evaluated)"},
  };
  return t;
}

struct KeyParts {
  ModelId model;
  std::string_view name;
};

KeyParts split_key(std::string_view key) {
  const auto dot = key.find('.');
  if (dot == std::string_view::npos) throw std::out_of_range("unknown constant key: " + std::string(key));
  const auto model = parse_model(key.substr(0, dot));
  if (!model) throw std::out_of_range("unknown constant key: " + std::string(key));
  return {*model, key.substr(dot + 1)};
}

quad::QuadratureResult combine(const quad::QuadratureResult& a, const quad::QuadratureResult& b, double scale_a,
                               double scale_b) {
  quad::QuadratureResult r;
  r.value = scale_a * a.value + scale_b * b.value;
  r.error_estimate = std::abs(scale_a) * a.error_estimate + std::abs(scale_b) * b.error_estimate;
  r.evaluations = a.evaluations + b.evaluations;
  r.converged = a.converged && b.converged;
  return r;
}

quad::QuadratureResult scaled(quad::QuadratureResult r, double s) {
  r.value *= s;
  r.error_estimate *= std::abs(s);
  return r;
}

void require(const quad::QuadratureResult& r, const char* what) {
  if (!r.converged) throw std::runtime_error(std::string(what) + ": quadrature did not converge");
}

quad::IntegrationSpec tight_spec() {
  quad::IntegrationSpec s;
  s.absolute_tolerance = 1e-14;
  s.relative_tolerance = 1e-13;
  return s;
}

// Delta as two one-dimensional integrals.
quad::QuadratureResult delta_integrals() {
  const double lam = lambda_m6();
  auto root = [](double phi) {
    const double s = std::sin(phi), c = std::cos(phi);
    return std::sqrt(std::max(2 * s * s - c * c, 0.0));
  };
  quad::IntegrationSpec s = tight_spec();
  s.singular_endpoints = quad::Endpoint::lower;
  const auto first = quad::integrate_1d(
      [&](double phi) {
        return pi / 4 - 2 * std::atan((std::sin(phi) - root(phi)) / (std::cos(phi) + std::sin(phi)));
      },
      lam, pi / 4, s);
  s.singular_endpoints = quad::Endpoint::none;
  const auto second = quad::integrate_1d(
      [&](double phi) {
        return pi / 4 - 2 * std::atan((root(phi) - std::sin(phi)) / (std::cos(phi) + std::sin(phi)));
      },
      pi / 4, pi / 2, s);
  return combine(first, second, 8 / (pi * pi), 8 / (pi * pi));
}

}  // namespace

bool ConstantRecord::is_decimal() const {
  if (reference_value.empty()) return false;
  for (char ch : reference_value)
    if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '.')) return false;
  return reference_value.find('.') != std::string::npos;
}

double ConstantRecord::expected() const {
  if (has(Path::closed_form)) return closed_constant(key);
  double v = 0;
  const auto* first = reference_value.data();
  const auto res = std::from_chars(first, first + reference_value.size(), v);
  if (res.ec != std::errc()) throw std::logic_error("unparsable reference value for " + key);
  return v;
}

double ConstantRecord::tolerance() const {
  if (!is_decimal()) return 1e-7;
  const auto dot = reference_value.find('.');
  const auto digits = static_cast<int>(reference_value.size() - dot - 1);
  return std::pow(10.0, -(digits - 1));
}

const std::vector<ConstantRecord>& reference_table() {
  static const std::vector<ConstantRecord> table = build_table();
  return table;
}

const ConstantRecord& lookup(std::string_view key) {
  for (const auto& r : reference_table())
    if (r.key == key) return r;
  throw std::out_of_range("unknown constant key: " + std::string(key));
}

double closed_constant(std::string_view key) {
  const auto& rec = lookup(key);
  if (!rec.has(Path::closed_form)) throw std::invalid_argument("constant has no closed form: " + std::string(key));
  const auto& forms = closed_forms();
  const auto it = forms.find(key);
  if (it == forms.end()) throw std::logic_error("closed form missing for " + std::string(key));
  return it->second();
}

quad::QuadratureResult quadrature_moment(ModelId model, Functional f, const quad::IntegrationSpec& spec) {
  const bool ab_sides = model == ModelId::m1_perimeter || model == ModelId::m2_quadratic_stick ||
                        model == ModelId::m6_eighth_sphere;
  std::function<double(double, double)> g;
  bool angles = false;
  switch (f) {
    case Functional::a: g = [](double x, double) { return x; }; break;
    case Functional::a2: g = [](double x, double) { return x * x; }; break;
    case Functional::ab:
      if (!ab_sides) throw std::invalid_argument("quadrature_moment: E_ab needs a density over (a, b)");
      g = [](double x, double y) { return x * y; };
      break;
    case Functional::c:
    case Functional::c2:
    case Functional::ac:
      if (ab_sides) throw std::invalid_argument("quadrature_moment: c moments need a density over (a, c)");
      if (f == Functional::c) g = [](double, double y) { return y; };
      if (f == Functional::c2) g = [](double, double y) { return y * y; };
      if (f == Functional::ac) g = [](double x, double y) { return x * y; };
      break;
    case Functional::alpha: g = [](double x, double) { return x; }; angles = true; break;
    case Functional::alpha2: g = [](double x, double) { return x * x; }; angles = true; break;
    case Functional::alphabeta: g = [](double x, double y) { return x * y; }; angles = true; break;
  }
  const auto region = angles ? domains::angle_region() : domains::side_region(model);
  const auto kernel = angles ? domains::angle_kernel(model) : domains::side_kernel(model);
  const quad::GapIntegrand2D integrand = [&](const quad::Abscissa& x, const quad::Abscissa& y) {
    return g(x.value, y.value) * kernel(x, y);
  };
  return quad::integrate_2d(integrand, region, spec);
}

quad::QuadratureResult quadrature_obtuse(ModelId model, const quad::IntegrationSpec& spec) {
  const auto kernel = domains::angle_kernel(model);
  quad::QuadratureResult total;
  for (const auto& part : domains::obtuse_angle_regions()) total = combine(total, quad::integrate_2d(kernel, part, spec), 1, 1);
  return total;
}

quad::QuadratureResult quadrature_constant(std::string_view key, const quad::IntegrationSpec& spec) {
  const auto& rec = lookup(key);
  if (!rec.has(Path::quadrature)) throw std::invalid_argument("constant has no quadrature path: " + std::string(key));
  const auto [model, name] = split_key(key);
  if (name == "accept") {
    if (model == ModelId::m6_eighth_sphere) return delta_integrals();
    const auto region = domains::side_region(model);
    if (model == ModelId::m1_perimeter)
      return scaled(quad::integrate_2d([](double, double) { return 1.0; }, region, spec), 2.0);
    // uniform (a^2, b^2) on the simplex: probability 8 * int a b over the support
    return scaled(quad::integrate_2d([](double x, double y) { return x * y; }, region, spec), 8.0);
  }
  if (name == "obtuse") return quadrature_obtuse(model, spec);
  if (name == "inv_C") {
    return scaled(quad::integrate_1d(
                      [](double x) { return std::atan(x * std::sqrt(1 + x * x)) / (1 + x * x); }, 0.0, 1.0, spec),
                  2.0);
  }
  if (const auto f = parse_functional(name)) return quadrature_moment(model, *f, spec);
  throw std::logic_error("no quadrature path for " + std::string(key));
}

double ec_m5(EcPath path) {
  switch (path) {
    case EcPath::defining_integral: {
      quad::IntegrationSpec s = tight_spec();
      s.split_points = {1.0};
      const quad::GapIntegrand f = [](const quad::Abscissa& t) {
        // K(t sqrt(2 - t^2)) has complementary modulus |1 - t^2|
        const double kc = quad::distance_to(t, 1.0) * (1 + t.value);
        return t.value * t.value * specfun::ellip_kc(std::min(kc, 1.0));
      };
      const auto r = quad::integrate_1d(f, 0.0, sqrt2, s);
      require(r, "ec_m5");
      return 4 / (pi * pi) * r.value;
    }
    case EcPath::k_alternate: {
      quad::IntegrationSpec s = tight_spec();
      s.singular_endpoints = quad::Endpoint::upper;
      const quad::GapIntegrand f = [](const quad::Abscissa& x) {
        const double v = x.value;
        const double kc = std::sqrt(quad::distance_to(x, 1.0) * (1 + v));  // sqrt(1 - s^2)
        // sqrt(1 - kc) = s / sqrt(1 + kc)
        const double num = v / std::sqrt(1 + kc) + std::sqrt(1 + kc);
        return v * num / kc * specfun::ellip_kc(std::min(kc, 1.0));
      };
      const auto r = quad::integrate_1d(f, 0.0, 1.0, s);
      require(r, "ec_m5");
      return 2 / (pi * pi) * r.value;
    }
    case EcPath::f32_series: {
      specfun::SeriesOptions o;
      o.tolerance = 1e-13;
      const auto r = specfun::hyp3f2_halves(1.0, o);
      if (!r.converged) throw std::runtime_error("ec_m5: series did not converge");
      return 4 * sqrt2 / (3 * pi) * r.value;
    }
    case EcPath::gamma_closed: {
      const double g5 = specfun::gamma_fn(0.625), g7 = specfun::gamma_fn(0.875);
      const double p = g5 * g5 * g7 * g7;
      return (std::pow(pi, 4) + 8 * p * p) / (2 * pi * pi * pi * p);
    }
  }
  throw std::invalid_argument("ec_m5: unknown path");
}

double eac_integral(ModelId model) {
  const bool quadratic = model == ModelId::m4_quadratic_two_piece;
  if (!quadratic && model != ModelId::m5_quarter_circle)
    throw std::invalid_argument("eac_integral: defined for m4 and m5 only");
  quad::IntegrationSpec s = tight_spec();
  s.split_points = {1.0};
  const quad::GapIntegrand f = [quadratic](const quad::Abscissa& x) {
    const double t = x.value;
    const double p = t * std::sqrt(std::max(std::fma(-t, t, 2.0), 0.0));
    // modulus sqrt(2p/(1+p)), complementary modulus |1 - t^2|/(1 + p)
    const double kc = quad::distance_to(x, 1.0) * (1 + t) / (1 + p);
    if (quadratic) return t * t * std::sqrt(1 + p) * specfun::ellip_ec(std::min(kc, 1.0));
    return t * t / std::sqrt(1 + p) * specfun::ellip_kc(std::min(kc, 1.0));
  };
  const auto r = quad::integrate_1d(f, 0.0, sqrt2, s);
  require(r, "eac_integral");
  return quadratic ? sqrt2 / pi * r.value : 2 * sqrt2 / (pi * pi) * r.value;
}

double inv_c_m6() {
  static const double value = [] {
    const auto r = quadrature_constant("m6.inv_C", tight_spec());
    require(r, "inv_c_m6");
    return r.value;
  }();
  return value;
}

double c_normalizer_m6() {
  static const double value = 1 / inv_c_m6();
  return value;
}

double lambda_m6() { return std::atan(1 / sqrt2); }

double delta_m6() {
  static const double value = [] {
    const auto r = delta_integrals();
    require(r, "delta_m6");
    return r.value;
  }();
  return value;
}

quad::QuadratureResult delta_m6_area(const quad::IntegrationSpec& spec) {
  const auto inside = [](double phi, double psi) {
    const double a = std::sin(phi) * std::cos(psi), b = std::sin(phi) * std::sin(psi), c = std::cos(phi);
    return a < b + c && b < a + c && c < a + b;
  };
  const auto r = quad::integrate_2d([](double, double) { return 1.0; }, inside, {0, pi / 2, 0, pi / 2}, spec);
  return scaled(r, 4 / (pi * pi));
}

double obtuse_m6() {
  quad::IntegrationSpec s = tight_spec();
  s.singular_endpoints = quad::Endpoint::lower;
  // arccos(1/(sqrt(2) sin phi)) = atan(sqrt(-cos 2 phi))
  const auto r = quad::integrate_1d(
      [](double phi) { return pi / 4 - std::atan(std::sqrt(std::max(-std::cos(2 * phi), 0.0))); }, pi / 4, pi / 2,
      s);
  require(r, "obtuse_m6");
  return 1 - 8 / (delta_m6() * pi * pi) * r.value;
}

}  // namespace tri::constants
