#include "tri_cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tri/constants.hpp"
#include "tri/models.hpp"

namespace tri::cli {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double normalization_tolerance = 1e-6;
constexpr double marginal_tolerance = 1e-8;
constexpr double roundtrip_tolerance = 1e-12;
constexpr double sigma_band = 4.0;
constexpr double p_threshold = 1e-3;
constexpr double misfit_threshold = 1e-6;

std::string mkey(ModelId m, std::string_view rest) { return std::string(model_key(m)) + "." + std::string(rest); }

int criterion_of(std::string_view name) {
  if (name == "accept") return 2;
  if (name == "obtuse") return 3;
  if (name == "inv_C") return 6;
  return 4;
}

quad::IntegrationSpec quad_spec(const VerifyOptions& o) {
  quad::IntegrationSpec s;
  s.absolute_tolerance = o.tolerance;
  s.relative_tolerance = o.tolerance;
  return s;
}

Check sigma_check(std::string key, int criterion, double expected, const mc::MomentEstimate& e) {
  return near(std::move(key), criterion, expected, e.value, sigma_band * e.std_error);
}

Check above(std::string key, int criterion, double threshold, double computed) {
  return {std::move(key), criterion, threshold, computed, 0.0, computed > threshold};
}

Check below(std::string key, int criterion, double threshold, double computed) {
  return {std::move(key), criterion, threshold, computed, 0.0, computed < threshold};
}

void constants_suite(const VerifyOptions& o, std::vector<Check>& out) {
  const auto spec = quad_spec(o);
  for (const auto& rec : constants::reference_table()) {
    const auto name = std::string_view(rec.key).substr(rec.key.find('.') + 1);
    const int crit = criterion_of(name);
    const double expected = rec.expected();
    // the Gamma closed form of E(c) against its printed decimal
    if (rec.has(constants::Path::closed_form) && rec.is_decimal()) {
      out.push_back(near("printed." + rec.key, 5, std::stod(rec.reference_value), expected, rec.tolerance()));
    }
    if (rec.has(constants::Path::quadrature)) {
      const auto q = constants::quadrature_constant(rec.key, spec);
      auto c = near("quadrature." + rec.key, crit, expected, q.value, rec.tolerance());
      c.pass = c.pass && q.converged;
      out.push_back(c);
    }
  }

  const double delta_printed = constants::lookup("m6.accept").expected();
  out.push_back(near("delta_m6", 2, delta_printed, constants::delta_m6(), 1e-8));
  out.push_back(near("obtuse_m6", 3, constants::lookup("m6.obtuse").expected(), constants::obtuse_m6(), 1e-7));
  {
    quad::IntegrationSpec coarse;
    coarse.absolute_tolerance = 1e-7;
    coarse.relative_tolerance = 1e-7;
    const auto area = constants::delta_m6_area(coarse);
    out.push_back(near("delta_m6_area", 0, delta_printed, area.value, 1e-6));
  }

  for (const auto m : {ModelId::m4_quadratic_two_piece, ModelId::m5_quarter_circle}) {
    const auto& rec = constants::lookup(mkey(m, "E_ac"));
    out.push_back(near("elliptic." + rec.key, 4, rec.expected(), constants::eac_integral(m), rec.tolerance()));
  }

  using constants::EcPath;
  const std::pair<EcPath, const char*> paths[] = {{EcPath::defining_integral, "defining_integral"},
                                                  {EcPath::k_alternate, "k_alternate"},
                                                  {EcPath::f32_series, "f32_series"},
                                                  {EcPath::gamma_closed, "gamma_closed"}};
  std::vector<double> ec;
  for (const auto& [path, name] : paths) {
    ec.push_back(constants::ec_m5(path));
    out.push_back(near(std::string("ec_m5.") + name, 5, 0.9580913986, ec.back(), 1e-9));
  }
  const auto [lo, hi] = std::minmax_element(ec.begin(), ec.end());
  out.push_back(near("ec_m5.spread", 5, 0.0, *hi - *lo, 1e-9));

  out.push_back(near("inv_c_m6", 6, constants::lookup("m6.inv_C").expected(), constants::inv_c_m6(), 1e-9));
}

void normalization_suite(const VerifyOptions& o, std::vector<Check>& out) {
  const auto spec = quad_spec(o);
  for (const auto m : all_models) {
    const auto side = quad::integrate_2d(domains::side_kernel(m), domains::side_region(m), spec);
    out.push_back(near(mkey(m, "side_density"), 1, 1.0, side.value, normalization_tolerance));
    const auto angle = quad::integrate_2d(domains::angle_kernel(m), domains::angle_region(), spec);
    out.push_back(near(mkey(m, "angle_density"), 1, 1.0, angle.value, normalization_tolerance));
    if (m == ModelId::m3_two_piece || m == ModelId::m4_quadratic_two_piece || m == ModelId::m5_quarter_circle) {
      const auto by_c = quad::integrate_2d(domains::side_kernel_by_c(m), domains::side_region_by_c(m), spec);
      out.push_back(near(mkey(m, "side_density_by_c"), 1, 1.0, by_c.value, normalization_tolerance));
    }
  }

  for (const auto m : all_models) {
    for (const auto v : {Variable::side_a, Variable::side_c, Variable::angle_alpha}) {
      if (!has_univariate(m, v)) continue;
      const auto [lo, hi] = support_interval(m, v);
      quad::IntegrationSpec s = spec;
      s.singular_endpoints = quad::Endpoint::both;
      s.split_points = univariate_singular_points(m, v);
      const auto total = quad::integrate_1d(univariate_kernel(m, v), lo, hi, s);
      const std::string base = mkey(m, "univariate_") + std::string(variable_key(v));
      out.push_back(near(base, 0, 1.0, total.value, normalization_tolerance));

      // M6 alpha has no closed univariate form; it is the marginal itself.
      if (m == ModelId::m6_eighth_sphere && v == Variable::angle_alpha) continue;
      double worst = 0;
      for (int i = 1; i <= 20; ++i) {
        const double x = lo + (hi - lo) * i / 21.0;
        worst = std::max(worst, std::abs(univariate_density(m, v, x) - marginal_density(m, v, x, spec)));
      }
      out.push_back(near("marginal." + std::string(model_key(m)) + "." + std::string(variable_key(v)), 8, 0.0,
                         worst, marginal_tolerance));
    }
  }
}

void roundtrip_suite(const VerifyOptions& o, std::vector<Check>& out) {
  const std::size_t n = o.n ? o.n : default_roundtrip_samples;
  for (const auto m : all_models) {
    double worst = 0;
    for (const auto& t : mc::sample_batch(m, n, o.seed, o.run)) {
      const auto ang = angles_from_sides(t.a, t.b, t.c);
      const auto s = sides_from_angles(m, ang.alpha, ang.beta);
      worst = std::max({worst, std::abs(s.a - t.a), std::abs(s.b - t.b), std::abs(s.c - t.c)});
    }
    out.push_back(near(mkey(m, "roundtrip"), 7, 0.0, worst, roundtrip_tolerance));
  }
}

void mc_suite(const VerifyOptions& o, std::vector<Check>& out) {
  const std::size_t n = o.n ? o.n : default_mc_samples;
  for (const auto m : all_models) {
    const auto fs = table_functionals(m);
    const auto est = mc::estimate_moments(m, fs, n, o.seed, o.run);
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const auto key = mkey(m, functional_key(fs[k]));
      out.push_back(sigma_check("mc." + key, 4, constants::lookup(key).expected(), est[k]));
    }
    out.push_back(
        sigma_check("mc." + mkey(m, "obtuse"), 3, constants::lookup(mkey(m, "obtuse")).expected(),
                    mc::estimate_obtuse(m, n, o.seed, o.run)));
    const auto acc = mc::estimate_acceptance(m, n, o.seed, o.run);
    out.push_back(sigma_check("mc." + mkey(m, "accept"), 2, acceptance_probability(m), acc));
  }

  for (const auto m : all_models) {
    for (const auto v : {Variable::side_a, Variable::side_c, Variable::angle_alpha}) {
      if (!has_univariate(m, v)) continue;
      const auto h = mc::histogram_variable(m, v, histogram_bins, n, o.seed, o.run);
      out.push_back(above("fit." + std::string(model_key(m)) + "." + std::string(variable_key(v)), 0, p_threshold,
                          mc::chi_square_fit(h, m, v).p_value));
    }
  }
  {
    const auto h = mc::histogram_variable(ModelId::m1_perimeter, Variable::side_a, histogram_bins, n, o.seed, o.run);
    const auto fit = mc::chi_square_fit(h, univariate_kernel(ModelId::m2_quadratic_stick, Variable::side_a));
    out.push_back(below("misfit.m1_sample_vs_m2_density", 0, misfit_threshold, fit.p_value));
  }

  // Same seed and chunk size on different thread counts, then different chunk sizes.
  const Functional fs[] = {Functional::alphabeta, Functional::a2};
  const auto reference = mc::estimate_moments(ModelId::m6_eighth_sphere, fs, n, o.seed, {1, o.run.chunk_size});
  const auto threaded = mc::estimate_moments(ModelId::m6_eighth_sphere, fs, n, o.seed, {4, o.run.chunk_size});
  const auto small = mc::estimate_moments(ModelId::m6_eighth_sphere, fs, n, o.seed, {3, 1000});
  const auto large = mc::estimate_moments(ModelId::m6_eighth_sphere, fs, n, o.seed, {2, 100000});
  for (std::size_t k = 0; k < std::size(fs); ++k) {
    const auto name = std::string(functional_key(fs[k]));
    auto bitwise = [](const mc::MomentEstimate& a, const mc::MomentEstimate& b) {
      return a.value == b.value && a.std_error == b.std_error;
    };
    Check threads{"reproducible.threads.m6." + name, 10, reference[k].value, threaded[k].value, 0.0,
                  bitwise(reference[k], threaded[k])};
    Check chunks{"reproducible.chunks.m6." + name, 10, small[k].value, large[k].value, 0.0, bitwise(small[k], large[k])};
    out.push_back(threads);
    out.push_back(chunks);
  }
  {
    const auto a = mc::estimate_obtuse(ModelId::m2_quadratic_stick, n, o.seed, {1, o.run.chunk_size});
    const auto b = mc::estimate_obtuse(ModelId::m2_quadratic_stick, n, o.seed, {3, o.run.chunk_size});
    out.push_back({"reproducible.threads.m2.obtuse", 10, a.value, b.value, 0.0, a.value == b.value});
  }
}

void gaussian_suite(const VerifyOptions& o, std::vector<Check>& out) {
  const std::size_t n = o.n ? o.n : default_mc_samples;
  const auto m2 = mc::histogram_variable(ModelId::m2_quadratic_stick, Variable::angle_alpha, histogram_bins, n, o.seed,
                                         o.run);
  const auto gauss = mc::gaussian_alpha_histogram(histogram_bins, n, o.seed, o.run);
  out.push_back(above("gaussian.homogeneity_vs_m2", 9, p_threshold, mc::chi_square_homogeneity(m2, gauss).p_value));
  out.push_back(above("gaussian.fit_m2_angle_density", 9, p_threshold,
                      mc::chi_square_fit(gauss, ModelId::m2_quadratic_stick, Variable::angle_alpha).p_value));

  const auto angles = mc::gaussian_triangle_angles_3d(n, o.seed, o.run);
  mc::ExactSum s1, s2;
  bool valid = true;
  for (const auto& [a, b] : angles) {
    valid = valid && a > 0 && b > 0 && a + b < pi;
    s1.add(a);
    s2.add(a * a);
  }
  const double nn = static_cast<double>(angles.size());
  const double mean = s1.value() / nn;
  s2.add(-mean * s1.value());
  const double se = std::sqrt(std::max(s2.value(), 0.0) / (nn - 1) / nn);
  out.push_back(near("gaussian.mean_alpha", 9, pi / 3, mean, sigma_band * se));
  out.push_back({"gaussian.angles_in_simplex", 9, 1.0, valid ? 1.0 : 0.0, 0.0, valid});
}

}  // namespace

Check near(std::string key, int criterion, double expected, double computed, double tolerance) {
  const bool pass = std::isfinite(computed) && std::abs(computed - expected) <= tolerance;
  return {std::move(key), criterion, expected, computed, tolerance, pass};
}

std::optional<Suite> parse_suite(std::string_view name) {
  for (const auto s : {Suite::constants, Suite::normalization, Suite::roundtrip, Suite::mc, Suite::gaussian, Suite::all})
    if (suite_name(s) == name) return s;
  return std::nullopt;
}

std::string_view suite_name(Suite suite) {
  switch (suite) {
    case Suite::constants: return "constants";
    case Suite::normalization: return "normalization";
    case Suite::roundtrip: return "roundtrip";
    case Suite::mc: return "mc";
    case Suite::gaussian: return "gaussian";
    case Suite::all: return "all";
  }
  return "?";
}

std::vector<Check> run_suite(Suite suite, const VerifyOptions& options) {
  std::vector<Check> out;
  const bool all = suite == Suite::all;
  if (all || suite == Suite::constants) constants_suite(options, out);
  if (all || suite == Suite::normalization) normalization_suite(options, out);
  if (all || suite == Suite::roundtrip) roundtrip_suite(options, out);
  if (all || suite == Suite::mc) mc_suite(options, out);
  if (all || suite == Suite::gaussian) gaussian_suite(options, out);
  return out;
}

nlohmann::json report_json(Suite suite, const std::vector<Check>& checks) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json list = nlohmann::json::array();
  bool all_pass = true;
  for (const auto& c : checks) {
    all_pass = all_pass && c.pass;
    list.push_back({{"key", c.key},
                    {"criterion", c.criterion},
                    {"expected", num(c.expected)},
                    {"computed", num(c.computed)},
                    {"tolerance", num(c.tolerance)},
                    {"pass", c.pass}});
  }
  return {{"schema", 1}, {"suite", suite_name(suite)}, {"pass", all_pass}, {"checks", std::move(list)}};
}

}  // namespace tri::cli
