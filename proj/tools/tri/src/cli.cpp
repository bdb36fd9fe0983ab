#include "tri_cli/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <variant>
#include <stdexcept>
#include <string>
#include <vector>

#include "tri/constants.hpp"
#include "tri/models.hpp"
#include "tri/montecarlo.hpp"
#include "tri_cli/verify.hpp"

namespace tri::cli {
namespace {

constexpr double pi = std::numbers::pi;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model = "m1";
  std::optional<std::size_t> n;
  std::uint64_t seed = 0;
  std::size_t grid = 256;
  double tolerance = 1e-10;
  std::string format = "csv";
  unsigned threads = 0;
  std::size_t chunk_size = mc::default_chunk_size;
  std::string out_path;

  mc::RunOptions run() const { return {threads, chunk_size}; }
  ModelId model_id() const { return *parse_model(model); }
  quad::IntegrationSpec spec() const {
    quad::IntegrationSpec s;
    s.absolute_tolerance = tolerance;
    s.relative_tolerance = tolerance;
    return s;
  }
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

// Rows of mixed numbers and strings rendered as CSV or as a JSON array of objects.
class Table {
 public:
  using Cell = std::variant<double, std::string, std::uint64_t, std::monostate>;

  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

  void write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
    os << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        std::visit(
            [&os](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) os << format_double(v);
              else if constexpr (std::is_same_v<T, std::string>) os << csv_field(v);
              else if constexpr (std::is_same_v<T, std::uint64_t>) os << v;
            },
            row[i]);
      }
      os << '\n';
    }
  }

  nlohmann::json to_json() const {
    auto rows = nlohmann::json::array();
    for (const auto& row : rows_) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, std::monostate>) obj[header_[i]] = nullptr;
              else if constexpr (std::is_same_v<T, double>) obj[header_[i]] = std::isfinite(v) ? nlohmann::json(v) : nullptr;
              else obj[header_[i]] = v;
            },
            row[i]);
      }
      rows.push_back(std::move(obj));
    }
    return rows;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

void emit(const RunConfig& cfg, std::ostream& out, const std::string& command, const Table& table,
          nlohmann::json meta = nlohmann::json::object()) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file " + cfg.out_path);
    os = &file;
  }
  if (cfg.format == "csv") {
    table.write_csv(*os);
  } else {
    meta["schema"] = 1;
    meta["command"] = command;
    meta["rows"] = table.to_json();
    *os << meta.dump(2) << '\n';
  }
}

void cmd_sample(const RunConfig& cfg, std::ostream& out) {
  const auto model = cfg.model_id();
  const std::size_t n = cfg.n.value_or(10);
  Table t({"a", "b", "c", "alpha", "beta", "gamma"});
  for (const auto& s : mc::sample_batch(model, n, cfg.seed, cfg.run())) t.add({s.a, s.b, s.c, s.alpha, s.beta, s.gamma});
  emit(cfg, out, "sample", t, {{"model", cfg.model}, {"seed", cfg.seed}});
}

std::pair<double, double> second_side_range(ModelId m) {
  if (m == ModelId::m1_perimeter || m == ModelId::m2_quadratic_stick || m == ModelId::m6_eighth_sphere)
    return support_interval(m, Variable::side_a);
  return support_interval(m, Variable::side_c);
}

void cmd_density(const RunConfig& cfg, const std::string& kind, const std::string& var, std::ostream& out) {
  const auto model = cfg.model_id();
  const bool side = kind == "side";
  if (var.empty()) {
    const bool ab = model == ModelId::m1_perimeter || model == ModelId::m2_quadratic_stick ||
                    model == ModelId::m6_eighth_sphere;
    const auto xr = side ? support_interval(model, Variable::side_a) : std::pair{0.0, pi};
    const auto yr = side ? second_side_range(model) : std::pair{0.0, pi};
    Table t(side ? std::vector<std::string>{"a", ab ? "b" : "c", "density"}
                 : std::vector<std::string>{"alpha", "beta", "density"});
    const double g = static_cast<double>(cfg.grid);
    for (std::size_t i = 0; i < cfg.grid; ++i) {
      const double x = xr.first + (xr.second - xr.first) * (static_cast<double>(i) + 0.5) / g;
      for (std::size_t j = 0; j < cfg.grid; ++j) {
        const double y = yr.first + (yr.second - yr.first) * (static_cast<double>(j) + 0.5) / g;
        t.add({x, y, side ? side_density(model, x, y) : angle_density(model, x, y)});
      }
    }
    emit(cfg, out, "density", t, {{"model", cfg.model}, {"kind", kind}});
    return;
  }

  const auto v = parse_variable(var);
  if (!v || side == (*v == Variable::angle_alpha) || !has_univariate(model, *v))
    throw UsageError("unsupported density combination: --model " + cfg.model + " --kind " + kind + " --var " + var);
  if (cfg.grid < 2) throw UsageError("--grid must be at least 2 for a univariate curve");
  // Interior points of a grid dividing the support into `grid` intervals.
  const auto [lo, hi] = support_interval(model, *v);
  Table t({std::string(variable_key(*v)), "density"});
  for (std::size_t i = 1; i < cfg.grid; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cfg.grid);
    t.add({x, univariate_density(model, *v, x)});
  }
  emit(cfg, out, "density", t, {{"model", cfg.model}, {"kind", kind}, {"var", var}});
}

void cmd_moments(const RunConfig& cfg, const std::string& method, std::ostream& out) {
  const auto model = cfg.model_id();
  const auto fs = table_functionals(model);
  Table t({"key", "value", "std_error", "reference"});
  auto reference = [&](const std::string& key) -> Table::Cell {
    for (const auto& r : constants::reference_table())
      if (r.key == key) return r.reference_value;
    return std::monostate{};
  };
  if (method == "mc") {
    const auto est = mc::estimate_moments(model, fs, cfg.n.value_or(std::size_t{1'000'000}), cfg.seed, cfg.run());
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const auto key = std::string(model_key(model)) + "." + std::string(functional_key(fs[k]));
      t.add({key, est[k].value, est[k].std_error, reference(key)});
    }
  } else {
    for (const auto f : fs) {
      const auto key = std::string(model_key(model)) + "." + std::string(functional_key(f));
      if (method == "closed") {
        const auto& rec = constants::lookup(key);
        if (!rec.has(constants::Path::closed_form)) continue;
        t.add({key, constants::closed_constant(key), std::monostate{}, rec.reference_value});
      } else {
        const auto q = constants::quadrature_moment(model, f, cfg.spec());
        t.add({key, q.value, q.error_estimate, reference(key)});
      }
    }
  }
  emit(cfg, out, "moments", t, {{"model", cfg.model}, {"method", method}});
}

void cmd_table(const RunConfig& cfg, std::ostream& out) {
  Table t({"key", "model", "reference_value", "expected", "tolerance", "closed_form", "quadrature", "series",
           "monte_carlo", "citation"});
  for (const auto& r : constants::reference_table()) {
    auto flag = [&](constants::Path p) { return std::string(r.has(p) ? "yes" : "no"); };
    t.add({r.key, std::string(r.model ? model_key(*r.model) : ""), r.reference_value, r.expected(), r.tolerance(),
           flag(constants::Path::closed_form), flag(constants::Path::quadrature), flag(constants::Path::series),
           flag(constants::Path::monte_carlo), r.citation});
  }
  emit(cfg, out, "table", t);
}

int cmd_verify(const RunConfig& cfg, const std::string& suite_key, std::ostream& out) {
  const auto suite = parse_suite(suite_key);
  if (!suite) throw UsageError("unknown suite " + suite_key);
  VerifyOptions vo;
  vo.n = cfg.n.value_or(0);
  vo.seed = cfg.seed;
  vo.tolerance = cfg.tolerance;
  vo.run = cfg.run();
  const auto checks = run_suite(*suite, vo);
  const auto report = report_json(*suite, checks);
  std::ofstream file;
  std::ostream* os = &out;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file " + cfg.out_path);
    os = &file;
  }
  *os << report.dump(2) << '\n';
  return report["pass"].get<bool>() ? exit_ok : exit_failed;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool with_model) {
  static const std::vector<std::string> models = {"m1", "m2", "m3", "m4", "m5", "m6"};
  if (with_model) sub->add_option("--model", cfg.model, "Model m1..m6")->check(CLI::IsMember(models))->required();
  sub->add_option("--n", cfg.n, "Sample count")->check(CLI::PositiveNumber);
  sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  sub->add_option("--tol", cfg.tolerance, "Quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--threads", cfg.threads, "Worker threads (default: machine parallelism)")->check(CLI::PositiveNumber);
  sub->add_option("--chunk-size", cfg.chunk_size, "Monte Carlo chunk size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--out", cfg.out_path, "Output file (default stdout)");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random triangles under equality constraints: sampling, densities, moments, verification"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string kind, var, method = "quadrature", suite = "all";

  auto* sample = app.add_subcommand("sample", "Draw triangles (a, b, c, alpha, beta, gamma)");
  add_common(sample, cfg, true);

  auto* density = app.add_subcommand("density", "Density on a grid, bivariate or univariate");
  add_common(density, cfg, true);
  density->add_option("--kind", kind, "side or angle")->check(CLI::IsMember({"side", "angle"}))->required();
  density->add_option("--var", var, "Univariate variable: a, c or alpha")->check(CLI::IsMember({"a", "c", "alpha"}));
  density->add_option("--grid", cfg.grid, "Grid points per axis")->check(CLI::PositiveNumber)->capture_default_str();

  auto* moments = app.add_subcommand("moments", "Moments of the model's table");
  add_common(moments, cfg, true);
  moments->add_option("--method", method, "closed, quadrature or mc")
      ->check(CLI::IsMember({"closed", "quadrature", "mc"}))
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run verification suites; JSON report");
  add_common(verify, cfg, false);
  verify->add_option("--suite", suite, "constants, normalization, roundtrip, mc, gaussian or all")
      ->check(CLI::IsMember({"constants", "normalization", "roundtrip", "mc", "gaussian", "all"}))
      ->capture_default_str();

  auto* table = app.add_subcommand("table", "Export the reference constant table");
  add_common(table, cfg, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return exit_ok;
    return exit_usage;
  }

  try {
    if (sample->parsed()) cmd_sample(cfg, out);
    else if (density->parsed()) cmd_density(cfg, kind, var, out);
    else if (moments->parsed()) cmd_moments(cfg, method, out);
    else if (verify->parsed()) return cmd_verify(cfg, suite, out);
    else if (table->parsed()) cmd_table(cfg, out);
    return exit_ok;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failed;
  }
}

}  // namespace tri::cli
