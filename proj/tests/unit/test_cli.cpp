#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tri/models.hpp"
#include "tri/montecarlo.hpp"
#include "tri_cli/cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "tri");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = tri::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

using Row = std::vector<std::string>;

std::vector<Row> parse_csv(const std::string& text) {
  std::vector<Row> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    Row row;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          cell += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        row.push_back(cell);
        cell.clear();
      } else {
        cell += ch;
      }
    }
    row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(CliSample, PerimeterRows) {
  const auto r = run({"sample", "--model", "m1", "--n", "3", "--seed", "7", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (Row{"a", "b", "c", "alpha", "beta", "gamma"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = std::stod(rows[i][0]), b = std::stod(rows[i][1]), c = std::stod(rows[i][2]);
    EXPECT_NEAR(a + b + c, 1.0, 1e-12);
  }
}

TEST(CliSample, QuarterCircleRow) {
  const auto r = run({"sample", "--model", "m5", "--n", "1", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  const double a = std::stod(rows[1][0]), b = std::stod(rows[1][1]);
  EXPECT_NEAR(a * a + b * b, 1.0, 1e-12);
}

TEST(CliSample, RoundTripsExactly) {
  const auto r = run({"sample", "--model", "m6", "--n", "20", "--seed", "3", "--threads", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  const auto direct = tri::mc::sample_batch(tri::ModelId::m6_eighth_sphere, 20, 3, {1});
  ASSERT_EQ(rows.size(), 21u);
  for (std::size_t i = 0; i < direct.size(); ++i) {
    EXPECT_EQ(std::stod(rows[i + 1][0]), direct[i].a);
    EXPECT_EQ(std::stod(rows[i + 1][3]), direct[i].alpha);
    EXPECT_EQ(std::stod(rows[i + 1][5]), direct[i].gamma);
  }
}

TEST(CliSample, Deterministic) {
  const auto a = run({"sample", "--model", "m2", "--n", "50", "--seed", "11", "--threads", "1"});
  const auto b = run({"sample", "--model", "m2", "--n", "50", "--seed", "11", "--threads", "3", "--chunk-size", "7"});
  EXPECT_EQ(a.out, b.out);
}

TEST(CliSample, BadFlags) {
  const auto r = run({"sample", "--model", "m9"});
  EXPECT_EQ(r.code, tri::cli::exit_usage);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run({"sample"}).code, tri::cli::exit_usage);
  EXPECT_EQ(run({"sample", "--model", "m1", "--format", "xml"}).code, tri::cli::exit_usage);
  EXPECT_EQ(run({"frobnicate"}).code, tri::cli::exit_usage);
  EXPECT_EQ(run({}).code, tri::cli::exit_usage);
}

TEST(CliDensity, BivariateGrid) {
  const auto r = run({"density", "--model", "m2", "--kind", "side", "--grid", "64"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 4097u);
  std::size_t zeros = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = std::stod(rows[i][0]), b = std::stod(rows[i][1]), d = std::stod(rows[i][2]);
    EXPECT_EQ(d > 0, tri::side_support(tri::ModelId::m2_quadratic_stick, a, b));
    zeros += d == 0;
  }
  EXPECT_GT(zeros, 0u);
}

TEST(CliDensity, PerimeterAngleCurve) {
  const auto r = run({"density", "--model", "m1", "--kind", "angle", "--var", "alpha", "--grid", "512"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 512u);
  EXPECT_EQ(rows[0], (Row{"alpha", "density"}));
  double best = 0, arg = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double x = std::stod(rows[i][0]), d = std::stod(rows[i][1]);
    if (d > best) best = d, arg = x;
    if (i == 256) {
      EXPECT_EQ(x, std::numbers::pi / 2);
      EXPECT_NEAR(d, 0.31776616671934371301, 1e-14);
    }
  }
  // mode of the perimeter-model angle; a 2e5-sample histogram peaks in the bin [0.40, 0.45)
  EXPECT_GT(arg, 0.40);
  EXPECT_LT(arg, 0.47);
}

TEST(CliDensity, QuarterCircleSideSpike) {
  const auto r = run({"density", "--model", "m5", "--kind", "side", "--var", "c", "--grid", "512"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  double best = 0, arg = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double x = std::stod(rows[i][0]);
    const double d = rows[i][1] == "inf" ? INFINITY : std::stod(rows[i][1]);
    if (d > best) best = d, arg = x;
  }
  EXPECT_NEAR(arg, 1.0, 0.01);
}

TEST(CliDensity, UnsupportedCombinations) {
  EXPECT_EQ(run({"density", "--model", "m1", "--kind", "side", "--var", "c"}).code, tri::cli::exit_usage);
  EXPECT_EQ(run({"density", "--model", "m1", "--kind", "side", "--var", "alpha"}).code, tri::cli::exit_usage);
  EXPECT_EQ(run({"density", "--model", "m1", "--kind", "volume"}).code, tri::cli::exit_usage);
}

TEST(CliMoments, ClosedForms) {
  const auto r = run({"moments", "--model", "m2", "--method", "closed"});
  ASSERT_EQ(r.code, 0) << r.err;
  bool found = false;
  for (const auto& row : parse_csv(r.out)) {
    if (row[0] != "m2.E_ab") continue;
    found = true;
    const double pi = std::numbers::pi, s3 = std::sqrt(3.0);
    EXPECT_NEAR(std::stod(row[1]), (9 + s3 * pi) / (9 * s3 * pi), 1e-15);
    EXPECT_EQ(row[3], "(9+sqrt(3)*pi)/(9*sqrt(3)*pi)");
  }
  EXPECT_TRUE(found);
}

TEST(CliMoments, QuadratureJson) {
  const auto r = run({"moments", "--model", "m3", "--method", "quadrature", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "moments");
  bool found = false;
  for (const auto& row : j["rows"]) {
    if (row["key"] != "m3.E_alphabeta") continue;
    found = true;
    EXPECT_NEAR(row["value"].get<double>(), 0.3420140195, 1e-9);
  }
  EXPECT_TRUE(found);
}

TEST(CliMoments, MonteCarlo) {
  const auto r = run({"moments", "--model", "m6", "--method", "mc", "--n", "100000", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  bool found = false;
  for (const auto& row : parse_csv(r.out)) {
    if (row[0] != "m6.E_a2") continue;
    found = true;
    EXPECT_LE(std::abs(std::stod(row[1]) - 0.3209403207), 4 * std::stod(row[2]));
  }
  EXPECT_TRUE(found);
}

TEST(CliVerify, RoundtripReport) {
  const auto r = run({"verify", "--suite", "roundtrip", "--n", "10000"});
  EXPECT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["suite"], "roundtrip");
  EXPECT_TRUE(j["pass"].get<bool>());
  ASSERT_FALSE(j["checks"].empty());
  for (const auto& c : j["checks"]) {
    EXPECT_LT(c["computed"].get<double>(), 1e-12);
    for (const char* field : {"key", "expected", "computed", "tolerance", "pass"}) EXPECT_TRUE(c.contains(field));
  }
  EXPECT_EQ(run({"verify", "--suite", "bogus"}).code, tri::cli::exit_usage);
}

TEST(CliTable, WritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "tri_cli_table_test.csv";
  const auto r = run({"table", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto rows = parse_csv(ss.str());
  EXPECT_EQ(rows.size(), 53u);
  std::filesystem::remove(path);
}

TEST(CliFormat, SeventeenDigits) {
  for (double x : {0.1, 1.0 / 3, std::numbers::pi, 1e-300, 6.02214076e23}) {
    EXPECT_EQ(std::stod(tri::cli::format_double(x)), x);
  }
}
