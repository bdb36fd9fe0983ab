#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tri/montecarlo.hpp"

namespace tri::cli {

/// One verification check. For p-value checks `expected` holds the threshold
/// the computed p-value must exceed (or stay below, for misfit checks).
struct Check {
  std::string key;
  int criterion = 0;  ///< acceptance criterion 1..10, 0 for supporting checks
  double expected = 0;
  double computed = 0;
  double tolerance = 0;
  bool pass = false;
};

enum class Suite { constants, normalization, roundtrip, mc, gaussian, all };

std::optional<Suite> parse_suite(std::string_view name);
std::string_view suite_name(Suite suite);

struct VerifyOptions {
  std::size_t n = 0;  ///< 0: the suite's default sample count
  std::uint64_t seed = 0;
  double tolerance = 1e-10;  ///< quadrature tolerance
  mc::RunOptions run;
};

inline constexpr std::size_t default_mc_samples = 1'000'000;
inline constexpr std::size_t default_roundtrip_samples = 10'000;
inline constexpr std::size_t histogram_bins = 50;

std::vector<Check> run_suite(Suite suite, const VerifyOptions& options);

/// |computed - expected| <= tolerance.
Check near(std::string key, int criterion, double expected, double computed, double tolerance);

nlohmann::json report_json(Suite suite, const std::vector<Check>& checks);

}  // namespace tri::cli
