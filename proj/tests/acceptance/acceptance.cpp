// Runs every verification suite once and prints one PASS/FAIL line per
// acceptance criterion. Exit status is nonzero if any criterion fails.
#include <array>
#include <cstdlib>
#include <iostream>
#include <string>

#include "tri_cli/cli.hpp"
#include "tri_cli/verify.hpp"

namespace {

constexpr std::array<const char*, 10> descriptions = {
    "bivariate side and angle densities integrate to 1",
    "acceptance probabilities (MC) and Delta for the eighth sphere",
    "obtuse probabilities by quadrature and MC",
    "moment tables by quadrature and MC, elliptic E(ac) cases",
    "E(c) of the quarter circle by four routes",
    "eighth-sphere normalizer 1/C",
    "sides/angles round trip",
    "univariate formulas match integrated marginals",
    "quadratic-stick angles match 3D Gaussian triangles",
    "MC results independent of thread count and chunk size",
};

}  // namespace

int main() {
  tri::cli::VerifyOptions options;
  options.seed = 42;
  const auto checks = tri::cli::run_suite(tri::cli::Suite::all, options);

  std::array<int, 10> total{}, failed{};
  for (const auto& c : checks) {
    if (c.criterion < 1 || c.criterion > 10) {
      if (!c.pass) std::cout << "  supporting check failed: " << c.key << '\n';
      continue;
    }
    ++total[c.criterion - 1];
    if (!c.pass) {
      ++failed[c.criterion - 1];
      std::cout << "  criterion " << c.criterion << " check failed: " << c.key
                << " expected=" << tri::cli::format_double(c.expected)
                << " computed=" << tri::cli::format_double(c.computed)
                << " tolerance=" << tri::cli::format_double(c.tolerance) << '\n';
    }
  }

  bool all_pass = true;
  for (std::size_t i = 0; i < descriptions.size(); ++i) {
    const bool pass = total[i] > 0 && failed[i] == 0;
    all_pass = all_pass && pass;
    std::cout << "CRITERION " << i + 1 << ' ' << (pass ? "PASS" : "FAIL") << "  " << descriptions[i] << " ("
              << total[i] - failed[i] << '/' << total[i] << " checks)\n";
  }
  return all_pass ? EXIT_SUCCESS : EXIT_FAILURE;
}
