#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "tri/models.hpp"
#include "tri/quadrature.hpp"

/// Reproducible chunk-parallel Monte Carlo over the six models.
///
/// Sample j of a run with master seed s draws all of its uniforms from a
/// private SplitMix64 generator started at stream_seed(s, j). Results do not
/// depend on the thread count or on the chunk size.
namespace tri::mc {

inline constexpr std::size_t default_chunk_size = 65536;
inline constexpr std::size_t minimum_samples = 1000;

struct RunOptions {
  unsigned threads = 0;  ///< 0: TRI_THREADS if set, else hardware concurrency
  std::size_t chunk_size = default_chunk_size;
};

unsigned resolve_threads(const RunOptions& options);

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Initial generator state of sample `index` under `seed`.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ (index * 0x9E3779B97F4A7C15ULL));
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }
  /// Uniform on (0, 1): the top 53 bits, centred in their cell.
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
  double operator()() { return uniform(); }

 private:
  std::uint64_t state_;
};

/// Accepted sample `index` of the stream family `seed`.
TriangleSample draw_sample(ModelId model, std::uint64_t seed, std::uint64_t index);
std::vector<TriangleSample> sample_batch(ModelId model, std::size_t n, std::uint64_t seed, const RunOptions& options = {});

/// Exact floating-point sum (Shewchuk partials, correctly rounded result).
class ExactSum {
 public:
  void add(double x);
  void add(const ExactSum& other);
  double value() const;

 private:
  std::vector<double> partials_;
};

struct MomentEstimate {
  double value = 0;
  double std_error = 0;  ///< sample standard deviation / sqrt(n)
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument when n < minimum_samples.
MomentEstimate estimate_moment(ModelId model, Functional f, std::size_t n, std::uint64_t seed,
                               const RunOptions& options = {});
/// Several functionals from one pass over the same samples.
std::vector<MomentEstimate> estimate_moments(ModelId model, std::span<const Functional> fs, std::size_t n,
                                             std::uint64_t seed, const RunOptions& options = {});
/// Fraction of obtuse triangles, binomial standard error.
MomentEstimate estimate_obtuse(ModelId model, std::size_t n, std::uint64_t seed, const RunOptions& options = {});
/// Fraction of latent draws accepted by realize; trial j uses the first two
/// uniforms of stream j.
MomentEstimate estimate_acceptance(ModelId model, std::size_t n_trials, std::uint64_t seed,
                                   const RunOptions& options = {});

struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t n_total = 0;
};

/// Equal-width bins over support_interval(model, v). Throws
/// std::invalid_argument for bins < 10, n < minimum_samples, or pairs
/// without a univariate support.
Histogram histogram_variable(ModelId model, Variable v, std::size_t bins, std::size_t n, std::uint64_t seed,
                             const RunOptions& options = {});

inline constexpr double minimum_expected_count = 5.0;

struct ChiSquareResult {
  double statistic = 0;
  double p_value = 0;
  int degrees_of_freedom = 0;
  std::size_t groups = 0;  ///< bins after merging
};

/// Pearson fit against expected = n * integral of the density over each bin.
/// Adjacent bins are merged left to right until every group expects at least
/// minimum_expected_count; a short final group joins its neighbour. Throws
/// std::invalid_argument for an empty histogram or when fewer than two
/// groups remain.
ChiSquareResult chi_square_fit(const Histogram& hist, const quad::GapIntegrand& density,
                               const std::vector<double>& singular_points = {});
ChiSquareResult chi_square_fit(const Histogram& hist, const std::function<double(double)>& density);
/// Fit against the model's closed-form univariate density.
ChiSquareResult chi_square_fit(const Histogram& hist, ModelId model, Variable v);

/// Two-sample test that both histograms (same edges) come from one
/// distribution. Bins empty in both are dropped.
ChiSquareResult chi_square_homogeneity(const Histogram& first, const Histogram& second);

/// Angles (alpha, beta) of triangles with vertices of independent standard
/// normal coordinates in 3D. Normals come from the polar method; collinear
/// draws are redrawn.
std::vector<std::pair<double, double>> gaussian_triangle_angles_3d(std::size_t n, std::uint64_t seed,
                                                                   const RunOptions& options = {});
/// Histogram of alpha over (0, pi) for the Gaussian triangles.
Histogram gaussian_alpha_histogram(std::size_t bins, std::size_t n, std::uint64_t seed,
                                   const RunOptions& options = {});

}  // namespace tri::mc
