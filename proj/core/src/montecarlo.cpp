#include "tri/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

namespace tri::mc {
namespace {

constexpr double pi = std::numbers::pi;
// Separates the Gaussian oracle's streams from the model streams of the same seed.
constexpr std::uint64_t gaussian_domain = 0x6A09E667F3BCC909ULL;

void require_samples(std::size_t n, const char* what) {
  if (n < minimum_samples)
    throw std::invalid_argument(std::string(what) + ": n too small (need at least " +
                                std::to_string(minimum_samples) + ")");
}

// Runs fill(acc, begin, end) for every chunk of [0, n). Each chunk owns its
// accumulator; the caller reduces them in index order.
template <class Acc, class Fill>
std::vector<Acc> run_chunks(std::size_t n, const RunOptions& options, Fill&& fill) {
  if (options.chunk_size == 0) throw std::invalid_argument("chunk_size must be positive");
  const std::size_t chunk = options.chunk_size;
  const std::size_t chunks = n == 0 ? 0 : (n - 1) / chunk + 1;
  std::vector<Acc> out(chunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= chunks) return;
      try {
        fill(out[i], i * chunk, std::min(n, (i + 1) * chunk));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(resolve_threads(options), chunks);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct MomentChunk {
  std::vector<ExactSum> sum;
  std::vector<ExactSum> sum_sq;
};

MomentEstimate from_sums(const ExactSum& s1, const ExactSum& s2, std::size_t n, std::uint64_t seed) {
  const double nn = static_cast<double>(n);
  const double mean = s1.value() / nn;
  ExactSum centred = s2;
  centred.add(-mean * s1.value());
  const double var = std::max(centred.value(), 0.0) / (nn - 1);
  return {mean, std::sqrt(var / nn), n, seed};
}

MomentEstimate proportion(std::uint64_t hits, std::size_t n, std::uint64_t seed) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1 - p) / static_cast<double>(n)), n, seed};
}

std::uint64_t count_chunks(const std::vector<std::uint64_t>& chunks) {
  std::uint64_t total = 0;
  for (auto c : chunks) total += c;
  return total;
}

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  edges[bins] = hi;
  return edges;
}

std::size_t bin_of(double x, double lo, double hi, std::size_t bins) {
  const double t = (x - lo) / (hi - lo) * static_cast<double>(bins);
  if (!(t > 0)) return 0;
  return std::min(static_cast<std::size_t>(t), bins - 1);
}

Histogram merge_counts(std::vector<double> edges, const std::vector<std::vector<std::uint64_t>>& chunks) {
  Histogram h;
  h.counts.assign(edges.size() - 1, 0);
  h.edges = std::move(edges);
  for (const auto& c : chunks)
    for (std::size_t i = 0; i < c.size(); ++i) h.counts[i] += c[i];
  for (auto c : h.counts) h.n_total += c;
  return h;
}

double standard_normal_pair(SplitMix64& g, double& second) {
  for (;;) {
    const double u = 2 * g.uniform() - 1;
    const double v = 2 * g.uniform() - 1;
    const double s = u * u + v * v;
    if (s >= 1 || s == 0) continue;
    const double f = std::sqrt(-2 * std::log(s) / s);
    second = v * f;
    return u * f;
  }
}

std::pair<double, double> gaussian_angles(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(stream_seed(seed ^ gaussian_domain, index));
  for (;;) {
    double z[10];
    for (int i = 0; i < 10; i += 2) z[i] = standard_normal_pair(g, z[i + 1]);
    const double* p = z;
    const double* q = z + 3;
    const double* r = z + 6;
    auto dist = [](const double* u, const double* v) {
      const double dx = u[0] - v[0], dy = u[1] - v[1], dz = u[2] - v[2];
      return std::sqrt(dx * dx + dy * dy + dz * dz);
    };
    const double a = dist(q, r), b = dist(p, r), c = dist(p, q);
    if (!(a < b + c && b < a + c && c < a + b)) continue;
    try {
      const auto t = angles_from_sides(a, b, c);
      return {t.alpha, t.beta};
    } catch (const std::domain_error&) {
      continue;
    }
  }
}

}  // namespace

unsigned resolve_threads(const RunOptions& options) {
  if (options.threads > 0) return options.threads;
  if (const char* env = std::getenv("TRI_THREADS")) {
    unsigned v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, v);
    if (res.ec == std::errc() && res.ptr == end && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void ExactSum::add(double x) {
  if (!std::isfinite(x)) throw std::domain_error("ExactSum: non-finite summand");
  std::size_t i = 0;
  for (double y : partials_) {
    if (std::abs(x) < std::abs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0) partials_[i++] = lo;
    x = hi;
  }
  partials_.resize(i);
  partials_.push_back(x);
}

void ExactSum::add(const ExactSum& other) {
  for (double p : other.partials_) add(p);
}

double ExactSum::value() const {
  std::size_t n = partials_.size();
  if (n == 0) return 0.0;
  double hi = partials_[--n];
  double lo = 0;
  while (n > 0) {
    const double x = hi;
    const double y = partials_[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0) break;
  }
  // Round half-way cases using the sign of the next partial.
  if (n > 0 && ((lo < 0 && partials_[n - 1] < 0) || (lo > 0 && partials_[n - 1] > 0))) {
    const double y = lo * 2;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

TriangleSample draw_sample(ModelId model, std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(stream_seed(seed, index));
  return sample(model, g);
}

std::vector<TriangleSample> sample_batch(ModelId model, std::size_t n, std::uint64_t seed,
                                         const RunOptions& options) {
  std::vector<TriangleSample> out(n);
  run_chunks<char>(n, options, [&](char&, std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) out[j] = draw_sample(model, seed, j);
  });
  return out;
}

std::vector<MomentEstimate> estimate_moments(ModelId model, std::span<const Functional> fs, std::size_t n,
                                             std::uint64_t seed, const RunOptions& options) {
  require_samples(n, "estimate_moment");
  const std::vector<Functional> funcs(fs.begin(), fs.end());
  const auto chunks = run_chunks<MomentChunk>(n, options, [&](MomentChunk& acc, std::size_t begin, std::size_t end) {
    acc.sum.resize(funcs.size());
    acc.sum_sq.resize(funcs.size());
    for (std::size_t j = begin; j < end; ++j) {
      const auto t = draw_sample(model, seed, j);
      for (std::size_t k = 0; k < funcs.size(); ++k) {
        const double v = evaluate(funcs[k], t);
        acc.sum[k].add(v);
        acc.sum_sq[k].add(v * v);
      }
    }
  });
  std::vector<MomentEstimate> out;
  out.reserve(funcs.size());
  for (std::size_t k = 0; k < funcs.size(); ++k) {
    ExactSum s1, s2;
    for (const auto& c : chunks) {
      s1.add(c.sum[k]);
      s2.add(c.sum_sq[k]);
    }
    out.push_back(from_sums(s1, s2, n, seed));
  }
  return out;
}

MomentEstimate estimate_moment(ModelId model, Functional f, std::size_t n, std::uint64_t seed,
                               const RunOptions& options) {
  const Functional fs[] = {f};
  return estimate_moments(model, fs, n, seed, options).front();
}

MomentEstimate estimate_obtuse(ModelId model, std::size_t n, std::uint64_t seed, const RunOptions& options) {
  require_samples(n, "estimate_obtuse");
  const auto chunks = run_chunks<std::uint64_t>(n, options, [&](std::uint64_t& hits, std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) hits += is_obtuse(draw_sample(model, seed, j)) ? 1 : 0;
  });
  return proportion(count_chunks(chunks), n, seed);
}

MomentEstimate estimate_acceptance(ModelId model, std::size_t n_trials, std::uint64_t seed,
                                   const RunOptions& options) {
  require_samples(n_trials, "estimate_acceptance");
  const auto chunks =
      run_chunks<std::uint64_t>(n_trials, options, [&](std::uint64_t& hits, std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
          SplitMix64 g(stream_seed(seed, j));
          const double u1 = g.uniform();
          const double u2 = g.uniform();
          hits += realize({model, u1, u2}).has_value() ? 1 : 0;
        }
      });
  return proportion(count_chunks(chunks), n_trials, seed);
}

Histogram histogram_variable(ModelId model, Variable v, std::size_t bins, std::size_t n, std::uint64_t seed,
                             const RunOptions& options) {
  if (bins < 10) throw std::invalid_argument("histogram_variable: need at least 10 bins");
  require_samples(n, "histogram_variable");
  const auto [lo, hi] = support_interval(model, v);
  const auto chunks = run_chunks<std::vector<std::uint64_t>>(
      n, options, [&](std::vector<std::uint64_t>& counts, std::size_t begin, std::size_t end) {
        counts.assign(bins, 0);
        for (std::size_t j = begin; j < end; ++j) {
          const auto t = draw_sample(model, seed, j);
          const double x = v == Variable::side_a ? t.a : v == Variable::side_c ? t.c : t.alpha;
          ++counts[bin_of(x, lo, hi, bins)];
        }
      });
  return merge_counts(uniform_edges(lo, hi, bins), chunks);
}

ChiSquareResult chi_square_fit(const Histogram& hist, const quad::GapIntegrand& density,
                               const std::vector<double>& singular_points) {
  if (hist.counts.empty() || hist.n_total == 0) throw std::invalid_argument("chi_square_fit: empty histogram");
  if (hist.edges.size() != hist.counts.size() + 1) throw std::invalid_argument("chi_square_fit: malformed histogram");
  const double n = static_cast<double>(hist.n_total);

  struct Group {
    double observed = 0, expected = 0;
  };
  std::vector<Group> groups;
  Group current;
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    const double lo = hist.edges[i], hi = hist.edges[i + 1];
    quad::IntegrationSpec spec;
    spec.absolute_tolerance = 1e-12;
    spec.relative_tolerance = 1e-10;
    spec.singular_endpoints = quad::Endpoint::both;
    for (double p : singular_points)
      if (p > lo && p < hi) spec.split_points.push_back(p);
    const auto r = quad::integrate_1d(density, lo, hi, spec);
    current.observed += static_cast<double>(hist.counts[i]);
    current.expected += n * r.value;
    if (current.expected >= minimum_expected_count) {
      groups.push_back(current);
      current = {};
    }
  }
  if (current.expected > 0 || current.observed > 0) {
    if (groups.empty()) throw std::invalid_argument("chi_square_fit: expected counts too small to form groups");
    groups.back().observed += current.observed;
    groups.back().expected += current.expected;
  }
  if (groups.size() < 2) throw std::invalid_argument("chi_square_fit: fewer than two groups after merging");

  ChiSquareResult out;
  for (const auto& g : groups) {
    const double d = g.observed - g.expected;
    out.statistic += d * d / g.expected;
  }
  out.groups = groups.size();
  out.degrees_of_freedom = static_cast<int>(groups.size()) - 1;
  out.p_value = boost::math::gamma_q(0.5 * out.degrees_of_freedom, 0.5 * out.statistic);
  return out;
}

ChiSquareResult chi_square_fit(const Histogram& hist, const std::function<double(double)>& density) {
  const quad::GapIntegrand g = [&density](const quad::Abscissa& x) { return density(x.value); };
  return chi_square_fit(hist, g);
}

ChiSquareResult chi_square_fit(const Histogram& hist, ModelId model, Variable v) {
  return chi_square_fit(hist, univariate_kernel(model, v), univariate_singular_points(model, v));
}

ChiSquareResult chi_square_homogeneity(const Histogram& first, const Histogram& second) {
  if (first.edges != second.edges) throw std::invalid_argument("chi_square_homogeneity: histograms differ in edges");
  if (first.n_total == 0 || second.n_total == 0) throw std::invalid_argument("chi_square_homogeneity: empty histogram");
  const double r = static_cast<double>(first.n_total), s = static_cast<double>(second.n_total);
  const double wr = std::sqrt(s / r), ws = std::sqrt(r / s);
  ChiSquareResult out;
  for (std::size_t i = 0; i < first.counts.size(); ++i) {
    const double ri = static_cast<double>(first.counts[i]), si = static_cast<double>(second.counts[i]);
    if (ri + si == 0) continue;
    const double d = wr * ri - ws * si;
    out.statistic += d * d / (ri + si);
    ++out.groups;
  }
  if (out.groups < 2) throw std::invalid_argument("chi_square_homogeneity: fewer than two occupied bins");
  out.degrees_of_freedom = static_cast<int>(out.groups) - 1;
  out.p_value = boost::math::gamma_q(0.5 * out.degrees_of_freedom, 0.5 * out.statistic);
  return out;
}

std::vector<std::pair<double, double>> gaussian_triangle_angles_3d(std::size_t n, std::uint64_t seed,
                                                                   const RunOptions& options) {
  if (n < 1) throw std::invalid_argument("gaussian_triangle_angles_3d: n must be positive");
  std::vector<std::pair<double, double>> out(n);
  run_chunks<char>(n, options, [&](char&, std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) out[j] = gaussian_angles(seed, j);
  });
  return out;
}

Histogram gaussian_alpha_histogram(std::size_t bins, std::size_t n, std::uint64_t seed, const RunOptions& options) {
  if (bins < 10) throw std::invalid_argument("gaussian_alpha_histogram: need at least 10 bins");
  require_samples(n, "gaussian_alpha_histogram");
  const auto chunks = run_chunks<std::vector<std::uint64_t>>(
      n, options, [&](std::vector<std::uint64_t>& counts, std::size_t begin, std::size_t end) {
        counts.assign(bins, 0);
        for (std::size_t j = begin; j < end; ++j) ++counts[bin_of(gaussian_angles(seed, j).first, 0.0, pi, bins)];
      });
  return merge_counts(uniform_edges(0.0, pi, bins), chunks);
}

}  // namespace tri::mc
