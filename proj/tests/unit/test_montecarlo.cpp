#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "tri/constants.hpp"
#include "tri/montecarlo.hpp"

using namespace tri;

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::size_t big = 1'000'000;

void expect_within_4_sigma(const mc::MomentEstimate& e, double target) {
  EXPECT_LE(std::abs(e.value - target), 4 * e.std_error) << "value " << e.value << " target " << target;
}

}  // namespace

TEST(Streams, MixingFunctionIsFixed) {
  // SplitMix64 reference outputs for state 0
  mc::SplitMix64 g(0);
  EXPECT_EQ(g.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(g.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_NE(mc::stream_seed(1, 0), mc::stream_seed(1, 1));
  EXPECT_NE(mc::stream_seed(1, 0), mc::stream_seed(2, 0));
}

TEST(Streams, UniformsInOpenInterval) {
  mc::SplitMix64 g(123);
  for (int i = 0; i < 100000; ++i) {
    const double u = g.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(ExactSum, CancellationAndOrder) {
  mc::ExactSum s;
  for (double x : {1e100, 1.0, -1e100, 1e-100}) s.add(x);
  EXPECT_EQ(s.value(), 1.0);
  mc::ExactSum t;
  for (int i = 0; i < 10; ++i) t.add(0.1);
  EXPECT_EQ(t.value(), 1.0);
  mc::ExactSum a, b;
  a.add(0.1);
  a.add(0.2);
  b.add(0.3);
  a.add(b);
  EXPECT_EQ(a.value(), 0.6);
  EXPECT_EQ(mc::ExactSum{}.value(), 0.0);
}

TEST(Sampling, DrawSampleMatchesBatch) {
  const auto batch = mc::sample_batch(ModelId::m2_quadratic_stick, 50, 9, {2, 7});
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const auto t = mc::draw_sample(ModelId::m2_quadratic_stick, 9, j);
    EXPECT_EQ(t.a, batch[j].a);
    EXPECT_EQ(t.gamma, batch[j].gamma);
  }
}

TEST(Moments, WithinFourSigma) {
  expect_within_4_sigma(mc::estimate_moment(ModelId::m1_perimeter, Functional::ab, big, 3), 5.0 / 48);
  expect_within_4_sigma(mc::estimate_moment(ModelId::m3_two_piece, Functional::c, big, 3), pi / 4);
  expect_within_4_sigma(mc::estimate_moment(ModelId::m6_eighth_sphere, Functional::alphabeta, big, 3), 0.8093206054);
}

TEST(Moments, EstimateFields) {
  const auto e = mc::estimate_moment(ModelId::m4_quadratic_two_piece, Functional::c2, 5000, 77);
  EXPECT_EQ(e.n, 5000u);
  EXPECT_EQ(e.seed, 77u);
  // c^2 = 1 - 2ab cos(gamma) has nonzero spread
  EXPECT_GT(e.std_error, 0.0);
  EXPECT_THROW(mc::estimate_moment(ModelId::m1_perimeter, Functional::a, 999, 0), std::invalid_argument);
}

TEST(Moments, JointPassMatchesSingle) {
  const std::vector<Functional> fs = {Functional::a, Functional::alpha2};
  const auto joint = mc::estimate_moments(ModelId::m5_quarter_circle, fs, 20000, 5);
  ASSERT_EQ(joint.size(), 2u);
  EXPECT_EQ(joint[0].value, mc::estimate_moment(ModelId::m5_quarter_circle, Functional::a, 20000, 5).value);
  EXPECT_EQ(joint[1].value, mc::estimate_moment(ModelId::m5_quarter_circle, Functional::alpha2, 20000, 5).value);
}

TEST(Obtuse, WithinFourSigma) {
  expect_within_4_sigma(mc::estimate_obtuse(ModelId::m1_perimeter, big, 11), 9 - 12 * std::log(2.0));
  expect_within_4_sigma(mc::estimate_obtuse(ModelId::m4_quadratic_two_piece, big, 11), 1.5 - 1 / std::sqrt(2.0));
  expect_within_4_sigma(mc::estimate_obtuse(ModelId::m6_eighth_sphere, big, 11), 0.6597451305);
}

TEST(Acceptance, WithinFourSigma) {
  expect_within_4_sigma(mc::estimate_acceptance(ModelId::m1_perimeter, big, 13), 0.25);
  const auto m3 = mc::estimate_acceptance(ModelId::m3_two_piece, big, 13);
  EXPECT_EQ(m3.value, 1.0);
  EXPECT_EQ(m3.std_error, 0.0);
  expect_within_4_sigma(mc::estimate_acceptance(ModelId::m2_quadratic_stick, big, 13), std::sqrt(3.0) * pi / 9);
}

TEST(Histogram, TwoPieceSideIsFlat) {
  const auto h = mc::histogram_variable(ModelId::m3_two_piece, Variable::side_a, 10, 100000, 1);
  ASSERT_EQ(h.counts.size(), 10u);
  ASSERT_EQ(h.edges.size(), 11u);
  EXPECT_EQ(h.edges.front(), 0.0);
  EXPECT_EQ(h.edges.back(), 1.0);
  EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}), h.n_total);
  for (auto c : h.counts) EXPECT_NEAR(static_cast<double>(c), 10000.0, 4 * std::sqrt(9000.0));
}

TEST(Histogram, QuadraticTwoPieceSideIncreases) {
  const auto h = mc::histogram_variable(ModelId::m4_quadratic_two_piece, Variable::side_c, 20, 100000, 1);
  ASSERT_EQ(h.counts.size(), 20u);
  EXPECT_NEAR(h.edges.back(), std::sqrt(2.0), 1e-15);
  for (std::size_t i = 1; i < h.counts.size(); ++i) EXPECT_GT(h.counts[i], h.counts[i - 1]) << i;
  // expected count in bin i is proportional to its centre
  const double w = h.edges[1] - h.edges[0];
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double centre = 0.5 * (h.edges[i] + h.edges[i + 1]);
    const double expected = 100000 * centre * w;
    EXPECT_NEAR(static_cast<double>(h.counts[i]), expected, 5 * std::sqrt(expected));
  }
}

TEST(Histogram, Preconditions) {
  EXPECT_THROW(mc::histogram_variable(ModelId::m3_two_piece, Variable::side_a, 10, 0, 1), std::invalid_argument);
  EXPECT_THROW(mc::histogram_variable(ModelId::m3_two_piece, Variable::side_a, 9, 10000, 1), std::invalid_argument);
  EXPECT_THROW(mc::histogram_variable(ModelId::m1_perimeter, Variable::side_c, 10, 10000, 1), std::invalid_argument);
}

TEST(ChiSquare, GoodFitAndMisfit) {
  const auto h3 = mc::histogram_variable(ModelId::m3_two_piece, Variable::side_a, 50, big, 21);
  const auto fit = mc::chi_square_fit(h3, [](double) { return 1.0; });
  EXPECT_GT(fit.p_value, 1e-3);
  EXPECT_EQ(fit.degrees_of_freedom, 49);

  const auto h1 = mc::histogram_variable(ModelId::m1_perimeter, Variable::angle_alpha, 50, big, 21);
  EXPECT_GT(mc::chi_square_fit(h1, ModelId::m1_perimeter, Variable::angle_alpha).p_value, 1e-3);
  const auto misfit = mc::chi_square_fit(h1, ModelId::m2_quadratic_stick, Variable::angle_alpha);
  EXPECT_LT(misfit.p_value, 1e-6);
}

TEST(ChiSquare, SingularDensity) {
  const auto h = mc::histogram_variable(ModelId::m5_quarter_circle, Variable::side_c, 50, 200000, 4);
  EXPECT_GT(mc::chi_square_fit(h, ModelId::m5_quarter_circle, Variable::side_c).p_value, 1e-3);
}

TEST(ChiSquare, Merging) {
  mc::Histogram h;
  for (int i = 0; i <= 10; ++i) h.edges.push_back(i / 10.0);
  h.counts = {2, 2, 2, 2, 2, 2, 2, 2, 2, 2};
  h.n_total = 20;
  // each bin expects 2: groups of three, the last bin joins the third group
  const auto r = mc::chi_square_fit(h, [](double) { return 1.0; });
  EXPECT_EQ(r.groups, 3u);
  EXPECT_EQ(r.degrees_of_freedom, 2);
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
  h.counts.assign(10, 0);
  h.n_total = 0;
  EXPECT_THROW(mc::chi_square_fit(h, [](double) { return 1.0; }), std::invalid_argument);
}

TEST(ChiSquare, Homogeneity) {
  const auto a = mc::histogram_variable(ModelId::m3_two_piece, Variable::side_a, 20, 50000, 1);
  const auto b = mc::histogram_variable(ModelId::m3_two_piece, Variable::side_a, 20, 50000, 2);
  EXPECT_GT(mc::chi_square_homogeneity(a, b).p_value, 1e-3);
  const auto c = mc::histogram_variable(ModelId::m1_perimeter, Variable::side_a, 20, 50000, 2);
  EXPECT_THROW(mc::chi_square_homogeneity(a, c), std::invalid_argument);
}

TEST(Gaussian, AnglesAndMean) {
  const auto pairs = mc::gaussian_triangle_angles_3d(big, 8);
  ASSERT_EQ(pairs.size(), big);
  double sum = 0, sum2 = 0;
  for (const auto& [x, y] : pairs) {
    ASSERT_GT(x, 0.0);
    ASSERT_GT(y, 0.0);
    ASSERT_LT(x + y, pi);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / big;
  const double sd = std::sqrt((sum2 / big - mean * mean) * big / (big - 1));
  EXPECT_LE(std::abs(mean - pi / 3), 4 * sd / std::sqrt(static_cast<double>(big)));
}

TEST(Gaussian, MatchesQuadraticStickAngles) {
  const auto g = mc::gaussian_alpha_histogram(50, big, 8);
  EXPECT_GT(mc::chi_square_fit(g, ModelId::m2_quadratic_stick, Variable::angle_alpha).p_value, 1e-3);
  const auto m2 = mc::histogram_variable(ModelId::m2_quadratic_stick, Variable::angle_alpha, 50, big, 8);
  EXPECT_GT(mc::chi_square_homogeneity(g, m2).p_value, 1e-3);
}

TEST(Reproducibility, ThreadsAndChunkSize) {
  const auto base = mc::estimate_moment(ModelId::m6_eighth_sphere, Functional::a2, 200000, 42, {1, 1000});
  for (mc::RunOptions o : {mc::RunOptions{4, 1000}, mc::RunOptions{1, 100000}, mc::RunOptions{3, 65536}}) {
    const auto e = mc::estimate_moment(ModelId::m6_eighth_sphere, Functional::a2, 200000, 42, o);
    EXPECT_EQ(e.value, base.value);
    EXPECT_EQ(e.std_error, base.std_error);
  }
  const auto h1 = mc::histogram_variable(ModelId::m1_perimeter, Variable::angle_alpha, 30, 50000, 3, {1, 1000});
  const auto h4 = mc::histogram_variable(ModelId::m1_perimeter, Variable::angle_alpha, 30, 50000, 3, {4, 777});
  EXPECT_EQ(h1.counts, h4.counts);
  const auto g1 = mc::gaussian_triangle_angles_3d(5000, 3, {1, 1000});
  const auto g3 = mc::gaussian_triangle_angles_3d(5000, 3, {3, 64});
  EXPECT_EQ(g1, g3);
}

TEST(Reproducibility, SeedChangesResult) {
  EXPECT_NE(mc::estimate_moment(ModelId::m1_perimeter, Functional::a, 5000, 1).value,
            mc::estimate_moment(ModelId::m1_perimeter, Functional::a, 5000, 2).value);
}

TEST(RunOptions, ExplicitThreadsWin) {
  EXPECT_EQ(mc::resolve_threads({3, 10}), 3u);
  EXPECT_GE(mc::resolve_threads({}), 1u);
}
