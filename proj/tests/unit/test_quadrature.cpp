#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tri/models.hpp"
#include "tri/quadrature.hpp"

namespace quad = tri::quad;
using quad::Abscissa;
using quad::Endpoint;

namespace {
constexpr double pi = std::numbers::pi;

quad::IntegrationSpec singular(Endpoint e) {
  quad::IntegrationSpec s;
  s.singular_endpoints = e;
  return s;
}
}  // namespace

TEST(Integrate1D, Polynomials) {
  const auto r = quad::integrate_1d([](double x) { return 8 * x; }, 0.0, 0.5);
  EXPECT_NEAR(r.value, 1.0, 1e-14);
  EXPECT_TRUE(r.converged);
  EXPECT_GT(r.evaluations, 0u);
  EXPECT_EQ(quad::integrate_1d([](double) { return 0.0; }, 0.0, 1.0).value, 0.0);
}

TEST(Integrate1D, ArcsineWallGapAware) {
  const quad::GapIntegrand f = [](const Abscissa& x) {
    return 1 / std::sqrt(quad::distance_to(x, 1.0) * (1 + x.value));
  };
  const auto r = quad::integrate_1d(f, 0.0, 1.0, singular(Endpoint::upper));
  EXPECT_NEAR(r.value, pi / 2, 1e-13);
  EXPECT_TRUE(r.converged);
}

TEST(Integrate1D, ArcsineWallPlainDouble) {
  // 1 - x rounds near the wall, which caps the attainable accuracy.
  const auto r = quad::integrate_1d([](double x) { return 1 / std::sqrt(1 - x * x); }, 0.0, 1.0,
                                    singular(Endpoint::upper));
  EXPECT_NEAR(r.value, pi / 2, 1e-7);
}

TEST(Integrate1D, EndpointSingularities) {
  const quad::GapIntegrand inv_sqrt = [](const Abscissa& x) { return 1 / std::sqrt(x.upper_gap); };
  EXPECT_NEAR(quad::integrate_1d(inv_sqrt, 0.0, 1.0, singular(Endpoint::upper)).value, 2.0, 1e-10);
  const quad::GapIntegrand log_wall = [](const Abscissa& x) { return -std::log(x.upper_gap); };
  EXPECT_NEAR(quad::integrate_1d(log_wall, 0.0, 1.0, singular(Endpoint::upper)).value, 1.0, 1e-10);
  EXPECT_NEAR(
      quad::integrate_1d([](double x) { return 1 / std::sqrt(x); }, 0.0, 1.0, singular(Endpoint::lower)).value, 2.0,
      1e-10);
}

TEST(Integrate1D, InteriorSplitPoint) {
  // |x - 1|^(-1/2) on (0, 2) = 4
  quad::IntegrationSpec s;
  s.split_points = {1.0};
  const quad::GapIntegrand f = [](const Abscissa& x) { return 1 / std::sqrt(quad::distance_to(x, 1.0)); };
  const auto r = quad::integrate_1d(f, 0.0, 2.0, s);
  EXPECT_NEAR(r.value, 4.0, 1e-12);
  EXPECT_TRUE(r.converged);
}

TEST(Integrate1D, Linearity) {
  auto f = [](double x) { return std::exp(-x) * std::sin(3 * x); };
  auto g = [](double x) { return x * x * std::cos(x); };
  const double a = 2.5, b = -0.75;
  const double lhs = quad::integrate_1d([&](double x) { return a * f(x) + b * g(x); }, 0.0, 2.0).value;
  const double rhs = a * quad::integrate_1d(f, 0.0, 2.0).value + b * quad::integrate_1d(g, 0.0, 2.0).value;
  EXPECT_NEAR(lhs, rhs, 1e-12);
}

TEST(Integrate1D, Deterministic) {
  auto f = [](double x) { return std::log(x) * std::sqrt(1 - x); };
  const auto r1 = quad::integrate_1d(f, 0.0, 1.0, singular(Endpoint::both));
  const auto r2 = quad::integrate_1d(f, 0.0, 1.0, singular(Endpoint::both));
  EXPECT_EQ(r1.value, r2.value);
  EXPECT_EQ(r1.error_estimate, r2.error_estimate);
  EXPECT_EQ(r1.evaluations, r2.evaluations);
}

TEST(Integrate1D, Errors) {
  EXPECT_THROW(quad::integrate_1d([](double x) { return x; }, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(quad::integrate_1d([](double x) { return x; }, 0.0, INFINITY), std::invalid_argument);
  quad::IntegrationSpec bad;
  bad.absolute_tolerance = 0;
  EXPECT_THROW(quad::integrate_1d([](double x) { return x; }, 0.0, 1.0, bad), std::invalid_argument);
  bad = {};
  bad.max_evaluations = 10;
  EXPECT_THROW(quad::integrate_1d([](double x) { return x; }, 0.0, 1.0, bad), std::invalid_argument);
  EXPECT_THROW(quad::integrate_1d([](double x) { return x > 0.3 ? NAN : x; }, 0.0, 1.0), std::domain_error);
}

TEST(Integrate1D, BudgetExhaustion) {
  quad::IntegrationSpec s;
  s.max_evaluations = 100;
  s.absolute_tolerance = 1e-15;
  s.relative_tolerance = 1e-15;
  const auto r = quad::integrate_1d([](double x) { return std::sin(200 * x); }, 0.0, 10.0, s);
  EXPECT_FALSE(r.converged);
}

TEST(Integrate1D, ConvergedImpliesErrorWithinTolerance) {
  const auto r = quad::integrate_1d([](double x) { return std::exp(x); }, 0.0, 3.0);
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.error_estimate, std::max(1e-10, 1e-10 * std::abs(r.value)));
}

TEST(Integrate2D, UnitSquare) {
  quad::Region sq{0.0, 1.0, Endpoint::none, {}, [](const Abscissa&) { return quad::Section{0.0, 1.0}; }};
  EXPECT_NEAR(quad::integrate_2d([](double, double) { return 1.0; }, sq).value, 1.0, 1e-14);
  const auto boxed = quad::integrate_2d([](double, double) { return 1.0; }, [](double, double) { return true; },
                                        {0, 1, 0, 1});
  EXPECT_NEAR(boxed.value, 1.0, 1e-12);
}

TEST(Integrate2D, PerimeterSideDensityByIndicator) {
  const auto inside = [](double x, double y) { return x < 0.5 && y < 0.5 && x + y > 0.5; };
  const auto r = quad::integrate_2d([](double, double) { return 8.0; }, inside, {0, 0.5, 0, 0.5});
  EXPECT_NEAR(r.value, 1.0, 1e-8);
}

TEST(Integrate2D, TwoPieceAngleDensityOnSimplex) {
  quad::Region simplex{0.0, pi, Endpoint::both, {},
                       [](const Abscissa& x) { return quad::Section{0.0, pi - x.value, Endpoint::both}; }};
  const auto f = [](double x, double y) { return tri::angle_density(tri::ModelId::m3_two_piece, x, y); };
  const auto r = quad::integrate_2d(f, simplex);
  EXPECT_NEAR(r.value, 1.0, 1e-8);
}

TEST(Integrate2D, TriangleMoment) {
  // int_0^1 int_0^(1-x) x y dy dx = 1/24
  quad::Region tri{0.0, 1.0, Endpoint::none, {},
                   [](const Abscissa& x) { return quad::Section{0.0, x.upper_gap}; }};
  EXPECT_NEAR(quad::integrate_2d([](double x, double y) { return x * y; }, tri).value, 1.0 / 24, 1e-14);
}

TEST(Integrate2D, EmptySectionsContributeNothing) {
  quad::Region half{0.0, 2.0, Endpoint::none, {1.0}, [](const Abscissa& x) -> std::optional<quad::Section> {
                      if (x.value > 1.0) return std::nullopt;
                      return quad::Section{0.0, 1.0};
                    }};
  EXPECT_NEAR(quad::integrate_2d([](double, double) { return 3.0; }, half).value, 3.0, 1e-13);
}

TEST(Integrate2D, Errors) {
  quad::Region none{0.0, 1.0};
  EXPECT_THROW(quad::integrate_2d([](double, double) { return 1.0; }, none), std::invalid_argument);
  EXPECT_THROW(
      quad::integrate_2d([](double, double) { return 1.0; }, [](double, double) { return true; }, {1, 0, 0, 1}),
      std::invalid_argument);
}
