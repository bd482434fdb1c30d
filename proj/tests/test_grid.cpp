#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dsep/error.hpp"
#include "dsep/grid.hpp"

using namespace dsep;

TEST(Grid, PixelIndexConvention) {
  EXPECT_EQ(pixel_index(4, 1, 1), 0u);
  EXPECT_EQ(pixel_index(4, 2, 1), 1u);
  EXPECT_EQ(pixel_index(4, 1, 2), 4u);
  EXPECT_EQ(pixel_index(4, 4, 4), 15u);
  EXPECT_THROW(pixel_index(4, 0, 1), ArgumentError);
  EXPECT_THROW(pixel_index(4, 5, 1), ArgumentError);
}

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(Grid2(0), ArgumentError);
  EXPECT_THROW(Grid2(3, std::vector<double>(8)), ArgumentError);
}

TEST(Grid, MeshAndCoordinates) {
  Grid2 g(5);
  EXPECT_DOUBLE_EQ(g.mesh(), 0.25);
  EXPECT_DOUBLE_EQ(g.coord(0), 0.0);
  EXPECT_DOUBLE_EQ(g.coord(4), 1.0);
}

TEST(L0Norm, ZeroBlock) {
  CoeffBlock b(std::vector<double>(10, 0.0), {std::vector<double>(5, 0.0)});
  EXPECT_EQ(l0_norm(b), 0u);
}

TEST(L0Norm, SingleSpike) {
  std::vector<double> yf(10, 0.0);
  yf[3] = 1.0;
  CoeffBlock b(yf, {});
  EXPECT_EQ(l0_norm(b), 1u);
  EXPECT_EQ(b.support_f(), std::vector<std::size_t>{3});
}

TEST(L0Norm, CountsAcrossBlocksAndIgnoresOrder) {
  std::mt19937_64 rng(1);
  std::vector<double> yf(2000, 0.0);
  for (std::size_t k = 0; k < 500; ++k) yf[4 * k + 1] = 1.0 + static_cast<double>(k);
  std::vector<std::vector<double>> yg(5, std::vector<double>(961, 0.0));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < 100; ++k) yg[i][(k * 7 + i) % 961] = -0.5 - static_cast<double>(k);
  CoeffBlock b(yf, yg);
  EXPECT_EQ(l0_norm(b), 1000u);
  std::size_t direct = 0;
  for (double v : yf) direct += v != 0.0;
  for (const auto& g : yg)
    for (double v : g) direct += v != 0.0;
  EXPECT_EQ(direct, 1000u);
  auto perm = yg;
  std::shuffle(perm.begin(), perm.end(), rng);
  EXPECT_EQ(l0_norm(CoeffBlock(yf, perm)), 1000u);
}

TEST(L0Norm, ThresholdIsAbsolute) {
  std::vector<double> v{1e-11, -1e-11, 2e-10, 0.0};
  EXPECT_EQ(count_nonzero(v), 1u);
  EXPECT_EQ(support(v), std::vector<std::size_t>{2});
}

TEST(Measurements, EpsilonFromParts) {
  MeasurementSet ms;
  ms.h = {Grid2(4), Grid2(4)};
  EXPECT_FALSE(ms.epsilon());
  ms.epsilon_override = 0.5;
  EXPECT_DOUBLE_EQ(*ms.epsilon(), 0.5);
  ms.eta = 0.1;
  ms.rho_f = 0.2;
  ms.rho_g = 0.3;
  EXPECT_DOUBLE_EQ(*ms.epsilon(), 0.6);
  ms.validate();
  ms.h.push_back(Grid2(8));
  EXPECT_THROW(ms.validate(), ArgumentError);
}

TEST(LogTransforms, ConstantOneMapsToZero) {
  const auto l = to_log(Grid2(4, 1.0));
  for (double v : l.vector()) EXPECT_EQ(v, 0.0);
}

TEST(LogTransforms, RoundTrip) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.01, 50.0), w(-4.0, 4.0);
  Grid2 g(16), h(16);
  for (auto& x : g.values()) x = u(rng);
  for (auto& x : h.values()) x = w(rng);
  const auto a = from_log(to_log(g));
  const auto b = to_log(from_log(h));
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(a[i], g[i], 1e-12 * g[i]);
    EXPECT_NEAR(b[i], h[i], 1e-12 * std::max(1.0, std::abs(h[i])));
  }
}

TEST(LogTransforms, ZeroEntryNamesPixel) {
  Grid2 g(4, 1.0);
  g[6] = 0.0;
  try {
    to_log(g);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.index(), 6u);
  }
}

TEST(RelativeLogError, IdenticalIsZero) {
  Grid2 g(8, 2.5);
  g[3] = 7.0;
  EXPECT_EQ(relative_log_error(g, g), 0.0);
}

TEST(RelativeLogError, ScaledConstant) {
  const double e = std::exp(1.0);
  EXPECT_NEAR(relative_log_error(Grid2(8, e * e), Grid2(8, e)), 1.0, 1e-14);
}

TEST(RelativeLogError, ExactFormula) {
  Grid2 a(2, std::vector<double>{1.0, 2.0, 3.0, 4.0});
  Grid2 b(2, std::vector<double>{2.0, 2.0, 1.0, 5.0});
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    num += std::pow(std::log(a[i]) - std::log(b[i]), 2);
    den += std::pow(std::log(b[i]), 2);
  }
  EXPECT_NEAR(relative_log_error(a, b), std::sqrt(num / den), 1e-15);
}

TEST(RelativeLogError, NonPositiveThrows) {
  Grid2 a(2, 1.5);
  a[1] = -1.0;
  EXPECT_THROW(relative_log_error(a, Grid2(2, 2.0)), DomainError);
}

TEST(RelativeInteriorError, IgnoresBand) {
  Grid2 truth(10, 2.0), v(10, 2.0);
  v(0, 0) = 100.0;
  v(1, 5) = 100.0;
  EXPECT_EQ(relative_interior_error(v, truth, 1), 0.0);
  v(5, 5) = 3.0;
  EXPECT_GT(relative_interior_error(v, truth, 1), 0.0);
}
