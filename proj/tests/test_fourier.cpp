#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kinhydro/errors.hpp"
#include "kinhydro/fourier_grid.hpp"

using namespace kinhydro;
using cd = std::complex<double>;

TEST(FourierGrid, RejectsInvalidSizes)
{
  EXPECT_THROW(FourierGrid(2, 12, 1.0), ValidationError);
  EXPECT_THROW(FourierGrid(2, 2, 1.0), ValidationError);
  EXPECT_THROW(FourierGrid(4, 8, 1.0), ValidationError);
  EXPECT_THROW(FourierGrid(2, 8, -1.0), ValidationError);
}

TEST(FourierGrid, ModeIndexingAndPartners)
{
  const FourierGrid g(2, 8, 2.0 * std::numbers::pi);
  EXPECT_EQ(g.size(), 64u);
  for (std::size_t m = 0; m < g.size(); ++m) {
    EXPECT_EQ(g.index_of(g.integer_mode(m)), m);
    EXPECT_EQ(g.partner(g.partner(m)), m);
  }
  const std::size_t m = g.index_of({2, -3, 0});
  const auto k = g.integer_mode(g.partner(m));
  EXPECT_EQ(k[0], -2);
  EXPECT_EQ(k[1], 3);
  EXPECT_TRUE(g.dealiased(g.index_of({2, -2, 0})));
  EXPECT_FALSE(g.dealiased(g.index_of({3, 0, 0})));
  EXPECT_EQ(g.retained_modes().size(), 25u);
}

TEST(FourierGrid, ForwardInverseRoundTripAndNormalization)
{
  const FourierGrid g(3, 8, 2.0);
  std::vector<cd> f(g.size() * 2);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Eigen::VectorXd x = g.point(p);
    f[2 * p] = 3.0 + std::cos(std::numbers::pi * x(0));
    f[2 * p + 1] = std::sin(std::numbers::pi * (x(1) + x(2)));
  }
  const auto orig = f;
  g.forward(f.data(), 2);
  EXPECT_NEAR(f[2 * g.index_of({0, 0, 0})].real(), 3.0, 1e-14);
  EXPECT_NEAR(f[2 * g.index_of({1, 0, 0})].real(), 0.5, 1e-14);
  EXPECT_NEAR(f[2 * g.index_of({0, 1, 1}) + 1].imag(), -0.5, 1e-14);
  g.inverse(f.data(), 2);
  for (std::size_t i = 0; i < f.size(); ++i)
    EXPECT_NEAR(std::abs(f[i] - orig[i]), 0.0, 1e-13);
}

TEST(FourierGrid, SpectralDerivativeOfSine)
{
  const double length = 3.0;
  const FourierGrid g(2, 16, length);
  const double k = 2.0 * std::numbers::pi / length;
  std::vector<cd> f(g.size());
  for (std::size_t p = 0; p < g.size(); ++p)
    f[p] = std::sin(2.0 * k * g.point(p)(1));
  g.forward(f.data(), 1);
  for (std::size_t m = 0; m < g.size(); ++m)
    f[m] *= cd{0.0, g.wavevector(m)(1)};
  g.inverse(f.data(), 1);
  for (std::size_t p = 0; p < g.size(); ++p)
    EXPECT_NEAR(f[p].real(), 2.0 * k * std::cos(2.0 * k * g.point(p)(1)), 1e-12);
  EXPECT_NEAR(g.wavevector_norm(g.index_of({3, 4, 0})), 5.0 * k, 1e-13);
}
