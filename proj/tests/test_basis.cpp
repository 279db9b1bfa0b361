#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kinhydro/errors.hpp"
#include "kinhydro/quadrature.hpp"
#include "kinhydro/velocity_basis.hpp"

using namespace kinhydro;

TEST(Quadrature, GaussHermiteReproducesNormalMoments)
{
  const auto rule = quad::gauss_hermite(8);
  const double expected[] = {1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0, 0.0, 105.0};
  for (int p = 0; p <= 8; ++p) {
    double s = 0.0;
    for (int i = 0; i < rule.size(); ++i)
      s += rule.weights[i] * std::pow(rule.nodes[i], p);
    EXPECT_NEAR(s, expected[p], 1e-12) << "moment " << p;
  }
}

TEST(Quadrature, GaussLegendreIntegratesPolynomials)
{
  const auto rule = quad::gauss_legendre(5, 0.0, 2.0);
  double s = 0.0;
  for (int i = 0; i < rule.size(); ++i)
    s += rule.weights[i] * std::pow(rule.nodes[i], 9);
  EXPECT_NEAR(s, std::pow(2.0, 10) / 10.0, 1e-10);
}

TEST(Quadrature, RadialRuleMatchesGammaMoments)
{
  // int_0^inf r^{p+m} e^{-r^2/2} dr = 2^{(p+m-1)/2} Gamma((p+m+1)/2)
  const int power = 2;
  const auto rule = quad::gauss_radial(10, power);
  for (int m = 0; m <= 12; ++m) {
    double s = 0.0;
    for (int i = 0; i < rule.size(); ++i)
      s += rule.weights[i] * std::pow(rule.nodes[i], m);
    const double q = power + m;
    const double exact = std::pow(2.0, (q - 1.0) / 2.0) * std::tgamma((q + 1.0) / 2.0);
    EXPECT_NEAR(s / exact, 1.0, 1e-11) << "m = " << m;
  }
}

TEST(Quadrature, SphereRuleAreaAndSecondMoment)
{
  for (int d : {2, 3}) {
    const auto rule = quad::sphere_rule(d, 6);
    double area = 0.0, x2 = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
      area += rule.weights[i];
      x2 += rule.weights[i] * rule.direction(i)[0] * rule.direction(i)[0];
    }
    EXPECT_NEAR(area, quad::sphere_area(d), 1e-12);
    EXPECT_NEAR(x2, quad::sphere_area(d) / d, 1e-12);
  }
  EXPECT_NEAR(quad::sphere_area(3), 4.0 * std::numbers::pi, 1e-14);
}

TEST(VelocityBasis, SizeMatchesBinomial)
{
  EXPECT_EQ(basis_size(2, 6), 28);
  EXPECT_EQ(basis_size(2, 8), 45);
  EXPECT_EQ(basis_size(3, 4), 35);
  EXPECT_EQ(VelocityBasis(2, 6).size(), 28);
}

TEST(VelocityBasis, GradedOrderPutsLinearTermsFirst)
{
  const VelocityBasis b(3, 3);
  EXPECT_EQ(b.multi_index(0), (MultiIndex{0, 0, 0}));
  EXPECT_EQ(b.multi_index(1), (MultiIndex{1, 0, 0}));
  EXPECT_EQ(b.multi_index(2), (MultiIndex{0, 1, 0}));
  EXPECT_EQ(b.multi_index(3), (MultiIndex{0, 0, 1}));
  EXPECT_EQ(b.flat_index({2, 0, 0}), 4);
  EXPECT_EQ(b.flat_index({4, 0, 0}), -1);
}

TEST(VelocityBasis, GramIsIdentity)
{
  for (int d : {2, 3}) {
    const VelocityBasis b(d, d == 2 ? 8 : 4);
    const Eigen::MatrixXd g = b.gram();
    EXPECT_LT((g - Eigen::MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(VelocityBasis, MultiplicationMatrixFollowsHermiteRecurrence)
{
  const VelocityBasis b(2, 6);
  const Eigen::MatrixXd m = b.multiplication_matrix(0);
  // x h_n = sqrt(n + 1) h_{n+1} + sqrt(n) h_{n-1}
  EXPECT_NEAR(m(b.flat_index({1, 0, 0}), 0), 1.0, 1e-13);
  EXPECT_NEAR(m(b.flat_index({2, 0, 0}), b.flat_index({1, 0, 0})), std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(m(b.flat_index({3, 1, 0}), b.flat_index({2, 1, 0})), std::sqrt(3.0), 1e-13);
  EXPECT_NEAR(m(b.flat_index({0, 1, 0}), 0), 0.0, 1e-13);
  EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(VelocityBasis, EvaluationMatchesClosedForm)
{
  const VelocityBasis b(2, 4);
  const double v[2] = {0.7, -1.3};
  const double m = std::exp(-(0.49 + 1.69) / 2.0) / (2.0 * std::numbers::pi);
  const int idx = b.flat_index({2, 1, 0});
  // He_2(x) = x^2 - 1, He_1(y) = y; normalized by sqrt(2! 1!).
  const double expected = (0.49 - 1.0) * -1.3 / std::sqrt(2.0) * std::sqrt(m);
  EXPECT_NEAR(b.eval_basis(idx, v), expected, 1e-14);
  EXPECT_NEAR(maxwellian(v), m, 1e-16);
}

TEST(VelocityBasis, KernelBasisIsOrthonormalCollisionInvariants)
{
  const VelocityBasis b(2, 6);
  const Eigen::MatrixXd k = b.kernel_basis();
  ASSERT_EQ(k.cols(), 4);
  EXPECT_LT((k.transpose() * k - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-13);
  // Energy invariant (|v|^2 - d)/sqrt(2d) M^{1/2} = (h_2(v1) + h_2(v2)) / 2 in normalized Hermite terms.
  EXPECT_NEAR(k(b.flat_index({2, 0, 0}), 3), std::sqrt(2.0) / 2.0, 1e-13);
  EXPECT_NEAR(k(b.flat_index({0, 2, 0}), 3), std::sqrt(2.0) / 2.0, 1e-13);
  const KernelProjector p = kernel_projector(b);
  EXPECT_LT((p.matrix * p.matrix - p.matrix).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(VelocityBasis, ProjectRecoversPolynomialCoefficients)
{
  const VelocityBasis b(2, 4);
  const Eigen::VectorXd c = b.project([](std::span<const double> v) { return v[0] * v[1]; });
  EXPECT_NEAR(c(b.flat_index({1, 1, 0})), 1.0, 1e-13);
  EXPECT_NEAR(c.squaredNorm(), 1.0, 1e-13);
}

TEST(VelocityBasis, FactoryRejectsBadInput)
{
  EXPECT_THROW(build_basis(2, 1), ValidationError);
  EXPECT_THROW(build_basis(4, 4), ValidationError);
  EXPECT_THROW(build_basis(2, 6, 3), ValidationError);
}
