#include "kinhydro/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "kinhydro/errors.hpp"

namespace kinhydro::quad {

Rule1D golub_welsch(const std::vector<double>& diag, const std::vector<double>& offsq, double mu0)
{
  const int n = static_cast<int>(diag.size());
  if (n < 1 || static_cast<int>(offsq.size()) != n - 1)
    throw ValidationError("golub_welsch: inconsistent recurrence lengths");

  Eigen::VectorXd d(n);
  Eigen::VectorXd e(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k)
    d(k) = diag[k];
  for (int k = 0; k + 1 < n; ++k)
    e(k) = std::sqrt(offsq[k]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw NumericalAbort("golub_welsch: tridiagonal eigensolver failed");

  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

Rule1D gauss_hermite(int n)
{
  if (n < 1)
    throw ValidationError("gauss_hermite: n must be positive");
  std::vector<double> a(n, 0.0);
  std::vector<double> b(n - 1);
  for (int k = 1; k < n; ++k)
    b[k - 1] = k;
  Rule1D rule = golub_welsch(a, b, 1.0);
  // Symmetrize against round-off so odd moments vanish to machine precision.
  for (int k = 0; k < n / 2; ++k) {
    const int m = n - 1 - k;
    const double x = 0.5 * (rule.nodes[m] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[m] + rule.weights[k]);
    rule.nodes[k] = -x;
    rule.nodes[m] = x;
    rule.weights[k] = w;
    rule.weights[m] = w;
  }
  if (n % 2 == 1)
    rule.nodes[n / 2] = 0.0;
  return rule;
}

Rule1D gauss_legendre(int n, double a, double b)
{
  if (n < 1)
    throw ValidationError("gauss_legendre: n must be positive");
  std::vector<double> diag(n, 0.0);
  std::vector<double> off(n - 1);
  for (int k = 1; k < n; ++k)
    off[k - 1] = static_cast<double>(k) * k / (4.0 * k * k - 1.0);
  Rule1D rule = golub_welsch(diag, off, 2.0);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = mid + half * rule.nodes[k];
    rule.weights[k] *= half;
  }
  return rule;
}

Rule1D gauss_radial(int n, int power, double scale)
{
  if (n < 1 || power < 0 || scale <= 0.0)
    throw ValidationError("gauss_radial: invalid arguments");

  // Discretize x^power exp(-x^2/2) on [0, x_max]; the tail beyond x_max is below 1e-40.
  constexpr double x_max = 16.0;
  constexpr int panels = 320;
  const Rule1D panel_rule = gauss_legendre(16);
  std::vector<double> x;
  std::vector<double> w;
  x.reserve(panels * 16);
  w.reserve(panels * 16);
  const double h = x_max / panels;
  for (int p = 0; p < panels; ++p) {
    for (int q = 0; q < panel_rule.size(); ++q) {
      const double xi = h * (p + 0.5 * (panel_rule.nodes[q] + 1.0));
      x.push_back(xi);
      w.push_back(0.5 * h * panel_rule.weights[q] * std::pow(xi, power) * std::exp(-0.5 * xi * xi));
    }
  }

  // Discretized Stieltjes procedure for monic orthogonal polynomials.
  const std::size_t m = x.size();
  std::vector<double> p_prev(m, 0.0);
  std::vector<double> p_cur(m, 1.0);
  std::vector<double> diag(n);
  std::vector<double> offsq(n - 1);
  double norm_prev = 1.0;
  double mu0 = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    mu0 += w[i];
  for (int k = 0; k < n; ++k) {
    double nk = 0.0;
    double xk = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double pw = w[i] * p_cur[i] * p_cur[i];
      nk += pw;
      xk += pw * x[i];
    }
    diag[k] = xk / nk;
    const double bk = (k == 0) ? 0.0 : nk / norm_prev;
    if (k > 0)
      offsq[k - 1] = bk;
    for (std::size_t i = 0; i < m; ++i) {
      const double next = (x[i] - diag[k]) * p_cur[i] - bk * p_prev[i];
      p_prev[i] = p_cur[i];
      p_cur[i] = next;
    }
    norm_prev = nk;
  }

  Rule1D rule = golub_welsch(diag, offsq, mu0);
  const double jac = std::pow(scale, power + 1);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] *= scale;
    rule.weights[k] *= jac;
  }
  return rule;
}

double sphere_area(int dim)
{
  switch (dim) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * std::numbers::pi;
    case 3:
      return 4.0 * std::numbers::pi;
    default:
      throw ValidationError("sphere_area: dim must be 1, 2 or 3");
  }
}

SphereRule sphere_rule(int dim, int degree)
{
  if (degree < 0)
    throw ValidationError("sphere_rule: negative degree");
  SphereRule rule;
  rule.dim = dim;
  const double two_pi = 2.0 * std::numbers::pi;
  if (dim == 2) {
    const int n = degree + 1;
    for (int i = 0; i < n; ++i) {
      const double phi = two_pi * i / n;
      rule.directions.push_back(std::cos(phi));
      rule.directions.push_back(std::sin(phi));
      rule.weights.push_back(two_pi / n);
    }
  } else if (dim == 3) {
    const int n_theta = degree / 2 + 1;
    const int n_phi = degree + 1;
    const Rule1D gl = gauss_legendre(n_theta);
    for (int a = 0; a < n_theta; ++a) {
      const double ct = gl.nodes[a];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int b = 0; b < n_phi; ++b) {
        const double phi = two_pi * b / n_phi;
        rule.directions.push_back(st * std::cos(phi));
        rule.directions.push_back(st * std::sin(phi));
        rule.directions.push_back(ct);
        rule.weights.push_back(gl.weights[a] * two_pi / n_phi);
      }
    }
  } else {
    throw ValidationError("sphere_rule: dim must be 2 or 3");
  }
  return rule;
}

}  // namespace kinhydro::quad
