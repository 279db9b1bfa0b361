#include "kinhydro/hydro_limit.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "kinhydro/errors.hpp"

namespace kinhydro {

namespace {

double norm2(std::span<const double> v)
{
  double s = 0.0;
  for (double x : v)
    s += x * x;
  return s;
}

int unit_index(const VelocityBasis& basis, int axis, int degree)
{
  MultiIndex a{0, 0, 0};
  a[axis] = degree;
  return basis.flat_index(a);
}

}  // namespace

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& l, double cutoff)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (l + l.transpose()));
  Eigen::VectorXd inv = es.eigenvalues();
  for (Eigen::Index i = 0; i < inv.size(); ++i)
    inv(i) = std::abs(inv(i)) <= cutoff ? 0.0 : 1.0 / inv(i);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

PhiPsi solve_phi_psi(const CollisionModel& model)
{
  const VelocityBasis& basis = *model.basis;
  const int d = basis.dim();
  const Eigen::MatrixXd linv = pseudo_inverse(model.L);
  const Eigen::MatrixXd& pi = model.projector.matrix;

  PhiPsi out;
  auto solve = [&](const Eigen::VectorXd& rhs, double& residual) {
    if ((pi * rhs).norm() > 1e-8)
      throw ValidationError("right-hand side not orthogonal to Ker L: assembly defect");
    Eigen::VectorXd x = linv * rhs;
    residual = std::max(residual, (model.L * x - rhs).norm());
    out.kernel_component = std::max(out.kernel_component, (pi * x).norm());
    return x;
  };

  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXd rhs = basis.project([&](std::span<const double> v) {
        return (i == j ? norm2(v) / d : 0.0) - v[i] * v[j];
      });
      out.phi.push_back(solve(rhs, out.residual_phi));
      out.phi_rhs.push_back(std::move(rhs));
    }
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd rhs = basis.project([&](std::span<const double> v) {
      return v[i] * (0.5 * (d + 2) - 0.5 * norm2(v));
    });
    out.psi.push_back(solve(rhs, out.residual_psi));
    out.psi_rhs.push_back(std::move(rhs));
  }
  return out;
}

HydroCoefficients viscosities(const CollisionModel& model, const PhiPsi& sol)
{
  const int d = model.dim();
  HydroCoefficients c;
  double s1 = 0.0, s2 = 0.0;
  for (const auto& x : sol.phi)
    s1 += x.dot(model.L * x);
  for (const auto& x : sol.psi)
    s2 += x.dot(model.L * x);
  // Dirichlet-form sign: the quadratic forms are nonpositive.
  c.mu1 = -s1 / ((d - 1.0) * (d + 2.0));
  c.mu2 = -2.0 * s2 / (d * (d + 2.0));
  c.residual_phi = sol.residual_phi;
  c.residual_psi = sol.residual_psi;
  return c;
}

HydroCoefficients viscosities(const CollisionModel& model)
{
  return viscosities(model, solve_phi_psi(model));
}

FluidTriple FluidTriple::zeros(std::shared_ptr<const FourierGrid> grid)
{
  FluidTriple f;
  const auto n = static_cast<Eigen::Index>(grid->size());
  f.rho = Eigen::VectorXcd::Zero(n);
  f.theta = Eigen::VectorXcd::Zero(n);
  f.u.assign(grid->dim(), Eigen::VectorXcd::Zero(n));
  f.grid = std::move(grid);
  return f;
}

void leray_project(const FourierGrid& grid, std::vector<Eigen::VectorXcd>& u)
{
  const int d = grid.dim();
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const Eigen::VectorXd xi = grid.wavevector(m);
    const double k2 = xi.squaredNorm();
    if (k2 == 0.0)
      continue;
    std::complex<double> dot = 0.0;
    for (int a = 0; a < d; ++a)
      dot += xi(a) * u[a](m);
    for (int a = 0; a < d; ++a)
      u[a](m) -= xi(a) * dot / k2;
  }
}

FluidTriple well_prepare(const FluidTriple& in)
{
  const double d = in.grid->dim();
  FluidTriple out = in;
  out.rho = (2.0 / (d + 2.0)) * in.rho - (d / (d + 2.0)) * in.theta;
  out.theta = -out.rho;
  leray_project(*in.grid, out.u);
  return out;
}

Eigen::VectorXd lift_coefficients(const VelocityBasis& basis, double rho, const Eigen::VectorXd& u, double theta)
{
  Eigen::VectorXd c = Eigen::VectorXd::Zero(basis.size());
  c(0) = rho;
  for (int a = 0; a < basis.dim(); ++a) {
    c(unit_index(basis, a, 1)) = u(a);
    c(unit_index(basis, a, 2)) = theta / std::sqrt(2.0);
  }
  return c;
}

KineticState lift(const FluidTriple& fluid, const VelocityBasis& basis)
{
  KineticState g(fluid.grid, basis.size());
  const int d = basis.dim();
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t m = 0; m < fluid.grid->size(); ++m) {
    auto* c = g.mode(m);
    c[0] = fluid.rho(m);
    for (int a = 0; a < d; ++a) {
      c[unit_index(basis, a, 1)] = fluid.u[a](m);
      c[unit_index(basis, a, 2)] = s * fluid.theta(m);
    }
  }
  return g;
}

FluidTriple moments(const KineticState& state, const VelocityBasis& basis)
{
  FluidTriple f = FluidTriple::zeros(state.grid);
  const int d = basis.dim();
  const double s = std::sqrt(2.0) / d;
  for (std::size_t m = 0; m < state.grid->size(); ++m) {
    const auto* c = state.mode(m);
    f.rho(m) = c[0];
    std::complex<double> th = 0.0;
    for (int a = 0; a < d; ++a) {
      f.u[a](m) = c[unit_index(basis, a, 1)];
      th += c[unit_index(basis, a, 2)];
    }
    f.theta(m) = s * th;
  }
  return f;
}

}  // namespace kinhydro
