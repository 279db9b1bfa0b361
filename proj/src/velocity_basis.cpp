#include "kinhydro/velocity_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kinhydro/errors.hpp"

namespace kinhydro {

double maxwellian(std::span<const double> v)
{
  double r2 = 0.0;
  for (double c : v)
    r2 += c * c;
  const double d = static_cast<double>(v.size());
  return std::pow(2.0 * std::numbers::pi, -0.5 * d) * std::exp(-0.5 * r2);
}

int basis_size(int dim, int max_degree)
{
  // binomial(K + d, d)
  long long num = 1;
  long long den = 1;
  for (int i = 1; i <= dim; ++i) {
    num *= max_degree + i;
    den *= i;
  }
  return static_cast<int>(num / den);
}

namespace {

std::vector<MultiIndex> graded_indices(int dim, int max_degree)
{
  std::vector<MultiIndex> out;
  for (int deg = 0; deg <= max_degree; ++deg) {
    std::vector<MultiIndex> level;
    if (dim == 2) {
      for (int a = deg; a >= 0; --a)
        level.push_back({a, deg - a, 0});
    } else {
      for (int a = deg; a >= 0; --a)
        for (int b = deg - a; b >= 0; --b)
          level.push_back({a, b, deg - a - b});
    }
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace

VelocityBasis::VelocityBasis(int dim, int max_degree, int nodes_per_axis)
    : dim_(dim)
    , max_degree_(max_degree)
    , nodes_per_axis_(nodes_per_axis > 0 ? nodes_per_axis : 2 * max_degree + 2)
{
  if (dim != 2 && dim != 3)
    throw ValidationError("velocity basis: dimension must be 2 or 3");
  if (max_degree < 2)
    throw ValidationError("velocity basis: K >= 2 required to represent Ker L");
  if (nodes_per_axis_ < max_degree + 1)
    throw ValidationError("velocity basis: quadrature order must be >= K + 1");

  indices_ = graded_indices(dim, max_degree);

  const quad::Rule1D gh = quad::gauss_hermite(nodes_per_axis_);
  const int n = nodes_per_axis_;
  const int total = (dim == 2) ? n * n : n * n * n;
  nodes_.resize(static_cast<std::size_t>(total) * dim);
  node_weights_.resize(total);
  for (int i = 0; i < total; ++i) {
    int rem = i;
    double w = 1.0;
    for (int ax = dim - 1; ax >= 0; --ax) {
      const int q = rem % n;
      rem /= n;
      nodes_[static_cast<std::size_t>(i) * dim + ax] = gh.nodes[q];
      w *= gh.weights[q];
    }
    node_weights_[i] = w;
  }

  node_table_.resize(total, size());
  std::vector<double> row(size());
  for (int i = 0; i < total; ++i) {
    eval_polynomials({node(i), static_cast<std::size_t>(dim)}, row);
    for (int a = 0; a < size(); ++a)
      node_table_(i, a) = row[a];
  }
}

int VelocityBasis::flat_index(const MultiIndex& a) const
{
  const int deg = a[0] + a[1] + a[2];
  if (deg > max_degree_ || a[0] < 0 || a[1] < 0 || a[2] < 0)
    return -1;
  if (dim_ == 2 && a[2] != 0)
    return -1;
  const int offset = (deg == 0) ? 0 : basis_size(dim_, deg - 1);
  if (dim_ == 2)
    return offset + (deg - a[0]);
  // Within a level: a[0] descending, then a[1] descending.
  int pos = 0;
  for (int x = deg; x > a[0]; --x)
    pos += deg - x + 1;
  pos += (deg - a[0]) - a[1];
  return offset + pos;
}

void VelocityBasis::hermite_table(double x, int max_n, double* out)
{
  out[0] = 1.0;
  if (max_n >= 1)
    out[1] = x;
  for (int k = 1; k < max_n; ++k)
    out[k + 1] = (x * out[k] - std::sqrt(static_cast<double>(k)) * out[k - 1]) / std::sqrt(static_cast<double>(k + 1));
}

void VelocityBasis::eval_polynomials(std::span<const double> v, std::span<double> out) const
{
  double h[3][64];
  for (int ax = 0; ax < dim_; ++ax)
    hermite_table(v[ax], max_degree_, h[ax]);
  for (int a = 0; a < size(); ++a) {
    const MultiIndex& m = indices_[a];
    double p = h[0][m[0]] * h[1][m[1]];
    if (dim_ == 3)
      p *= h[2][m[2]];
    out[a] = p;
  }
}

double VelocityBasis::eval_basis(int flat, std::span<const double> v) const
{
  std::vector<double> p(size());
  eval_polynomials(v, p);
  return p[flat] * std::sqrt(maxwellian(v));
}

double VelocityBasis::integrate_against_maxwellian(const std::function<double(std::span<const double>)>& q) const
{
  double acc = 0.0;
  for (int i = 0; i < num_nodes(); ++i)
    acc += node_weights_[i] * q({node(i), static_cast<std::size_t>(dim_)});
  return acc;
}

Eigen::VectorXd VelocityBasis::project(const std::function<double(std::span<const double>)>& q) const
{
  Eigen::VectorXd c = Eigen::VectorXd::Zero(size());
  for (int i = 0; i < num_nodes(); ++i) {
    const double wq = node_weights_[i] * q({node(i), static_cast<std::size_t>(dim_)});
    c += wq * node_table_.row(i).transpose();
  }
  return c;
}

Eigen::MatrixXd VelocityBasis::gram() const
{
  Eigen::MatrixXd weighted = node_table_;
  for (int i = 0; i < num_nodes(); ++i)
    weighted.row(i) *= node_weights_[i];
  return node_table_.transpose() * weighted;
}

Eigen::MatrixXd VelocityBasis::multiplication_matrix(int axis) const
{
  // v h_n = sqrt(n+1) h_{n+1} + sqrt(n) h_{n-1}
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size(), size());
  for (int a = 0; a < size(); ++a) {
    MultiIndex up = indices_[a];
    up[axis] += 1;
    const int b = flat_index(up);
    if (b >= 0) {
      const double val = std::sqrt(static_cast<double>(indices_[a][axis] + 1));
      m(b, a) = val;
      m(a, b) = val;
    }
  }
  return m;
}

Eigen::MatrixXd VelocityBasis::kernel_basis() const
{
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(size(), dim_ + 2);
  k(0, 0) = 1.0;
  for (int i = 0; i < dim_; ++i) {
    MultiIndex e{0, 0, 0};
    e[i] = 1;
    k(flat_index(e), 1 + i) = 1.0;
  }
  const double c = 1.0 / std::sqrt(static_cast<double>(dim_));
  for (int i = 0; i < dim_; ++i) {
    MultiIndex e{0, 0, 0};
    e[i] = 2;
    k(flat_index(e), dim_ + 1) = c;
  }
  return k;
}

KernelProjector kernel_projector(const VelocityBasis& basis)
{
  KernelProjector p;
  p.basis = basis.kernel_basis();
  p.matrix = p.basis * p.basis.transpose();
  return p;
}

std::shared_ptr<const VelocityBasis> build_basis(int dim, int max_degree, int nodes_per_axis)
{
  return std::make_shared<const VelocityBasis>(dim, max_degree, nodes_per_axis);
}

}  // namespace kinhydro
