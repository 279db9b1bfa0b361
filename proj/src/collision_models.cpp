#include "kinhydro/collision_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kinhydro/errors.hpp"
#include "kinhydro/parallel.hpp"
#include "kinhydro/quadrature.hpp"
#include "kinhydro/simd/kernels.hpp"

namespace kinhydro {

std::string to_string(ModelKind kind)
{
  return kind == ModelKind::HardSphere ? "hard-sphere" : "bgk";
}

ModelKind parse_model_kind(const std::string& name)
{
  if (name == "hard-sphere" || name == "hs")
    return ModelKind::HardSphere;
  if (name == "bgk" || name == "BGK")
    return ModelKind::Bgk;
  throw ValidationError("unknown model kind '" + name + "' (expected hard-sphere or bgk)");
}

CollisionQuadrature CollisionQuadrature::exact_for(int max_degree)
{
  // Gamma integrands are polynomials of degree <= 3K in (V, r, omega) times |w|,
  // and of degree <= K in sigma.
  const int poly = 3 * max_degree;
  CollisionQuadrature q;
  q.center_nodes = poly / 2 + 1;
  q.radial_nodes = poly / 2 + 1;
  q.relative_degree = poly;
  q.scattering_degree = max_degree;
  return q;
}

RawCollisionTensors assemble_hard_sphere_tensors(const VelocityBasis& basis, const CollisionQuadrature& quadrature)
{
  const int d = basis.dim();
  const int n = basis.size();
  const std::size_t cube = static_cast<std::size_t>(n) * n * n;

  // V ~ N(0, I/2): standard Gauss-Hermite nodes scaled by 1/sqrt(2).
  const quad::Rule1D gh = quad::gauss_hermite(quadrature.center_nodes);
  const int nc = gh.size();
  const int n_center = (d == 2) ? nc * nc : nc * nc * nc;
  // |w| N(0, 2I)(w) dw in polar form: (4 pi)^{-d/2} r^d exp(-r^2/4) dr domega.
  quad::Rule1D radial = quad::gauss_radial(quadrature.radial_nodes, d, std::sqrt(2.0));
  const double radial_norm = std::pow(4.0 * std::numbers::pi, -0.5 * d);
  for (double& w : radial.weights)
    w *= radial_norm;
  const quad::SphereRule omega = quad::sphere_rule(d, quadrature.relative_degree);
  const quad::SphereRule sigma = quad::sphere_rule(d, quadrature.scattering_degree);
  const double area = quad::sphere_area(d);

  // Fixed chunking keeps the summation order independent of the thread count.
  const int chunks = std::min(n_center, 8);
  std::vector<std::vector<double>> gamma_parts(chunks, std::vector<double>(cube, 0.0));
  std::vector<Eigen::MatrixXd> nu_parts(chunks, Eigen::MatrixXd::Zero(n, n));
  const simd::KernelTable& kernels = simd::active();

  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t chunk) {
    std::vector<double>& gamma = gamma_parts[chunk];
    Eigen::MatrixXd& nu = nu_parts[chunk];
    std::vector<double> a(n), b(n), c(n), tmp(n);
    double center[3];
    double v[3];
    double vs[3];
    double vp[3];
    const int begin = n_center * static_cast<int>(chunk) / chunks;
    const int end = n_center * (static_cast<int>(chunk) + 1) / chunks;
    for (int ic = begin; ic < end; ++ic) {
      int rem = ic;
      double wc = 1.0;
      for (int ax = d - 1; ax >= 0; --ax) {
        const int q = rem % nc;
        rem /= nc;
        center[ax] = gh.nodes[q] / std::sqrt(2.0);
        wc *= gh.weights[q];
      }
      for (int ir = 0; ir < radial.size(); ++ir) {
        const double r = radial.nodes[ir];
        const double wr = wc * radial.weights[ir];
        for (int io = 0; io < omega.size(); ++io) {
          const double* om = omega.direction(io);
          const double w = wr * omega.weights[io];
          for (int ax = 0; ax < d; ++ax) {
            v[ax] = center[ax] + 0.5 * r * om[ax];
            vs[ax] = center[ax] - 0.5 * r * om[ax];
          }
          basis.eval_polynomials({v, static_cast<std::size_t>(d)}, b);
          basis.eval_polynomials({vs, static_cast<std::size_t>(d)}, a);
          std::fill(c.begin(), c.end(), 0.0);
          for (int is = 0; is < sigma.size(); ++is) {
            const double* sg = sigma.direction(is);
            for (int ax = 0; ax < d; ++ax)
              vp[ax] = center[ax] + 0.5 * r * sg[ax];
            basis.eval_polynomials({vp, static_cast<std::size_t>(d)}, tmp);
            const double ws = sigma.weights[is];
            for (int g = 0; g < n; ++g)
              c[g] += ws * tmp[g];
          }
          for (int g = 0; g < n; ++g)
            c[g] -= area * b[g];
          // gain - loss: p_a(v*) p_b(v) [p_g(v') - p_g(v)]
          kernels.outer3(gamma.data(), w, c.data(), a.data(), b.data(), static_cast<std::size_t>(n));
          const Eigen::Map<const Eigen::VectorXd> bv(b.data(), n);
          nu.noalias() += (w * area) * bv * bv.transpose();
        }
      }
    }
  });

  RawCollisionTensors raw;
  raw.dim = d;
  raw.max_degree = basis.max_degree();
  raw.quadrature = quadrature;
  raw.gamma.assign(cube, 0.0);
  Eigen::MatrixXd nu = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < chunks; ++k) {
    for (std::size_t i = 0; i < cube; ++i)
      raw.gamma[i] += gamma_parts[k][i];
    nu += nu_parts[k];
  }
  // Gamma(h1, h2) is the symmetrized form.
  for (int g = 0; g < n; ++g) {
    double* slab = raw.gamma.data() + static_cast<std::size_t>(g) * n * n;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double s = 0.5 * (slab[i * n + j] + slab[j * n + i]);
        slab[i * n + j] = s;
        slab[j * n + i] = s;
      }
    }
  }
  nu = 0.5 * (nu + nu.transpose()).eval();
  raw.nu.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      raw.nu[static_cast<std::size_t>(i) * n + j] = nu(i, j);
  return raw;
}

namespace {

void finalize_spectrum(CollisionModel& model)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.L);
  model.spectrum = es.eigenvalues();
  const int kernel_target = model.dim() + 2;
  int kernel = 0;
  double rest_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < model.spectrum.size(); ++i) {
    if (std::abs(model.spectrum(i)) <= 1e-6)
      ++kernel;
    else
      rest_max = std::max(rest_max, model.spectrum(i));
  }
  model.kernel_dimension = kernel;
  model.spectral_gap = (kernel < model.size()) ? -rest_max : 0.0;
  if (kernel != kernel_target) {
    std::ostringstream msg;
    msg << "collision model: kernel dimension " << kernel << " != d+2 = " << kernel_target
        << " (quadrature under-resolved?)";
    throw NumericalAbort(msg.str());
  }
}

}  // namespace

CollisionModel hard_sphere_from_tensors(std::shared_ptr<const VelocityBasis> basis, const RawCollisionTensors& raw)
{
  const int n = basis->size();
  if (raw.dim != basis->dim() || raw.max_degree != basis->max_degree() ||
      raw.gamma.size() != static_cast<std::size_t>(n) * n * n || raw.nu.size() != static_cast<std::size_t>(n) * n)
    throw ValidationError("hard_sphere_from_tensors: tensor shape does not match basis");

  CollisionModel model;
  model.kind = ModelKind::HardSphere;
  model.basis = basis;
  model.projector = kernel_projector(*basis);
  model.gamma = raw.gamma;
  model.has_gamma = true;
  model.gamma_source = "hard-sphere";
  model.quadrature = raw.quadrature;

  // L h = 2 Gamma(M^{1/2}, h); M^{1/2} is basis element 0.
  Eigen::MatrixXd l(n, n);
  for (int g = 0; g < n; ++g)
    for (int b = 0; b < n; ++b)
      l(g, b) = 2.0 * raw.gamma[(static_cast<std::size_t>(g) * n + 0) * n + b];
  l = 0.5 * (l + l.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
  const Eigen::VectorXd& ev = es.eigenvalues();
  double resid = 0.0;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= 1e-6)
      resid = std::max(resid, std::abs(ev(i)));
    else if (ev(i) > 1e-10)
      throw NumericalAbort("collision model: L has a positive eigenvalue " + std::to_string(ev(i)));
  }
  model.raw_kernel_residual = resid;

  // Remove the quadrature-noise component along the analytic kernel.
  const Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n) - model.projector.matrix;
  model.L = q * l * q;
  model.L = 0.5 * (model.L + model.L.transpose()).eval();

  model.nu = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(raw.nu.data(), n, n);
  model.K = model.L + model.nu;
  finalize_spectrum(model);
  return model;
}

CollisionModel assemble_hard_sphere(std::shared_ptr<const VelocityBasis> basis)
{
  const RawCollisionTensors raw =
      assemble_hard_sphere_tensors(*basis, CollisionQuadrature::exact_for(basis->max_degree()));
  return hard_sphere_from_tensors(std::move(basis), raw);
}

CollisionModel assemble_bgk(std::shared_ptr<const VelocityBasis> basis, double rate, const CollisionModel* gamma_source)
{
  if (!(rate > 0.0))
    throw ValidationError("assemble_bgk: relaxation rate must be positive");
  const int n = basis->size();
  CollisionModel model;
  model.kind = ModelKind::Bgk;
  model.basis = basis;
  model.projector = kernel_projector(*basis);
  model.relaxation_rate = rate;
  model.L = rate * (model.projector.matrix - Eigen::MatrixXd::Identity(n, n));
  model.nu = rate * Eigen::MatrixXd::Identity(n, n);
  model.K = rate * model.projector.matrix;
  if (gamma_source != nullptr && gamma_source->has_gamma) {
    if (gamma_source->size() != n)
      throw ValidationError("assemble_bgk: gamma source has a different basis size");
    model.gamma = gamma_source->gamma;
    model.has_gamma = true;
    model.gamma_source = gamma_source->gamma_source;
    model.quadrature = gamma_source->quadrature;
  } else {
    model.gamma.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    model.has_gamma = false;
    model.gamma_source = "none";
  }
  finalize_spectrum(model);
  return model;
}

Eigen::VectorXd CollisionModel::apply_gamma(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const
{
  const int n = size();
  if (f.size() != n || g.size() != n)
    throw ValidationError("apply_gamma: coefficient vector length mismatch");
  Eigen::VectorXd out(n);
  simd::active().bilinear(gamma.data(), f.data(), g.data(), out.data(), static_cast<std::size_t>(n));
  return out;
}

double collision_frequency(std::span<const double> v)
{
  const int d = static_cast<int>(v.size());
  if (d != 2 && d != 3)
    throw ValidationError("collision_frequency: dimension must be 2 or 3");
  double speed2 = 0.0;
  for (double c : v)
    speed2 += c * c;
  const double speed = std::sqrt(speed2);

  // nu(v) = |S| (2 pi)^{-d/2} int_S int_0^inf r^d exp(-|v - r omega|^2 / 2) dr domega.
  // With m = v . omega the radial integral is a truncated Gaussian moment in closed form.
  auto radial = [d](double m) {
    const double a = -m;
    const double ea = std::exp(-0.5 * a * a);
    double moments[4];
    moments[0] = std::sqrt(std::numbers::pi / 2.0) * std::erfc(a / std::sqrt(2.0));
    moments[1] = ea;
    moments[2] = a * ea + moments[0];
    moments[3] = a * a * ea + 2.0 * moments[1];
    // int_a^inf (s + m)^d exp(-s^2/2) ds
    if (d == 2)
      return moments[2] + 2.0 * m * moments[1] + m * m * moments[0];
    return moments[3] + 3.0 * m * moments[2] + 3.0 * m * m * moments[1] + m * m * m * moments[0];
  };

  const double area = quad::sphere_area(d);
  const double norm = area * std::pow(2.0 * std::numbers::pi, -0.5 * d);
  double acc = 0.0;
  if (d == 2) {
    constexpr int n_phi = 1024;
    for (int i = 0; i < n_phi; ++i) {
      const double m = speed * std::cos(2.0 * std::numbers::pi * i / n_phi);
      acc += (2.0 * std::numbers::pi / n_phi) * std::exp(-0.5 * (speed2 - m * m)) * radial(m);
    }
  } else {
    const quad::Rule1D gl = quad::gauss_legendre(96);
    for (int i = 0; i < gl.size(); ++i) {
      const double m = speed * gl.nodes[i];
      acc += 2.0 * std::numbers::pi * gl.weights[i] * std::exp(-0.5 * (speed2 - m * m)) * radial(m);
    }
  }
  return norm * acc;
}

}  // namespace kinhydro
