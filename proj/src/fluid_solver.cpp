#include "kinhydro/fluid_solver.hpp"

#include <cmath>
#include <sstream>

#include "kinhydro/errors.hpp"

namespace kinhydro {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

void truncate(const FourierGrid& grid, Eigen::VectorXcd& f)
{
  for (std::size_t m = 0; m < grid.size(); ++m)
    if (!grid.dealiased(m))
      f(static_cast<Eigen::Index>(m)) = 0.0;
}

}  // namespace

FluidState FluidState::from_triple(const FluidTriple& f, double mu1, double mu2)
{
  FluidState s;
  s.grid = f.grid;
  s.u = f.u;
  s.theta = f.theta;
  s.mu1 = mu1;
  s.mu2 = mu2;
  return s;
}

FluidTriple FluidState::to_triple() const
{
  FluidTriple f;
  f.grid = grid;
  f.u = u;
  f.theta = theta;
  f.rho = -theta;
  return f;
}

double FluidState::velocity_norm() const
{
  double s = 0.0;
  for (const auto& c : u)
    s += c.squaredNorm();
  return std::sqrt(s);
}

double FluidState::velocity_half_norm() const
{
  double s = 0.0;
  for (std::size_t m = 0; m < grid->size(); ++m) {
    const double k = grid->wavevector(m).norm();
    for (const auto& c : u)
      s += k * std::norm(c(static_cast<Eigen::Index>(m)));
  }
  return std::sqrt(s);
}

double FluidState::max_divergence() const
{
  double worst = 0.0;
  for (std::size_t m = 0; m < grid->size(); ++m) {
    const Eigen::VectorXd xi = grid->wavevector(m);
    cd div = 0.0;
    for (int a = 0; a < grid->dim(); ++a)
      div += xi(a) * u[a](static_cast<Eigen::Index>(m));
    worst = std::max(worst, std::abs(div));
  }
  return worst;
}

FluidNonlinear nsf_nonlinear(const FluidState& s)
{
  const FourierGrid& grid = *s.grid;
  const int d = grid.dim();
  const std::size_t n = grid.size();
  // Fields: u_a (d), du_a/dx_b (d*d), dtheta/dx_b (d).
  const int nf = d + d * d + d;
  std::vector<cd> buf(n * nf);
  for (std::size_t m = 0; m < n; ++m) {
    if (!grid.dealiased(m))
      continue;
    const Eigen::VectorXd xi = grid.wavevector(m);
    const auto mi = static_cast<Eigen::Index>(m);
    cd* row = buf.data() + m * nf;
    for (int a = 0; a < d; ++a) {
      row[a] = s.u[a](mi);
      for (int b = 0; b < d; ++b)
        row[d + a * d + b] = kI * xi(b) * s.u[a](mi);
    }
    for (int b = 0; b < d; ++b)
      row[d + d * d + b] = kI * xi(b) * s.theta(mi);
  }
  grid.inverse(buf.data(), nf);

  const int out_f = d + 1;
  std::vector<cd> out(n * out_f);
  for (std::size_t p = 0; p < n; ++p) {
    const cd* row = buf.data() + p * nf;
    cd* o = out.data() + p * out_f;
    for (int a = 0; a < d; ++a) {
      double adv = 0.0;
      for (int b = 0; b < d; ++b)
        adv += row[b].real() * row[d + a * d + b].real();
      o[a] = adv;
    }
    double adv = 0.0;
    for (int b = 0; b < d; ++b)
      adv += row[b].real() * row[d + d * d + b].real();
    o[d] = adv;
  }
  grid.forward(out.data(), out_f);

  FluidNonlinear nl;
  nl.u.assign(d, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n)));
  nl.theta = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t m = 0; m < n; ++m) {
    const auto mi = static_cast<Eigen::Index>(m);
    for (int a = 0; a < d; ++a)
      nl.u[a](mi) = -out[m * out_f + a];
    nl.theta(mi) = -out[m * out_f + d];
  }
  for (auto& c : nl.u)
    truncate(grid, c);
  truncate(grid, nl.theta);
  leray_project(grid, nl.u);
  return nl;
}

void nsf_step(FluidState& s, double dt)
{
  const FourierGrid& grid = *s.grid;
  const int d = grid.dim();
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXd eu(n), et(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double k2 = grid.wavevector(static_cast<std::size_t>(m)).squaredNorm();
    eu(m) = std::exp(-s.mu1 * k2 * dt);
    et(m) = std::exp(-s.mu2 * k2 * dt);
  }
  const FluidNonlinear n0 = nsf_nonlinear(s);
  FluidState mid = s;
  for (int a = 0; a < d; ++a)
    mid.u[a] = eu.cwiseProduct(s.u[a] + dt * n0.u[a]);
  mid.theta = et.cwiseProduct(s.theta + dt * n0.theta);
  const FluidNonlinear n1 = nsf_nonlinear(mid);
  for (int a = 0; a < d; ++a)
    s.u[a] = eu.cwiseProduct(s.u[a] + 0.5 * dt * n0.u[a]) + 0.5 * dt * n1.u[a];
  s.theta = et.cwiseProduct(s.theta + 0.5 * dt * n0.theta) + 0.5 * dt * n1.theta;
  s.t += dt;
  if (!std::isfinite(s.velocity_norm()) || !s.theta.allFinite()) {
    std::ostringstream msg;
    msg << "non-finite fluid state at t = " << s.t;
    throw NumericalAbort(msg.str());
  }
}

double energy_orthogonality(const FluidState& s)
{
  const FluidNonlinear nl = nsf_nonlinear(s);
  cd dot = 0.0;
  double nn = 0.0;
  for (int a = 0; a < s.grid->dim(); ++a) {
    dot += s.u[a].dot(nl.u[a]);
    nn += nl.u[a].squaredNorm();
  }
  const double scale = s.velocity_norm() * std::sqrt(nn);
  return scale > 0.0 ? std::abs(dot) / scale : 0.0;
}

EnergyRates energy_rates(const FluidState& s)
{
  const FluidNonlinear nl = nsf_nonlinear(s);
  EnergyRates r;
  for (int a = 0; a < s.grid->dim(); ++a)
    for (std::size_t m = 0; m < s.grid->size(); ++m) {
      const auto mi = static_cast<Eigen::Index>(m);
      const double k2 = s.grid->wavevector(m).squaredNorm();
      const cd rhs = -s.mu1 * k2 * s.u[a](mi) + nl.u[a](mi);
      r.rate += 2.0 * (std::conj(s.u[a](mi)) * rhs).real();
      r.dissipation -= 2.0 * s.mu1 * k2 * std::norm(s.u[a](mi));
    }
  return r;
}

NsfResult nsf_simulate(const FluidTriple& fluid_in, double T, double dt, double mu1, double mu2,
                       const std::function<void(const FluidState&)>& observer, double blowup_factor)
{
  if (!(T > 0.0) || !(dt > 0.0))
    throw ValidationError("nsf_simulate needs T > 0 and dt > 0");
  const long steps = std::lround(T / dt);
  if (std::abs(steps * dt - T) > 1e-9 * T)
    throw ValidationError("final time must be a multiple of the time step");
  NsfResult res;
  res.state = FluidState::from_triple(well_prepare(fluid_in), mu1, mu2);
  for (auto& c : res.state.u)
    truncate(*res.state.grid, c);
  truncate(*res.state.grid, res.state.theta);
  const double n0 = res.state.velocity_norm();
  if (observer)
    observer(res.state);
  for (long k = 0; k < steps; ++k) {
    nsf_step(res.state, dt);
    if (observer)
      observer(res.state);
    if (res.state.grid->dim() == 3 && n0 > 0.0 && res.state.velocity_norm() > blowup_factor * n0) {
      res.blew_up = true;
      res.t_star = res.state.t;
      break;
    }
  }
  return res;
}

}  // namespace kinhydro
