#include "kinhydro/harness.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>

#include "kinhydro/errors.hpp"

namespace kinhydro {

namespace {

using cd = std::complex<double>;

KineticState difference(const KineticState& a, const KineticState& b)
{
  KineticState out(a.grid, a.nv);
  out.t = a.t;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    out.coeffs[i] = a.coeffs[i] - b.coeffs[i];
  return out;
}

Eigen::VectorXcd mode_vector(const KineticState& g, std::size_t m)
{
  return Eigen::Map<const Eigen::VectorXcd>(g.mode(m), g.nv);
}

}  // namespace

NormSpec make_norm_spec(const VelocityBasis& basis, double ell, double k, double radius)
{
  const int d = basis.dim();
  if (!(ell > d / 2.0))
    throw ValidationError("l > d/2 required");
  if (!(k > d / 2.0 + 1.0))
    throw ValidationError("k > d/2+1 required");
  NormSpec spec;
  spec.ell = ell;
  spec.k = k;
  spec.nodes.push_back(Eigen::VectorXd::Zero(d));
  for (int i = 0; i < basis.num_nodes(); ++i) {
    Eigen::Map<const Eigen::VectorXd> v(basis.node(i), d);
    if (v.norm() <= radius && v.norm() > 0.0)
      spec.nodes.emplace_back(v);
  }
  return spec;
}

double xellk_norm(const KineticState& state, const VelocityBasis& basis, const NormSpec& spec)
{
  const auto nodes = static_cast<Eigen::Index>(spec.nodes.size());
  const int nv = state.nv;
  Eigen::MatrixXd phi(nodes, nv);
  std::vector<double> row(nv);
  Eigen::VectorXd vweight(nodes);
  for (Eigen::Index i = 0; i < nodes; ++i) {
    const auto& v = spec.nodes[i];
    basis.eval_polynomials(std::span<const double>(v.data(), v.size()), row);
    const double m12 = std::sqrt(maxwellian(std::span<const double>(v.data(), v.size())));
    for (int a = 0; a < nv; ++a)
      phi(i, a) = row[a] * m12;
    vweight(i) = std::pow(1.0 + v.norm(), spec.k);
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(nodes);
  const FourierGrid& grid = *state.grid;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const Eigen::VectorXcd c = mode_vector(state, m);
    if (c.squaredNorm() == 0.0)
      continue;
    const double w = std::pow(1.0 + grid.wavevector_norm(m), 2.0 * spec.ell);
    const Eigen::VectorXcd vals = phi.cast<cd>() * c;
    acc += w * vals.cwiseAbs2();
  }
  return (vweight.array() * acc.array().sqrt()).maxCoeff();
}

FluidTriple smooth_test_data(std::shared_ptr<const FourierGrid> grid, double amplitude)
{
  FluidTriple f = FluidTriple::zeros(grid);
  const int d = grid->dim();
  const double kx = 2.0 * std::numbers::pi / grid->box_length();
  for (std::size_t m = 0; m < grid->size(); ++m) {
    const Eigen::VectorXd x = grid->point(m);
    const auto mi = static_cast<Eigen::Index>(m);
    const double a = kx * x(0), b = kx * x(1);
    const double c = d == 3 ? kx * x(2) : 0.0;
    f.u[0](mi) = amplitude * std::sin(a) * std::cos(b) * (d == 3 ? std::cos(c) : 1.0);
    f.u[1](mi) = -amplitude * std::cos(a) * std::sin(b) * (d == 3 ? std::cos(c) : 1.0);
    f.theta(mi) = 0.5 * amplitude * (std::cos(a + b) + 0.5 * std::sin(2.0 * a - b));
    f.rho(mi) = 0.3 * amplitude * std::cos(b);
  }
  auto to_fourier = [&](Eigen::VectorXcd& v) { grid->forward(v.data(), 1); };
  for (auto& c : f.u)
    to_fourier(c);
  to_fourier(f.theta);
  to_fourier(f.rho);
  return f;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y)
{
  auto fit = [](const std::vector<double>& lx, const std::vector<double>& ly) {
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i] / n;
      my += ly[i] / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double r = ly[i] - f.intercept - f.slope * lx[i];
      rss += r * r;
    }
    const double sigma2 = lx.size() > 2 ? rss / (n - 2.0) : 0.0;
    f.stderr_slope = std::sqrt(sigma2 / sxx);
    f.points = static_cast<int>(lx.size());
    return std::pair{f, std::sqrt(sigma2)};
  };
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("slope fit needs at least two points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  auto [all, sigma_all] = fit(lx, ly);
  if (x.size() >= 5) {
    const auto largest = static_cast<std::size_t>(std::max_element(x.begin(), x.end()) - x.begin());
    std::vector<double> rx, ry;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (i != largest) {
        rx.push_back(lx[i]);
        ry.push_back(ly[i]);
      }
    auto [rest, sigma_rest] = fit(rx, ry);
    const double r = ly[largest] - rest.intercept - rest.slope * lx[largest];
    if (std::abs(r) > 3.0 * sigma_rest) {
      rest.dropped_largest = true;
      return rest;
    }
  }
  return all;
}

// ---------------------------------------------------------------------------

ConvergenceReport convergence_sweep(const CollisionModel& model, const HydroCoefficients& coeffs,
                                    const FluidTriple& data, const std::vector<double>& eps_list,
                                    const ConvergenceOptions& options, const NormSpec& spec)
{
  const VelocityBasis& basis = *model.basis;
  const auto grid = data.grid;
  const FluidTriple bar = well_prepare(data);
  const long steps = std::lround(options.T / options.dt);
  const long every = std::max(1L, steps / std::max(1, options.snapshots));

  // Reference NSF trajectory at the shared snapshot steps.
  std::vector<KineticState> reference;
  long counter = 0;
  nsf_simulate(bar, options.T, options.dt, coeffs.mu1, coeffs.mu2, [&](const FluidState& s) {
    if (counter++ % every == 0)
      reference.push_back(lift(s.to_triple(), basis));
  });

  ConvergenceReport report;
  for (double eps : eps_list) {
    ConvergenceRun run;
    run.eps = eps;
    const auto start = std::chrono::steady_clock::now();
    try {
      KineticOptions ko;
      ko.eps = eps;
      ko.dt = options.dt;
      ko.nonlinear = model.has_gamma;
      KineticSolver solver(model, grid, ko);
      KineticState g = lift(bar, basis);
      long k = 0;
      solver.simulate(g, options.T, [&](const KineticState& s) {
        if (k % every == 0) {
          const auto& ref = reference.at(static_cast<std::size_t>(k / every));
          run.t.push_back(s.t);
          run.error.push_back(xellk_norm(difference(s, ref), basis, spec));
          run.kinetic_norm.push_back(s.l2_norm());
        }
        ++k;
      });
      run.sup_error = *std::max_element(run.error.begin(), run.error.end());
      run.sup_norm = *std::max_element(run.kinetic_norm.begin(), run.kinetic_norm.end());
      run.ok = std::isfinite(run.sup_error);
    } catch (const NumericalAbort& e) {
      run.ok = false;
      run.failure = e.what();
    }
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.runs.push_back(std::move(run));
  }

  std::vector<double> xs, ys;
  for (const auto& r : report.runs)
    if (r.ok) {
      xs.push_back(r.eps);
      ys.push_back(r.sup_error);
    }
  report.fit_valid = xs.size() >= 4;
  if (xs.size() >= 2)
    report.fit = fit_loglog(xs, ys);
  // Strict decrease as eps decreases.
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < xs.size(); ++i)
    pairs.emplace_back(xs[i], ys[i]);
  std::sort(pairs.begin(), pairs.end());
  report.strictly_decreasing = pairs.size() == report.runs.size() && !pairs.empty();
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (!(pairs[i - 1].second < pairs[i].second))
      report.strictly_decreasing = false;
  return report;
}

// ---------------------------------------------------------------------------

IllPreparedReport illprepared_experiment(const CollisionModel& model, const HydroCoefficients& coeffs,
                                         std::shared_ptr<const FourierGrid> grid,
                                         const std::vector<double>& eps_list, const IllPreparedOptions& options,
                                         const NormSpec& spec)
{
  const VelocityBasis& basis = *model.basis;
  const int d = basis.dim();
  const double c = std::sqrt((d + 2.0) / d);
  const std::size_t m = grid->index_of(options.mode);
  const std::size_t mp = grid->partner(m);
  if (!grid->dealiased(m) || m == mp)
    throw ValidationError("ill-prepared mode must be a nonzero retained mode");
  const Eigen::VectorXd xi = grid->wavevector(m);

  // rho = A cos(k.x): ill-prepared, acoustic components nonzero.
  FluidTriple raw = FluidTriple::zeros(grid);
  raw.rho(static_cast<Eigen::Index>(m)) = 0.5 * options.amplitude;
  raw.rho(static_cast<Eigen::Index>(mp)) = 0.5 * options.amplitude;
  const FluidTriple bar = well_prepare(raw);

  const BranchCoefficients branches = branch_coefficients(model);
  const auto p0 = leading_projectors(model, xi.normalized());
  const auto p0m = leading_projectors(model, (-xi).normalized());

  IllPreparedReport report;
  const KineticState g_ill = lift(raw, basis);
  const KineticState g_wp = lift(bar, basis);

  const long steps = std::lround(options.T / options.dt);
  std::vector<KineticState> reference;
  nsf_simulate(bar, options.T, options.dt, coeffs.mu1, coeffs.mu2,
               [&](const FluidState& s) { reference.push_back(lift(s.to_triple(), basis)); });

  for (double eps : eps_list) {
    IllPreparedRun run;
    run.eps = eps;
    run.expected = c * xi.norm() / eps;
    for (long k = 0; k <= steps; k += std::max(1L, steps / 32)) {
      const double t = k * options.dt;
      for (const auto& [mode, proj] : {std::pair{m, &p0}, std::pair{mp, &p0m}}) {
        const Eigen::VectorXd x = grid->wavevector(mode);
        const CMatrix disp = dispersive_part(branches, *proj, eps, x, t);
        report.well_prepared_acoustic =
            std::max(report.well_prepared_acoustic, (disp * mode_vector(g_wp, mode)).norm());
        report.ill_prepared_acoustic =
            std::max(report.ill_prepared_acoustic, (disp * mode_vector(g_ill, mode)).norm());
      }
    }

    KineticOptions ko;
    ko.eps = eps;
    ko.dt = options.dt;
    ko.nonlinear = model.has_gamma;
    KineticSolver solver(model, grid, ko);
    KineticState g = g_ill;
    const Eigen::VectorXcd y0 = p0[0] * mode_vector(g, m);
    const Eigen::VectorXcd dir = y0 / y0.norm();
    double prev = 0.0, offset = 0.0;
    long k = 0;
    solver.simulate(g, options.T, [&](const KineticState& s) {
      const cd a = dir.dot(p0[0] * mode_vector(s, m));
      double ph = std::arg(a);
      if (k > 0) {
        while (ph + offset - prev > std::numbers::pi)
          offset -= 2.0 * std::numbers::pi;
        while (ph + offset - prev < -std::numbers::pi)
          offset += 2.0 * std::numbers::pi;
      }
      prev = ph + offset;
      run.t.push_back(s.t);
      run.phase.push_back(prev);
      run.sup_error = std::max(run.sup_error,
                               xellk_norm(difference(s, reference.at(static_cast<std::size_t>(k))), basis, spec));
      ++k;
    });
    // Least-squares slope of the unwrapped phase.
    const double n = static_cast<double>(run.t.size());
    double mt = 0.0, mp_ = 0.0;
    for (std::size_t i = 0; i < run.t.size(); ++i) {
      mt += run.t[i] / n;
      mp_ += run.phase[i] / n;
    }
    double stt = 0.0, stp = 0.0;
    for (std::size_t i = 0; i < run.t.size(); ++i) {
      stt += (run.t[i] - mt) * (run.t[i] - mt);
      stp += (run.t[i] - mt) * (run.phase[i] - mp_);
    }
    run.frequency = stp / stt;
    run.relative_error = std::abs(run.frequency - run.expected) / run.expected;
    report.max_frequency_error = std::max(report.max_frequency_error, run.relative_error);
    report.runs.push_back(std::move(run));
  }
  return report;
}

// ---------------------------------------------------------------------------

std::vector<ModeData> decay_test_modes(const CollisionModel& model, const FourierGrid& grid, unsigned seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int n = model.size();
  const Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n) - model.projector.matrix;
  std::vector<ModeData> modes;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const auto k = grid.integer_mode(m);
    int kmax = 0;
    for (int a = 0; a < grid.dim(); ++a)
      kmax = std::max(kmax, std::abs(k[a]));
    if (kmax < 1 || kmax > 2 || grid.partner(m) < m)
      continue;
    Eigen::VectorXcd c(n);
    for (int a = 0; a < n; ++a)
      c(a) = cd{normal(rng), normal(rng)};
    c = q.cast<cd>() * c;
    c *= 1.0 / c.norm();
    modes.push_back({grid.wavevector(m), c});
    modes.push_back({grid.wavevector(grid.partner(m)), c.conjugate()});
  }
  return modes;
}

DecayReport decay_suite(const CollisionModel& model, const FourierGrid& grid, const std::vector<double>& eps_list,
                        unsigned seed, double w_horizon)
{
  DecayReport rep;
  rep.branches = branch_coefficients(model);
  std::vector<double> eps = eps_list;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  const Eigen::VectorXd xi = grid.wavevector(grid.index_of({1, 0, 0}));
  for (double e : eps)
    rep.remainder.push_back(remainder_decay(model, e, xi, rep.branches.kappa));
  rep.ratios_ok = rep.remainder.size() >= 2;
  for (std::size_t i = 1; i < rep.remainder.size(); ++i) {
    const double r = rep.remainder[i].rate / rep.remainder[i - 1].rate;
    const double ideal = std::pow(rep.remainder[i - 1].eps / rep.remainder[i].eps, 2.0);
    rep.rate_ratios.push_back(r);
    if (std::abs(r / ideal - 1.0) > 0.1)
      rep.ratios_ok = false;
  }

  const auto modes = decay_test_modes(model, grid, seed);
  const CMatrix q =
      (Eigen::MatrixXd::Identity(model.size(), model.size()) - model.projector.matrix).cast<cd>();
  std::vector<ModeData> kernel_modes = modes;
  for (auto& md : kernel_modes) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(model.size());
    const auto& kb = model.projector.basis;
    for (Eigen::Index j = 0; j < kb.cols(); ++j)
      c += static_cast<double>(j + 1) * kb.col(j).cast<cd>();
    md.coeffs = c;
  }
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0, smin = cmin, smax = 0.0, smean = 0.0;
  rep.w_ok = true;
  for (double e : eps) {
    WDecay w = measure_W_decay(model, e, modes, w_horizon);
    cmin = std::min(cmin, w.envelope);
    cmax = std::max(cmax, w.envelope);
    smin = std::min(smin, w.sigma);
    smax = std::max(smax, w.sigma);
    smean += w.sigma / static_cast<double>(eps.size());
    rep.w_ok = rep.w_ok && w.sigma > 0.0 && w.tail_decreasing;
    for (const auto& md : kernel_modes) {
      const CMatrix step = expm((0.05 / (e * e)) * symbol_operator(model, e * md.xi).matrix);
      CVector w = (q * md.coeffs) / e;
      for (int k = 0; k <= 20; ++k, w = step * w)
        rep.kernel_data_output = std::max(rep.kernel_data_output, w.norm());
    }
    rep.w.push_back(std::move(w));
  }
  rep.envelope_spread = cmax / cmin;
  rep.sigma_spread = (smax - smin) / smean;
  return rep;
}

}  // namespace kinhydro
