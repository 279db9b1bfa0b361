#include "kinhydro/kinetic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "kinhydro/binary_io.hpp"
#include "kinhydro/errors.hpp"
#include "kinhydro/parallel.hpp"
#include "kinhydro/simd/kernels.hpp"
#include "kinhydro/spectral_analyzer.hpp"

namespace kinhydro {

namespace {

using cd = std::complex<double>;

/// Contiguous chunks for pointwise loops; fixed count so results do not depend on threads.
constexpr std::size_t kChunks = 64;

}  // namespace

// ---------------------------------------------------------------------------

PropagatorCache::PropagatorCache(const CollisionModel& model, std::shared_ptr<const FourierGrid> grid, double eps,
                                 double dt, bool with_phi)
    : grid_(std::move(grid)), eps_(eps), dt_(dt), with_phi_(with_phi), nv_(static_cast<std::size_t>(model.size()))
{
  if (!(eps > 0.0) || !(dt > 0.0))
    throw ValidationError("propagators need eps > 0 and dt > 0");
  if (grid_->dim() != model.dim())
    throw ValidationError("grid and velocity basis dimensions differ");
  const std::size_t n = grid_->size();
  slot_.assign(n, -1);
  conj_.assign(n, 0);
  std::vector<std::size_t> reps;
  for (std::size_t m : grid_->retained_modes()) {
    const std::size_t p = grid_->partner(m);
    if (m <= p) {
      slot_[m] = static_cast<long>(reps.size());
      reps.push_back(m);
    }
  }
  for (std::size_t m : grid_->retained_modes()) {
    const std::size_t p = grid_->partner(m);
    if (m > p) {
      slot_[m] = slot_[p];
      conj_[m] = 1;
    }
  }
  exp_.resize(reps.size());
  if (with_phi_) {
    phi1_.resize(reps.size());
    phi2_.resize(reps.size());
  }
  const double scale = dt / (eps * eps);
  parallel_for(reps.size(), [&](std::size_t r) {
    const CMatrix z = scale * symbol_operator(model, eps * grid_->wavevector(reps[r])).matrix;
    if (with_phi_) {
      PhiFunctions f = phi_functions(z);
      exp_[r] = f.exp;
      phi1_[r] = f.phi1;
      phi2_[r] = f.phi2;
    } else {
      exp_[r] = expm(z);
    }
  });
}

const CMatrixRM& PropagatorCache::stored(Kind kind, std::size_t slot) const
{
  switch (kind) {
    case Kind::Exp:
      return exp_[slot];
    case Kind::Phi1:
      return phi1_.at(slot);
    case Kind::Phi2:
      return phi2_.at(slot);
  }
  throw ValidationError("unknown propagator kind");
}

void PropagatorCache::apply(Kind kind, std::size_t mode, const cd* in, cd* out, bool accumulate) const
{
  const long slot = slot_[mode];
  if (slot < 0)
    throw ValidationError("propagator requested for a truncated mode");
  const CMatrixRM& m = stored(kind, static_cast<std::size_t>(slot));
  const auto& k = simd::active();
  if (!conj_[mode]) {
    (accumulate ? k.cmatvec_acc : k.cmatvec)(m.data(), in, out, nv_);
    return;
  }
  std::vector<cd> x(nv_), y(nv_);
  for (std::size_t a = 0; a < nv_; ++a)
    x[a] = std::conj(in[a]);
  k.cmatvec(m.data(), x.data(), y.data(), nv_);
  for (std::size_t a = 0; a < nv_; ++a)
    out[a] = accumulate ? out[a] + std::conj(y[a]) : std::conj(y[a]);
}

CMatrix PropagatorCache::matrix(Kind kind, std::size_t mode) const
{
  const long slot = slot_[mode];
  if (slot < 0)
    throw ValidationError("propagator requested for a truncated mode");
  CMatrix m = stored(kind, static_cast<std::size_t>(slot));
  return conj_[mode] ? CMatrix(m.conjugate()) : m;
}

double PropagatorCache::max_exp_norm() const
{
  double worst = 0.0;
  for (const auto& e : exp_)
    worst = std::max(worst, operator_norm(e));
  return worst;
}

// ---------------------------------------------------------------------------

void truncate_to_retained(KineticState& g)
{
  for (std::size_t m = 0; m < g.grid->size(); ++m)
    if (!g.grid->dealiased(m))
      std::fill_n(g.mode(m), g.nv, cd{});
}

KineticState collision_term(const CollisionModel& model, const KineticState& g, double* max_imag)
{
  KineticState out(g.grid, g.nv);
  out.t = g.t;
  out.eps = g.eps;
  if (!model.has_gamma)
    return out;
  const FourierGrid& grid = *g.grid;
  const std::size_t nv = static_cast<std::size_t>(g.nv);
  std::vector<cd> phys = g.coeffs;
  for (std::size_t m = 0; m < grid.size(); ++m)
    if (!grid.dealiased(m))
      std::fill_n(phys.data() + m * nv, nv, cd{});
  grid.inverse(phys.data(), g.nv);

  std::vector<double> chunk_imag(kChunks, 0.0);
  const auto& kern = simd::active();
  const std::size_t points = grid.size();
  const std::size_t chunks = std::min(kChunks, points);
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double> x(nv), y(nv);
    double imag = 0.0;
    for (std::size_t p = points * c / chunks; p < points * (c + 1) / chunks; ++p) {
      cd* slot = phys.data() + p * nv;
      for (std::size_t a = 0; a < nv; ++a) {
        x[a] = slot[a].real();
        imag = std::max(imag, std::abs(slot[a].imag()));
      }
      kern.bilinear(model.gamma.data(), x.data(), x.data(), y.data(), nv);
      for (std::size_t a = 0; a < nv; ++a)
        slot[a] = y[a];
    }
    chunk_imag[c] = imag;
  });
  if (max_imag)
    *max_imag = *std::max_element(chunk_imag.begin(), chunk_imag.end());

  grid.forward(phys.data(), g.nv);
  out.coeffs = std::move(phys);
  truncate_to_retained(out);
  return out;
}

// ---------------------------------------------------------------------------

KineticSolver::KineticSolver(const CollisionModel& model, std::shared_ptr<const FourierGrid> grid,
                             KineticOptions options)
    : model_(model), grid_(std::move(grid)), options_(options)
{
  if (options_.nonlinear && !model.has_gamma)
    throw ValidationError("nonlinear run requested but the model has no collision tensor");
  cache_ = std::make_unique<PropagatorCache>(model, grid_, options_.eps, options_.dt, options_.nonlinear);
}

KineticState KineticSolver::nonlinear_term(const KineticState& g) const
{
  double imag = 0.0;
  KineticState q = collision_term(model_, g, &imag);
  diag_.max_imag_physical = std::max(diag_.max_imag_physical, imag);
  const double s = 1.0 / options_.eps;
  for (auto& c : q.coeffs)
    c *= s;
  return q;
}

void KineticSolver::step(KineticState& g)
{
  if (g.grid.get() != grid_.get() || g.nv != model_.size())
    throw ValidationError("state does not match the solver grid or basis");
  if (initial_norm_ < 0.0)
    initial_norm_ = g.l2_norm();
  const double before = g.l2_norm();
  const std::size_t nv = static_cast<std::size_t>(g.nv);
  const auto& modes = grid_->retained_modes();
  using K = PropagatorCache::Kind;

  KineticState next(grid_, g.nv);
  if (!options_.nonlinear) {
    parallel_for(modes.size(), [&](std::size_t i) {
      const std::size_t m = modes[i];
      cache_->apply(K::Exp, m, g.mode(m), next.mode(m));
    });
  } else {
    const double h = options_.dt;
    const KineticState n0 = nonlinear_term(g);
    KineticState a(grid_, g.nv);
    parallel_for(modes.size(), [&](std::size_t i) {
      const std::size_t m = modes[i];
      std::vector<cd> hn(nv);
      for (std::size_t k = 0; k < nv; ++k)
        hn[k] = h * n0.mode(m)[k];
      cache_->apply(K::Exp, m, g.mode(m), a.mode(m));
      cache_->apply(K::Phi1, m, hn.data(), a.mode(m), true);
    });
    const KineticState n1 = nonlinear_term(a);
    parallel_for(modes.size(), [&](std::size_t i) {
      const std::size_t m = modes[i];
      std::vector<cd> hd(nv);
      for (std::size_t k = 0; k < nv; ++k)
        hd[k] = h * (n1.mode(m)[k] - n0.mode(m)[k]);
      std::copy_n(a.mode(m), nv, next.mode(m));
      cache_->apply(K::Phi2, m, hd.data(), next.mode(m), true);
    });
  }
  next.t = g.t + options_.dt;
  next.eps = g.eps;
  g = std::move(next);
  ++diag_.steps;

  const double after = g.l2_norm();
  if (!std::isfinite(after)) {
    std::ostringstream msg;
    msg << "non-finite kinetic state at t = " << g.t;
    throw NumericalAbort(msg.str());
  }
  if (!options_.nonlinear) {
    diag_.max_norm_growth = std::max(diag_.max_norm_growth, after - before);
    if (after - before > options_.dissipation_tolerance * std::max(before, 1e-300)) {
      std::ostringstream msg;
      msg << "linear flow increased the L2 norm at t = " << g.t;
      throw NumericalAbort(msg.str());
    }
  }
  if (initial_norm_ > 0.0 && after > options_.instability_factor * initial_norm_) {
    std::ostringstream msg;
    msg << "instability detected at t = " << g.t << ": norm grew beyond " << options_.instability_factor
        << "x the initial value";
    throw NumericalAbort(msg.str());
  }
}

void KineticSolver::simulate(KineticState& g, double T, const std::function<void(const KineticState&)>& observer)
{
  if (!(T > 0.0))
    throw ValidationError("final time must be positive");
  const long steps = std::lround(T / options_.dt);
  if (std::abs(steps * options_.dt - T) > 1e-9 * T)
    throw ValidationError("final time must be a multiple of the time step");
  truncate_to_retained(g);
  g.eps = options_.eps;
  initial_norm_ = g.l2_norm();
  if (observer)
    observer(g);
  for (long n = 0; n < steps; ++n) {
    step(g);
    if (observer)
      observer(g);
  }
}

// ---------------------------------------------------------------------------

double positivity_margin(const KineticState& g, const VelocityBasis& basis, const std::vector<Eigen::VectorXd>& nodes)
{
  const std::size_t nv = static_cast<std::size_t>(g.nv);
  Eigen::MatrixXd p(nodes.size(), nv);
  std::vector<double> row(nv);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    basis.eval_polynomials(std::span<const double>(nodes[i].data(), nodes[i].size()), row);
    for (std::size_t a = 0; a < nv; ++a)
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = row[a];
  }
  std::vector<cd> phys = g.coeffs;
  g.grid->inverse(phys.data(), g.nv);
  double margin = std::numeric_limits<double>::infinity();
  Eigen::VectorXd c(nv);
  for (std::size_t x = 0; x < g.grid->size(); ++x) {
    for (std::size_t a = 0; a < nv; ++a)
      c(static_cast<Eigen::Index>(a)) = phys[x * nv + a].real();
    margin = std::min(margin, 1.0 + g.eps * (p * c).minCoeff());
  }
  return margin;
}

std::vector<double> zero_mode_moments(const KineticState& g, const VelocityBasis& basis)
{
  const int d = basis.dim();
  const cd* c = g.mode(0);
  std::vector<double> out;
  out.push_back(c[0].real());
  double th = 0.0;
  for (int a = 0; a < d; ++a) {
    MultiIndex e1{0, 0, 0}, e2{0, 0, 0};
    e1[a] = 1;
    e2[a] = 2;
    out.push_back(c[basis.flat_index(e1)].real());
    th += c[basis.flat_index(e2)].real();
  }
  out.push_back(std::sqrt(2.0) / d * th);
  return out;
}

void write_snapshot(const std::filesystem::path& path, const KineticState& g, int max_degree)
{
  std::ostringstream h;
  h.precision(17);
  h << "kinhydro-snapshot version=1 t=" << g.t << " eps=" << g.eps << " d=" << g.grid->dim()
    << " grid=" << g.grid->n() << " box=" << g.grid->box_length() << " K=" << max_degree << " nv=" << g.nv;
  std::vector<double> payload;
  payload.reserve(2 * g.coeffs.size());
  for (const auto& c : g.coeffs) {
    payload.push_back(c.real());
    payload.push_back(c.imag());
  }
  write_blob(path, h.str(), payload);
}

KineticState read_snapshot(const std::filesystem::path& path, std::shared_ptr<const FourierGrid> grid, int nv)
{
  BinaryBlob blob;
  KineticState g(grid, nv);
  const auto status = read_blob(path, blob, static_cast<long>(2 * g.coeffs.size()));
  if (status != BlobStatus::Ok)
    throw ValidationError("snapshot unreadable or corrupted: " + path.string());
  std::istringstream is(blob.header);
  std::string token;
  std::map<std::string, std::string> kv;
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq != std::string::npos)
      kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  if (kv.count("t"))
    g.t = std::stod(kv["t"]);
  if (kv.count("eps"))
    g.eps = std::stod(kv["eps"]);
  for (std::size_t i = 0; i < g.coeffs.size(); ++i)
    g.coeffs[i] = {blob.payload[2 * i], blob.payload[2 * i + 1]};
  return g;
}

}  // namespace kinhydro
