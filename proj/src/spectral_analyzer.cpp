#include "kinhydro/spectral_analyzer.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "kinhydro/errors.hpp"

namespace kinhydro {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

Eigen::VectorXd unit(const Eigen::VectorXd& v)
{
  const double n = v.norm();
  if (!(n > 0.0))
    throw ValidationError("direction must be a nonzero vector");
  return v / n;
}

/// Orthonormal directions spanning the complement of zeta.
std::vector<Eigen::VectorXd> transverse_directions(const Eigen::VectorXd& zeta)
{
  const int d = static_cast<int>(zeta.size());
  std::vector<Eigen::VectorXd> out;
  if (d == 2) {
    Eigen::VectorXd eta(2);
    eta << -zeta(1), zeta(0);
    out.push_back(eta);
    return out;
  }
  Eigen::Index k = 0;
  zeta.cwiseAbs().minCoeff(&k);
  Eigen::VectorXd e = Eigen::VectorXd::Unit(3, k);
  Eigen::VectorXd eta1 = (e - zeta(k) * zeta).normalized();
  Eigen::Vector3d z3 = zeta, e3 = eta1;
  Eigen::VectorXd eta2 = z3.cross(e3);
  out.push_back(eta1);
  out.push_back(eta2.normalized());
  return out;
}

}  // namespace

Eigen::MatrixXd transport_matrix(const VelocityBasis& basis, const Eigen::VectorXd& zeta)
{
  const int n = basis.size();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < basis.dim(); ++k)
    if (zeta(k) != 0.0)
      v += zeta(k) * basis.multiplication_matrix(k);
  return v;
}

SymbolOperator symbol_operator(const CollisionModel& model, const Eigen::VectorXd& xi)
{
  if (xi.size() != model.dim())
    throw ValidationError("wavevector dimension does not match the model");
  SymbolOperator op;
  op.xi = xi;
  op.matrix = model.L.cast<cd>() - kI * transport_matrix(*model.basis, xi).cast<cd>();
  return op;
}

double cutoff_chi(double r)
{
  r = std::abs(r);
  if (r <= 0.5)
    return 1.0;
  if (r >= 1.0)
    return 0.0;
  const double x = (1.0 - r) / 0.5;
  return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

Eigen::MatrixXd reflection_matrix(const VelocityBasis& basis, const Eigen::VectorXd& eta)
{
  const int d = basis.dim();
  const int n = basis.size();
  const int nodes = basis.num_nodes();
  Eigen::MatrixXd reflected(nodes, n);
  std::vector<double> hv(d), row(n);
  for (int i = 0; i < nodes; ++i) {
    const double* v = basis.node(i);
    double dot = 0.0;
    for (int k = 0; k < d; ++k)
      dot += eta(k) * v[k];
    for (int k = 0; k < d; ++k)
      hv[k] = v[k] - 2.0 * dot * eta(k);
    basis.eval_polynomials(hv, row);
    for (int a = 0; a < n; ++a)
      reflected(i, a) = row[a] * basis.node_weight(i);
  }
  Eigen::MatrixXd r = basis.node_table().transpose() * reflected;
  return 0.5 * (r + r.transpose());
}

// ---------------------------------------------------------------------------

BranchTracker::BranchTracker(const CollisionModel& model, const Eigen::VectorXd& direction, double max_step)
    : model_(model), zeta_(unit(direction)), max_step_(max_step)
{
  if (zeta_.size() != model.dim())
    throw ValidationError("direction dimension does not match the model");
  const auto& basis = *model.basis;
  const auto etas = transverse_directions(zeta_);

  // Joint eigenspaces of the commuting reflections, labelled by sum_k 2^k s_k.
  Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (std::size_t k = 0; k < etas.size(); ++k)
    combo += static_cast<double>(1 << k) * reflection_matrix(basis, etas[k]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(combo);

  std::map<long, std::vector<int>> groups;
  for (int i = 0; i < basis.size(); ++i)
    groups[std::lround(es.eigenvalues()(i))].push_back(i);

  const Eigen::MatrixXd V = transport_matrix(basis, zeta_);
  const long all_even = (1L << etas.size()) - 1;
  for (const auto& [key, cols] : groups) {
    Sector sec;
    sec.Q.resize(basis.size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      sec.Q.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cols[c]);
    sec.L = sec.Q.transpose() * model.L * sec.Q;
    sec.V = sec.Q.transpose() * V * sec.Q;
    // key = sum_k 2^k s_k with s_k = +-1; count odd directions.
    int odd = 0;
    for (std::size_t k = 0; k < etas.size(); ++k) {
      const long bit = 1L << k;
      // s_k = +1 contributes +bit, -1 contributes -bit: recover s_k from key + all_even.
      if ((((key + all_even) / 2) & bit) == 0)
        ++odd;
    }
    sec.slots = odd == 0 ? 3 : (odd == 1 ? 1 : 0);
    sectors_.push_back(std::move(sec));
  }
  solve(1e-4, true);
}

void BranchTracker::solve(double s, bool classify)
{
  const int n = model_.size();
  BranchSample sample;
  sample.s = s;
  for (auto& p : sample.projector)
    p = CMatrix::Zero(n, n);
  std::array<int, kBranchCount> counts{};
  std::vector<cd> branch_values;
  std::vector<cd> rest;
  double min_overlap = 1.0;

  for (auto& sec : sectors_) {
    const CMatrix a = sec.L.cast<cd>() - kI * s * sec.V.cast<cd>();
    Eigen::ComplexEigenSolver<CMatrix> es(a);
    if (es.info() != Eigen::Success)
      throw NumericalAbort("complex eigendecomposition failed");
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    const int m = static_cast<int>(vals.size());

    std::vector<int> chosen(sec.slots, -1);
    if (sec.slots > 0) {
      if (classify) {
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int x, int y) { return std::abs(vals(x)) < std::abs(vals(y)); });
        if (m < sec.slots)
          throw NumericalAbort("velocity sector too small for the branch count");
        std::copy_n(order.begin(), sec.slots, chosen.begin());
        if (sec.slots == 3) {
          std::sort(chosen.begin(), chosen.end(), [&](int x, int y) { return vals(x).imag() > vals(y).imag(); });
          sec.labels = {0, 2, 1};
        } else {
          sec.labels = {3};
        }
      } else {
        std::vector<std::tuple<double, int, int>> cand;
        for (int k = 0; k < sec.slots; ++k)
          for (int i = 0; i < m; ++i)
            cand.emplace_back(std::abs(sec.previous[k].dot(vecs.col(i))) / vecs.col(i).norm(), k, i);
        std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });
        std::vector<bool> used(m, false);
        int assigned = 0;
        for (const auto& [o, k, i] : cand) {
          if (chosen[k] >= 0 || used[i])
            continue;
          chosen[k] = i;
          used[i] = true;
          min_overlap = std::min(min_overlap, o);
          if (o < 0.5) {
            std::ostringstream msg;
            msg << "branch tracking ambiguity at |xi| = " << s << ": overlap " << o;
            throw NumericalAbort(msg.str());
          }
          if (++assigned == sec.slots)
            break;
        }
      }
    }

    std::vector<bool> taken(m, false);
    sec.previous.resize(sec.slots);
    for (int k = 0; k < sec.slots; ++k) {
      const int i = chosen[k];
      taken[i] = true;
      const CVector r = vecs.col(i);
      sec.previous[k] = r / r.norm();
      const CVector full = sec.Q.cast<cd>() * r;
      const cd denom = full.transpose() * full;
      if (std::abs(denom) < 1e-12 * full.squaredNorm())
        throw NumericalAbort("branch eigenvector is quasi-null; projector undefined");
      const int label = sec.labels[k];
      sample.projector[label] += (full * full.transpose()) / denom;
      sample.lambda[label] += vals(i);
      ++counts[label];
      branch_values.push_back(vals(i));
    }
    for (int i = 0; i < m; ++i)
      if (!taken[i])
        rest.push_back(vals(i));
  }

  for (int j = 0; j < kBranchCount; ++j) {
    if (counts[j] == 0)
      throw NumericalAbort("branch count differs from 4");
    sample.lambda[j] /= static_cast<double>(counts[j]);
  }
  double sep = std::numeric_limits<double>::infinity();
  for (const cd& b : branch_values)
    for (const cd& r : rest)
      sep = std::min(sep, std::abs(b - r));
  sample.separation = sep;
  sample.min_overlap = min_overlap;
  sample_ = std::move(sample);
}

const BranchSample& BranchTracker::at(double s)
{
  if (s < 0.0)
    throw ValidationError("|xi| must be nonnegative");
  double cur = sample_.s;
  while (cur != s) {
    const double next = s > cur ? std::min(s, cur + max_step_) : std::max(s, cur - max_step_);
    solve(next, false);
    cur = next;
  }
  return sample_;
}

// ---------------------------------------------------------------------------

double estimate_kappa(const CollisionModel& model, const Eigen::VectorXd& direction, double step, double s_max)
{
  BranchTracker tracker(model, direction, step);
  const double threshold = 0.5 * model.spectral_gap;
  double kappa = 0.0;
  for (double s = step; s <= s_max + 1e-12; s += step) {
    try {
      if (tracker.at(s).separation < threshold)
        break;
    } catch (const NumericalAbort&) {
      break;
    }
    kappa = s;
  }
  if (kappa <= 0.0)
    throw NumericalAbort("could not establish a branch validity radius");
  return kappa;
}

std::vector<double> fit_grid(double kappa, int samples)
{
  if (samples < 2)
    throw ValidationError("fit grid needs at least two samples");
  std::vector<double> g(samples);
  const double a = kappa / 20.0, b = kappa / 2.0;
  for (int i = 0; i < samples; ++i)
    g[i] = a + (b - a) * i / (samples - 1);
  return g;
}

void fit_branch(SpectralBranch& br, int order)
{
  const auto n = static_cast<Eigen::Index>(br.s.size());
  if (n < 2 * (order + 1))
    throw ValidationError("branch fit needs at least twice as many samples as coefficients");
  // Powers of (s/s_max)^2 keep the least-squares matrix well scaled.
  const double smax = br.s.back();
  Eigen::MatrixXd x(n, order + 1);
  Eigen::VectorXd yi(n), yr(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = br.s[k];
    const double u = (s / smax) * (s / smax);
    double p = 1.0;
    for (int q = 0; q <= order; ++q, p *= u)
      x(k, q) = p;
    yi(k) = br.lambda[k].imag() / s;
    yr(k) = br.lambda[k].real() / (s * s);
  }
  const auto qr = x.colPivHouseholderQr();
  const Eigen::VectorXd ci = qr.solve(yi);
  const Eigen::VectorXd cr = qr.solve(yr);
  br.alpha = ci(0);
  br.beta = -cr(0);
  br.gamma = {0.0, order > 0 ? ci(1) / (smax * smax) : 0.0};
  br.cubic_constant = 0.0;
  br.cubic_constant_lower = 0.0;
  br.max_real = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = br.s[k];
    const double c = std::abs(br.lambda[k] - kI * br.alpha * s + br.beta * s * s) / (s * s * s);
    br.cubic_constant = std::max(br.cubic_constant, c);
    if (k < n / 2)
      br.cubic_constant_lower = std::max(br.cubic_constant_lower, c);
    br.max_real = std::max(br.max_real, br.lambda[k].real());
  }
}

double fit_radius(const CollisionModel& model, const Eigen::VectorXd& direction, double kappa, double tol,
                  int max_halvings)
{
  auto coefficients = [&](double r) {
    std::array<double, 2 * kBranchCount> c{};
    const auto br = eigenbranches(model, direction, fit_grid(r));
    for (int j = 0; j < kBranchCount; ++j) {
      c[2 * j] = br[j].alpha;
      c[2 * j + 1] = br[j].beta;
    }
    return c;
  };
  double r = kappa;
  auto wide = coefficients(r);
  for (int h = 0; h < max_halvings; ++h) {
    auto narrow = coefficients(0.5 * r);
    double diff = 0.0;
    for (std::size_t i = 0; i < wide.size(); ++i)
      diff = std::max(diff, std::abs(wide[i] - narrow[i]));
    if (diff <= tol)
      return r;
    r *= 0.5;
    wide = narrow;
  }
  throw NumericalAbort("branch fits did not settle while shrinking the fit window");
}

std::vector<SpectralBranch> eigenbranches(const CollisionModel& model, const Eigen::VectorXd& direction,
                                          const std::vector<double>& grid)
{
  BranchTracker tracker(model, direction);
  std::vector<SpectralBranch> out(kBranchCount);
  for (int j = 0; j < kBranchCount; ++j) {
    out[j].label = j + 1;
    out[j].multiplicity = j == 3 ? model.dim() - 1 : 1;
  }
  double prev = 0.0;
  for (double s : grid) {
    if (!(s > prev))
      throw ValidationError("|xi| grid must be positive and increasing");
    prev = s;
    const BranchSample& sample = tracker.at(s);
    for (int j = 0; j < kBranchCount; ++j) {
      out[j].s.push_back(s);
      out[j].lambda.push_back(sample.lambda[j]);
      out[j].projectors.push_back(sample.projector[j]);
    }
  }
  for (auto& br : out)
    fit_branch(br);
  return out;
}

std::array<CMatrix, kBranchCount> leading_projectors(const CollisionModel& model, const Eigen::VectorXd& direction,
                                                     double h)
{
  static constexpr std::array<double, 5> w{5.0, -10.0, 10.0, -5.0, 1.0};
  BranchTracker tracker(model, direction);
  std::array<CMatrix, kBranchCount> p0;
  for (auto& p : p0)
    p = CMatrix::Zero(model.size(), model.size());
  for (int k = 0; k < 5; ++k) {
    const BranchSample& sample = tracker.at((k + 1) * h);
    for (int j = 0; j < kBranchCount; ++j)
      p0[j] += w[k] * sample.projector[j];
  }
  return p0;
}

ProjectorFamily projector_family(const CollisionModel& model, const Eigen::VectorXd& direction,
                                 const std::vector<double>& grid)
{
  ProjectorFamily fam;
  fam.direction = unit(direction);
  fam.kappa = estimate_kappa(model, fam.direction);
  BranchTracker tracker(model, fam.direction);
  for (double s : grid) {
    const BranchSample& sample = tracker.at(s);
    fam.s.push_back(s);
    for (int j = 0; j < kBranchCount; ++j)
      fam.projectors[j].push_back(sample.projector[j]);
  }
  fam.leading = leading_projectors(model, fam.direction);
  return fam;
}

BranchCoefficients branch_coefficients(const CollisionModel& model)
{
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(model.dim(), 0);
  BranchCoefficients c;
  c.kappa = estimate_kappa(model, e1);
  c.fit_radius = fit_radius(model, e1, c.kappa);
  const auto branches = eigenbranches(model, e1, fit_grid(c.fit_radius));
  for (int j = 0; j < kBranchCount; ++j) {
    c.alpha[j] = branches[j].alpha;
    c.beta[j] = branches[j].beta;
  }
  return c;
}

// ---------------------------------------------------------------------------

namespace {

struct BranchState
{
  std::array<cd, kBranchCount> lambda{};
  std::array<CMatrix, kBranchCount> projector;
  double chi = 0.0;
};

BranchState branch_state(const CollisionModel& model, double eps, const Eigen::VectorXd& xi, double kappa)
{
  BranchState st;
  const double s = eps * xi.norm();
  st.chi = cutoff_chi(s / kappa);
  if (st.chi == 0.0) {
    for (auto& p : st.projector)
      p = CMatrix::Zero(model.size(), model.size());
    return st;
  }
  if (xi.norm() == 0.0) {
    st.projector = leading_projectors(model, Eigen::VectorXd::Unit(model.dim(), 0));
    return st;
  }
  BranchTracker tracker(model, xi);
  const BranchSample& sample = tracker.at(s);
  st.lambda = sample.lambda;
  st.projector = sample.projector;
  return st;
}

}  // namespace

SemigroupSplit semigroup_split(const CollisionModel& model, double eps, const Eigen::VectorXd& xi, double t,
                               double kappa)
{
  if (!(eps > 0.0))
    throw ValidationError("eps must be positive");
  SemigroupSplit out;
  const CMatrix a = symbol_operator(model, eps * xi).matrix;
  out.full = expm((t / (eps * eps)) * a);
  const BranchState st = branch_state(model, eps, xi, kappa);
  out.remainder = out.full;
  for (int j = 0; j < kBranchCount; ++j) {
    out.branch[j] = (st.chi * std::exp(t * st.lambda[j] / (eps * eps))) * st.projector[j];
    out.remainder -= out.branch[j];
  }
  return out;
}

CMatrix dispersive_part(const BranchCoefficients& coeffs, const std::array<CMatrix, kBranchCount>& leading,
                        double eps, const Eigen::VectorXd& xi, double t)
{
  const double r = xi.norm();
  CMatrix out = CMatrix::Zero(leading[0].rows(), leading[0].cols());
  if (r == 0.0)
    return out;
  for (int j = 0; j < 2; ++j)
    out += std::exp(kI * coeffs.alpha[j] * r * t / eps - coeffs.beta[j] * r * r * t) * leading[j];
  return out;
}

namespace {

/// Least-squares line y = c0 + c1 x.
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y)
{
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x[i];
    b(i) = y[i];
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
  return {c(0), c(1)};
}

}  // namespace

RemainderDecay remainder_decay(const CollisionModel& model, double eps, const Eigen::VectorXd& xi, double kappa,
                               int samples)
{
  RemainderDecay out;
  out.eps = eps;
  const int n = model.size();
  const CMatrix a = symbol_operator(model, eps * xi).matrix;
  const BranchState st = branch_state(model, eps, xi, kappa);
  const double tau_end = 40.0 / model.spectral_gap;
  const double dt = eps * eps * tau_end / samples;
  const CMatrix step = expm((dt / (eps * eps)) * a);
  CMatrix m = CMatrix::Identity(n, n);
  std::vector<double> ft, fy;
  for (int k = 0; k <= samples; ++k) {
    const double t = k * dt;
    CMatrix r = m;
    for (int j = 0; j < kBranchCount; ++j)
      r -= (st.chi * std::exp(t * st.lambda[j] / (eps * eps))) * st.projector[j];
    const double nr = operator_norm(r);
    out.t.push_back(t);
    out.norm.push_back(nr);
    if (nr >= 1e-10 && nr <= 1e-1) {
      ft.push_back(t);
      fy.push_back(std::log(nr));
    }
    m = step * m;
  }
  out.fit_samples = static_cast<int>(ft.size());
  if (out.fit_samples < 3)
    throw NumericalAbort("remainder decay: too few samples in the fit window");
  const auto [c0, c1] = line_fit(ft, fy);
  out.rate = -c1;
  out.prefactor = std::exp(c0);
  return out;
}

WDecay measure_W_decay(const CollisionModel& model, double eps, const std::vector<ModeData>& modes, double t_end,
                       int samples)
{
  WDecay out;
  out.eps = eps;
  const double dt = t_end / samples;
  const CMatrix q = (Eigen::MatrixXd::Identity(model.size(), model.size()) - model.projector.matrix).cast<cd>();
  std::vector<double> sq(samples + 1, 0.0);
  for (const auto& mode : modes) {
    const CMatrix step = expm((dt / (eps * eps)) * symbol_operator(model, eps * mode.xi).matrix);
    CVector w = (q * mode.coeffs) / eps;
    for (int k = 0; k <= samples; ++k) {
      sq[k] += w.squaredNorm();
      w = step * w;
    }
  }
  for (int k = 0; k <= samples; ++k) {
    out.t.push_back(k * dt);
    out.norm.push_back(std::sqrt(sq[k]));
  }
  if (*std::max_element(out.norm.begin(), out.norm.end()) == 0.0) {
    out.tail_decreasing = true;
    return out;
  }
  std::vector<double> ft, fy;
  for (int k = 1; k <= samples; ++k) {
    if (out.t[k] < 0.5 * t_end || out.norm[k] <= 0.0)
      continue;
    ft.push_back(out.t[k]);
    fy.push_back(std::log(std::sqrt(out.t[k]) * out.norm[k]));
  }
  if (ft.size() < 3)
    throw NumericalAbort("W decay: too few tail samples");
  out.tail_decreasing = true;
  for (std::size_t i = 1; i < fy.size(); ++i)
    if (fy[i] >= fy[i - 1])
      out.tail_decreasing = false;
  out.sigma = -line_fit(ft, fy).second;
  for (int k = 1; k <= samples; ++k)
    out.envelope = std::max(out.envelope, std::sqrt(out.t[k]) * std::exp(out.sigma * out.t[k]) * out.norm[k]);
  return out;
}

}  // namespace kinhydro
