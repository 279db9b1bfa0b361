#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

#include "kinhydro/collision_models.hpp"
#include "kinhydro/fourier_grid.hpp"
#include "kinhydro/kinetic_state.hpp"
#include "kinhydro/propagators.hpp"

namespace kinhydro {

/**
 * @brief Per-mode e^{dt A}, phi_1(dt A), phi_2(dt A) for A(xi) = (L - i eps xi.v) / eps^2.
 *
 * Only one mode of each pair (xi, -xi) is stored; its partner uses the complex
 * conjugate matrices since A(-xi) = conj(A(xi)). Only 2/3-dealiased modes are kept.
 */
class PropagatorCache
{
 public:
  PropagatorCache(const CollisionModel& model, std::shared_ptr<const FourierGrid> grid, double eps, double dt,
                  bool with_phi = true);

  double eps() const { return eps_; }
  double dt() const { return dt_; }
  bool has_phi() const { return with_phi_; }
  const FourierGrid& grid() const { return *grid_; }

  enum class Kind
  {
    Exp,
    Phi1,
    Phi2
  };

  /// out = M(mode) in, or out += M(mode) in. Mode must be retained.
  void apply(Kind kind, std::size_t mode, const std::complex<double>* in, std::complex<double>* out,
             bool accumulate = false) const;

  /// Dense matrix for a retained mode (conjugated for partner modes).
  CMatrix matrix(Kind kind, std::size_t mode) const;

  /// Largest ||e^{dt A(xi)}||_2 over cached modes.
  double max_exp_norm() const;

 private:
  const CMatrixRM& stored(Kind kind, std::size_t slot) const;

  std::shared_ptr<const FourierGrid> grid_;
  double eps_;
  double dt_;
  bool with_phi_;
  std::size_t nv_;
  std::vector<long> slot_;
  std::vector<char> conj_;
  std::vector<CMatrixRM> exp_, phi1_, phi2_;
};

struct KineticOptions
{
  double eps = 0.1;
  double dt = 1.0 / 256.0;
  bool nonlinear = true;
  /// Abort when the L^2 norm exceeds this multiple of the initial norm.
  double instability_factor = 10.0;
  /// For linear runs: abort when ||g|| grows by more than this relative amount in one step.
  double dissipation_tolerance = 1e-10;
};

/// Diagnostics collected while stepping.
struct KineticDiagnostics
{
  double max_imag_physical = 0.0;
  double max_norm_growth = 0.0;  // max over steps of ||g_{n+1}|| - ||g_n||, linear runs
  long steps = 0;
};

class KineticSolver
{
 public:
  KineticSolver(const CollisionModel& model, std::shared_ptr<const FourierGrid> grid, KineticOptions options);

  const KineticOptions& options() const { return options_; }
  const PropagatorCache& propagators() const { return *cache_; }
  const KineticDiagnostics& diagnostics() const { return diag_; }

  /// (1/eps) Gamma(g, g) in Fourier space, dealiased; non-retained modes are zero.
  KineticState nonlinear_term(const KineticState& g) const;

  /// One ETD2RK step (exact exponential step when the nonlinearity is off).
  void step(KineticState& g);

  /// Steps to T, calling `observer` on the initial state and after every step.
  void simulate(KineticState& g, double T, const std::function<void(const KineticState&)>& observer = {});

 private:
  const CollisionModel& model_;
  std::shared_ptr<const FourierGrid> grid_;
  KineticOptions options_;
  std::unique_ptr<PropagatorCache> cache_;
  mutable KineticDiagnostics diag_;
  double initial_norm_ = -1.0;
};

/// Zeroes modes outside the 2/3 set.
void truncate_to_retained(KineticState& g);

/// Pointwise Gamma(g, g) in physical space then back to Fourier space (no 1/eps factor).
KineticState collision_term(const CollisionModel& model, const KineticState& g, double* max_imag = nullptr);

/// min over grid points and velocity nodes of 1 + eps sum_a g_a(x) p_a(v), the sign of f = M + eps M^{1/2} g.
double positivity_margin(const KineticState& g, const VelocityBasis& basis, const std::vector<Eigen::VectorXd>& nodes);

/// Zero-mode moments (rho, u_1..u_d, theta) of a state.
std::vector<double> zero_mode_moments(const KineticState& g, const VelocityBasis& basis);

/// Snapshot file: header (t, eps, grid, K) then interleaved re/im coefficients.
void write_snapshot(const std::filesystem::path& path, const KineticState& g, int max_degree);
KineticState read_snapshot(const std::filesystem::path& path, std::shared_ptr<const FourierGrid> grid, int nv);

}  // namespace kinhydro
