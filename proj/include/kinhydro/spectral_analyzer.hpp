#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "kinhydro/collision_models.hpp"
#include "kinhydro/propagators.hpp"

namespace kinhydro {

/// Fourier symbol L - i (xi . v) on the Galerkin basis.
struct SymbolOperator
{
  Eigen::VectorXd xi;
  CMatrix matrix;
};

SymbolOperator symbol_operator(const CollisionModel& model, const Eigen::VectorXd& xi);

/// Galerkin matrix of multiplication by (zeta . v).
Eigen::MatrixXd transport_matrix(const VelocityBasis& basis, const Eigen::VectorXd& zeta);

/// Smooth cutoff: 1 on [0, 1/2], 0 for r >= 1, polynomial smoothstep in between.
double cutoff_chi(double r);

/// Branch labels: 0 and 1 acoustic (Im > 0 and Im < 0), 2 thermal, 3 shear (multiplicity d-1).
inline constexpr int kBranchCount = 4;

/// Tracked branch data at one |xi| = s along a fixed direction.
struct BranchSample
{
  double s = 0.0;
  std::array<std::complex<double>, kBranchCount> lambda{};
  std::array<CMatrix, kBranchCount> projector;
  /// Minimum distance between a branch eigenvalue and the rest of the spectrum.
  double separation = 0.0;
  double min_overlap = 1.0;
};

/**
 * @brief Follows the four small-|xi| eigenvalue branches of L - i s (zeta . v).
 *
 * The operator commutes with reflections across hyperplanes containing zeta,
 * so the problem is split into the joint eigenspaces of the d-1 transverse
 * reflections. The fully even sector carries the two acoustic and the thermal
 * branch, each sector odd in exactly one transverse direction carries one copy
 * of the shear branch. Within a sector, eigenvectors are matched between
 * consecutive values of s by maximal overlap.
 *
 * Spectral projectors use P = R (R^T R)^{-1} R^T, valid because the symbol is
 * complex symmetric.
 */
class BranchTracker
{
 public:
  BranchTracker(const CollisionModel& model, const Eigen::VectorXd& direction, double max_step = 0.02);

  /// Moves to s in steps no larger than max_step. Throws NumericalAbort on ambiguous matching.
  const BranchSample& at(double s);
  const BranchSample& current() const { return sample_; }
  const Eigen::VectorXd& direction() const { return zeta_; }

 private:
  struct Sector
  {
    Eigen::MatrixXd Q;  // orthonormal basis of the sector
    Eigen::MatrixXd L;
    Eigen::MatrixXd V;
    int slots = 0;
    std::vector<int> labels;
    std::vector<CVector> previous;
  };

  void solve(double s, bool classify);

  const CollisionModel& model_;
  Eigen::VectorXd zeta_;
  double max_step_;
  std::vector<Sector> sectors_;
  BranchSample sample_;
};

/// Reflection v -> v - 2 (eta . v) eta in coefficient space (orthogonal and symmetric).
Eigen::MatrixXd reflection_matrix(const VelocityBasis& basis, const Eigen::VectorXd& eta);

/// Largest s at which the branches stay at least half the spectral gap away from the rest.
double estimate_kappa(const CollisionModel& model, const Eigen::VectorXd& direction, double step = 0.02,
                      double s_max = 4.0);

/// Default fit grid: `samples` equispaced points on [kappa/20, kappa/2].
std::vector<double> fit_grid(double kappa, int samples = 16);

/**
 * Radius r <= kappa for the fit window [r/20, r/2]: halves r until the fitted
 * (alpha_j, beta_j) on [r/20, r/2] and [r/40, r/4] agree within `tol`.
 */
double fit_radius(const CollisionModel& model, const Eigen::VectorXd& direction, double kappa, double tol = 1e-8,
                  int max_halvings = 12);

struct SpectralBranch
{
  int label = 0;
  int multiplicity = 1;
  std::vector<double> s;
  std::vector<std::complex<double>> lambda;
  std::vector<CMatrix> projectors;
  double alpha = 0.0;
  double beta = 0.0;
  /// Coefficient of s^3 (purely imaginary: Re lambda is even and Im lambda odd in s).
  std::complex<double> gamma{};
  /// max |lambda - i alpha s + beta s^2| / s^3 over the samples, and over the lower half only.
  double cubic_constant = 0.0;
  double cubic_constant_lower = 0.0;
  double max_real = 0.0;
};

/// Samples and fits the four branches; grid must be increasing and positive.
std::vector<SpectralBranch> eigenbranches(const CollisionModel& model, const Eigen::VectorXd& direction,
                                          const std::vector<double>& grid);

/**
 * Fits Im lambda / s = alpha + sum_{p=1..order} c_p s^{2p} and
 * Re lambda / s^2 = -beta + sum_{p=1..order} d_p s^{2p} by least squares,
 * the parity structure imposed by lambda_j(-s) = conj(lambda_j(s)).
 */
void fit_branch(SpectralBranch& branch, int order = 3);

/// Leading projectors P_j^0(zeta) by polynomial extrapolation of P_j(k h zeta), k = 1..5, to s = 0.
std::array<CMatrix, kBranchCount> leading_projectors(const CollisionModel& model, const Eigen::VectorXd& direction,
                                                     double h = 1e-3);

struct ProjectorFamily
{
  Eigen::VectorXd direction;
  double kappa = 0.0;
  std::vector<double> s;
  std::array<std::vector<CMatrix>, kBranchCount> projectors;
  std::array<CMatrix, kBranchCount> leading;
};

ProjectorFamily projector_family(const CollisionModel& model, const Eigen::VectorXd& direction,
                                 const std::vector<double>& grid);

/// Isotropic branch coefficients (fitted along e_1) and the validity radius.
struct BranchCoefficients
{
  double kappa = 0.0;
  double fit_radius = 0.0;
  std::array<double, kBranchCount> alpha{};
  std::array<double, kBranchCount> beta{};
};

BranchCoefficients branch_coefficients(const CollisionModel& model);

struct SemigroupSplit
{
  std::array<CMatrix, kBranchCount> branch;
  CMatrix remainder;
  CMatrix full;
};

/// U^eps(t, xi) = exp((t/eps^2) A(eps xi)) split into chi-weighted branch parts and the remainder.
SemigroupSplit semigroup_split(const CollisionModel& model, double eps, const Eigen::VectorXd& xi, double t,
                               double kappa);

/// Acoustic part U^eps_disp(t, xi) = sum_{j=1,2} exp(i alpha_j |xi| t/eps - beta_j |xi|^2 t) P_j^0(xi/|xi|).
CMatrix dispersive_part(const BranchCoefficients& coeffs, const std::array<CMatrix, kBranchCount>& leading,
                        double eps, const Eigen::VectorXd& xi, double t);

/// Exponential fit norm ~ C exp(-rate t) of the remainder U^{eps#}(t, xi).
struct RemainderDecay
{
  double eps = 0.0;
  std::vector<double> t;
  std::vector<double> norm;
  double rate = 0.0;
  double prefactor = 0.0;
  int fit_samples = 0;
};

RemainderDecay remainder_decay(const CollisionModel& model, double eps, const Eigen::VectorXd& xi, double kappa,
                               int samples = 200);

/// One Fourier mode of torus data.
struct ModeData
{
  Eigen::VectorXd xi;
  CVector coeffs;
};

/// Samples of ||W^eps(t) f|| with W^eps(t) = (1/eps) U^eps(t) (I - Pi_L), and the fitted envelope.
struct WDecay
{
  double eps = 0.0;
  std::vector<double> t;
  std::vector<double> norm;
  /// Slope of log(sqrt(t) ||W||) fitted on the tail t >= t_end/2, sigma = -slope.
  double sigma = 0.0;
  /// C = max_t sqrt(t) exp(sigma t) ||W(t)||.
  double envelope = 0.0;
  bool tail_decreasing = false;
};

WDecay measure_W_decay(const CollisionModel& model, double eps, const std::vector<ModeData>& modes, double t_end,
                       int samples = 400);

}  // namespace kinhydro
