#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <eulerwedge/stdsp.hpp>

namespace ew {

// Uniformly spaced sampling coordinate u (u = log p on the half-line grid,
// u = p on the line grid) with quadrature weights for the underlying
// measure (p dp on the half-line, dp on the line; trapezoid ends).
struct Grid {
  Eigen::VectorXd nodes;    // physical variable p at each node
  Eigen::VectorXd coords;   // uniform sampling coordinate u
  Eigen::VectorXd weights;  // quadrature weight per node
  double du = 0.0;          // step of the sampling coordinate
  bool log_spaced = false;
};

enum class ModelKind { CurrentHalfLine, AffineLine };

// Discretized one-particle model. State vectors carry the square root of
// the quadrature weight, so the ambient inner product is the plain one and
// shifts of the sampling coordinate are plain (near-)permutations.
//
// On the half-line grid the shift of u = log p is the dilation
// F(p) -> a F(ap) including its measure factor; on the line grid it is the
// translation f(p) -> f(p + t).  The diagonal phase exp(i s nodes_j)
// realizes exp(isp) on the half-line and the generator profile exp(p) on
// the line.  J is F -> -conj F; K = -i d/du is the hermitian shift
// generator, discretized by the fourth-order centered difference (circular
// on the log grid, zero boundary on the line grid), so that J K J = -K
// holds exactly at matrix level.
struct GridOperatorSet {
  ModelKind kind = ModelKind::CurrentHalfLine;
  Grid grid;
  ComplexSpace space;             // realified C^N
  Eigen::VectorXd phase_profile;  // phase_op(s) = diag exp(i s profile_j)
  Eigen::MatrixXd K;              // realified hermitian shift generator
  AntiUnitaryOp J;
  bool circular = false;
};

// Half-line current model on a log-spaced grid; ResolutionTooCoarse for
// N < 16, InvariantViolation unless 0 < p_min < p_max.
GridOperatorSet build_u1_current(int N, double p_min, double p_max);

// Affine-line model on a uniform grid over [-half_width, half_width].
GridOperatorSet build_aff_rep(int N, double half_width);

// Exactly unitary diagonal phase exp(i s profile).
AntiUnitaryOp phase_op(const GridOperatorSet& ops, double s);

// Interpolating shift of the sampling coordinate by t: exact node
// permutation when t is a grid multiple, cubic interpolation for the
// fractional part.  Near-unitary on smooth content; zero-fill truncation
// on non-circular grids (which also require grid-multiple t).
Eigen::MatrixXd shift_matrix(const GridOperatorSet& ops, double t);

// Exactly orthogonal version of the same shift (interpolation symbol
// normalized mode by mode); circular grids only.
AntiUnitaryOp shift_op(const GridOperatorSet& ops, double t);

// Shift applied to a realified state vector.  On zero-fill grids the state
// must keep its support |t/du| + stencil nodes away from the grid edges;
// PreconditionViolated otherwise.
Eigen::VectorXd apply_shift(const GridOperatorSet& ops, double t,
                            const Eigen::VectorXd& state);

// Dilation F(p) -> a F(ap) on the half-line grid: u-shift by log a.
Eigen::MatrixXd dilation_matrix(const GridOperatorSet& ops, double a);
AntiUnitaryOp dilation_op(const GridOperatorSet& ops, double a);

// sqrt-weighted realified embedding of profile samples F(nodes_j), and the
// grid value of the pairing <F,G> = sum_j w_j conj(F_j) G_j.
Eigen::VectorXd embed_samples(const GridOperatorSet& ops,
                              const Eigen::VectorXcd& values);
std::complex<double> pairing(const GridOperatorSet& ops,
                             const Eigen::VectorXcd& F,
                             const Eigen::VectorXcd& G);

// Embedding of the constant profile F = 1.  A grid-ratio dilation acts on
// it by the exact multiplier a away from the wrap seam.
Eigen::VectorXd constant_direction(const GridOperatorSet& ops);

// Relative defect of op^T op - id on band-limited probes with frequencies
// up to `band` (the default diagnostic probe set).
double unitarity_defect(const GridOperatorSet& ops,
                        const Eigen::MatrixXd& op_matrix, double band = 1.5);

// Approximate standard-subspace data generated by K through
// Delta = exp(-2 pi K): the returned basis solves the grid KMS equation
// Delta^{1/2} xi = J xi mode by mode.  Modes with |frequency| beyond
// `window` are excluded (their Delta-eigenvalues are not representable),
// so V spans only the resolvable low-frequency block.
struct BglGridResult {
  RealSubspace V;
  Eigen::MatrixXd half_delta;     // windowed Delta^{1/2}, realified
  Eigen::VectorXd kms_residuals;  // per returned basis vector
  double window = 0.0;
};

// GeneratorIllConditioned when the windowed spectrum would exceed what
// doubles can represent accurately (pi * window > 21) or when K fails its
// structure checks.
BglGridResult bgl_subspace_grid(const GridOperatorSet& ops,
                                double window = 4.0);

// Real span of embedded derivatives-of-test-functions: for each interval,
// Chebyshev-polynomial-times-bump functions f, embedded through the
// Fourier transform as (-ip)^{order-1} fhat(p).  EmptyDictionary when the
// dictionary is empty.
RealSubspace test_function_subspace(
    const GridOperatorSet& ops,
    const std::vector<std::pair<double, double>>& intervals, int order,
    int dictionary_size);

// Singular values of the component of the order-k span outside the
// order-l span (columns normalized); the count of significant entries
// estimates dim H^(k)/H^(l).  The full profile is returned so threshold
// choices stay auditable.
Eigen::VectorXd codim_profile(
    const GridOperatorSet& ops,
    const std::vector<std::pair<double, double>>& intervals, int k, int l,
    int dictionary_size);

// Ranks of the intersection of U(g) V over scaled parameter samples
// g = (phase s, shift t); the identity is always included.  On
// non-circular grids the shift component is ignored (no unitary shift).
struct RegularityTrajectory {
  Eigen::VectorXd scales;
  std::vector<int> ranks;
  int v_dim = 0;
};

RegularityTrajectory regularity_demo(
    const GridOperatorSet& ops, const RealSubspace& V,
    const std::vector<std::pair<double, double>>& pairs,
    const Eigen::VectorXd& scales, double tol = 1e-5);

// Two-resolution diagnostic: the quantity at N and at 2N, their ratio and
// whether it improved by at least the factor 0.5.
struct TrendReport {
  double coarse = 0.0;
  double fine = 0.0;
  double ratio = 0.0;
  bool improved = false;
};

// Grid KMS residual of a fixed band-limited vector whose continuum
// counterpart solves the KMS equation exactly.
TrendReport kms_refinement(int N, double p_min, double p_max);

// Unitarity defect of the interpolating dilation at a non-grid ratio.
TrendReport dilation_defect_refinement(int N, double p_min, double p_max,
                                       double a);

// Quadrature error of the pairing against a high-order reference value.
TrendReport pairing_refinement(int N, double p_min, double p_max);

// Relative error of [K_shift, phase generator] = phase generator on the
// line grid (the affine commutation relation).
TrendReport commutator_refinement(int N, double half_width);

// Spread diagnostics of the shift generator's eigenvectors away from the
// boundary: large single-node mass would indicate an isolated eigenvector.
struct SpreadReport {
  double max_node_mass = 0.0;
  int interior_count = 0;
};

SpreadReport shift_generator_spread(const GridOperatorSet& ops);

// Realified multiplication generator i * diag(phase_profile).
Eigen::MatrixXd position_phase_generator(const GridOperatorSet& ops);

// Largest interior deviation of shift-conjugation acting on the phase
// generator from the exact multiplier exp(t); t must be a grid multiple.
double scaling_conjugation_defect(const GridOperatorSet& ops, double t);

}  // namespace ew
