#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include <eulerwedge/causal.hpp>
#include <eulerwedge/errors.hpp>
#include <eulerwedge/stdsp.hpp>

namespace ew {

// One group element of a finite wedge family: an affine isometry of
// R^{1,d} together with its operator on the model space.
struct FamilyElement {
  IsometryElement motion;
  AntiUnitaryOp op;
};

// Finite window into a covariant model: a standard subspace V attached to
// the base wedge |x_0| < x_1, and finitely many group elements carrying
// translated wedges g.W and the images op.V. All net evaluations run over
// this finite family, which makes intersections too large and span-closures
// too small compared to a full group; verdicts are honest for the family.
struct NetConfig {
  ComplexSpace space;
  RealSubspace V;
  std::vector<FamilyElement> family;
  int spacetime_dim = 0;  // points have spacetime_dim + 1 coordinates
  double tol = 1e-9;
};

// Validates: V standard; every operator orthogonal with a consistent
// parity law; the representation multiplicative on the listed elements
// (whenever a product of two listed motions is again listed, the operators
// must compose accordingly); and the base wedge invariant under the boost
// flow on sampled points.
NetConfig make_net_config(const ComplexSpace& space, const RealSubspace& V,
                          std::vector<FamilyElement> family, double tol = 1e-9);

// Open region, probed by membership sampling inside [box_lo, box_hi]. When
// the region is exactly a translated wedge g.W, `as_wedge` holds g and
// inclusion tests against other wedges use the exact compression-semigroup
// criterion instead of sampling.
struct Region {
  std::function<bool(const SpacetimePoint&)> contains;
  Eigen::VectorXd box_lo;
  Eigen::VectorXd box_hi;
  std::optional<IsometryElement> as_wedge;
};

Region make_region(std::function<bool(const SpacetimePoint&)> contains,
                   Eigen::VectorXd box_lo, Eigen::VectorXd box_hi);

// The wedge region g.W with a symmetric sampling box of half-width radius.
Region wedge_region(const NetConfig& cfg, const IsometryElement& g,
                    double radius = 4.0);

// Is O contained in g.W? Exact when O is itself a wedge; otherwise decided
// on sampled points of O, where a hit outside g.W certifies "no" and fewer
// than 32 usable samples raises AmbiguousInclusion.
bool region_in_wedge(const NetConfig& cfg, const Region& O,
                     const IsometryElement& g, int samples = 400,
                     unsigned seed = 0);

// Is g.W contained in O? Exact when O is a wedge; otherwise decided on
// sampled wedge points pushed through g (wedge points are generated
// directly, so this direction never starves).
bool wedge_in_region(const NetConfig& cfg, const IsometryElement& g,
                     const Region& O, int samples = 400, unsigned seed = 0);

// Intersection of op.V over the listed g whose wedge contains O; the whole
// space for the empty intersection.
RealSubspace h_max(const NetConfig& cfg, const Region& O, int samples = 400,
                   unsigned seed = 0);

// Closed span of op.V over the listed g whose wedge lies inside O; {0} for
// the empty sum.
RealSubspace h_min(const NetConfig& cfg, const Region& O, int samples = 400,
                   unsigned seed = 0);

// The hull of O relative to the family: the intersection of all listed
// wedges containing O. Its qualifying set equals that of O, so h_max takes
// the same value on both.
Region hull_region(const NetConfig& cfg, const Region& O, int samples = 400,
                   unsigned seed = 0);

// Verdicts for the seven-way equivalence at the base wedge. The lemma makes
// (i)-(vii) equivalent over the full group; over a finite family each entry
// is evaluated independently and `consistent` records whether they agree.
// `violating_index` names a family element witnessing a failure of (i).
struct DirectNetReport {
  bool compressors_fix_v = false;  // (i)   g.W in W implies op.V in V
  bool hmax_equals_v = false;      // (ii)
  bool hmax_standard = false;      // (iii)
  bool hmax_cyclic = false;        // (iv)
  bool hmin_equals_v = false;      // (v)
  bool hmin_standard = false;      // (vi)
  bool hmin_separating = false;    // (vii)
  bool consistent = false;
  std::optional<int> violating_index;
};

DirectNetReport direct_net_report(const NetConfig& cfg, int samples = 400,
                                  unsigned seed = 0);

// Checks that a candidate net H sits between h_min and h_max on the probe
// regions. Preconditions verified first, each with its own error message:
// H(W) = V, covariance H(g.W) = op.H(W) on the family, and isotony on
// exactly-decidable wedge pairs. PreconditionViolated names the axiom.
bool sandwich_check(const NetConfig& cfg,
                    const std::function<RealSubspace(const Region&)>& net,
                    const std::vector<Region>& probes, int samples = 400,
                    unsigned seed = 0);

// Rank diagnostics for the intersection over an identity neighborhood:
// cyclic_rank = rank(V_N + I V_N), regular iff it is full.
struct RegularityProbe {
  int cyclic_rank = 0;
  bool regular = false;
};

RegularityProbe regularity_probe(const ComplexSpace& space,
                                 const RealSubspace& V,
                                 const std::vector<AntiUnitaryOp>& ops,
                                 double tol = 1e-9);

// V_G = intersection of op.V over the sampled group, compared against
// V meet V' computed from projectors. Agreement is reported, not enforced:
// it characterizes the degenerate case and can legitimately fail.
struct DegeneracyReport {
  RealSubspace V_G;
  RealSubspace V_cap_Vprime;
  bool equal = false;
};

DegeneracyReport degeneracy_report(const ComplexSpace& space,
                                   const RealSubspace& V,
                                   const std::vector<AntiUnitaryOp>& ops,
                                   const NumCtx& ctx = {});

}  // namespace ew
