#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <eulerwedge/cones.hpp>
#include <eulerwedge/liealg.hpp>

namespace ew {

// Group element carried at the adjoint level: an automorphism matrix of the
// algebra together with a grading parity.
struct GradedGroupElement {
  Eigen::MatrixXd matrix;
  int parity = +1;
};

// Validates the automorphism property on all basis pairs.
GradedGroupElement make_graded_element(const LieAlgebra& L, Eigen::MatrixXd m,
                                       int parity, double tol = 1e-8);

GradedGroupElement compose(const GradedGroupElement& a,
                           const GradedGroupElement& b);
GradedGroupElement inverse(const GradedGroupElement& g);

// Adjoint flow of an algebra element, as a parity +1 group element.
GradedGroupElement exp_ad(const LieAlgebra& L, const Element& x);

// A wedge datum: an element h together with an odd involution fixing it.
struct EulerCouple {
  Element h;
  GradedGroupElement tau;
};

// Checks parity -1, tau^2 = id, and Ad(tau)h = h.
EulerCouple make_couple(const LieAlgebra& L, Element h, GradedGroupElement tau,
                        double tol = 1e-8);

// The couple (h, tau_h) attached to an Euler element.
EulerCouple standard_couple(const LieAlgebra& L, const Element& h,
                            double tol = 1e-8);

// True when Ad(tau) is exactly the grading involution of h.
bool is_euler_couple(const LieAlgebra& L, const EulerCouple& W,
                     double tol = 1e-8);

// parity(g) * Ad(g) x.
Element twisted_adjoint(const GradedGroupElement& g, const Element& x);

// g.(h, tau) = (parity(g) Ad(g) h, g tau g^{-1}); output invariants
// re-verified (InvariantViolation).
EulerCouple act_on_wedge(const LieAlgebra& L, const GradedGroupElement& g,
                         const EulerCouple& W, double tol = 1e-8);

// (-h, tau); an involution on couples, implemented by tau itself.
EulerCouple dual_wedge(const LieAlgebra& L, const EulerCouple& W,
                       double tol = 1e-8);

// Hook for deciding Out verdicts by moving sampled region points.
struct GeometricRealization {
  std::function<std::vector<Eigen::VectorXd>(unsigned seed, int n)>
      sample_wedge;
  std::function<bool(const Eigen::VectorXd&)> in_closed_wedge;
  std::function<Eigen::VectorXd(const GradedGroupElement&,
                                const Eigen::VectorXd&)>
      act;
};

// Order data attached to a pointed invariant cone: the compression
// semigroup is exp(C_+) G_W exp(C_-) with C_+- the graded parts of the cone.
// poincare_dim > 0 switches semigroup membership to the exact closed-form
// decision for that case.
struct WedgeOrderConfig {
  LieAlgebra algebra;
  PolyhedralCone invariant_cone;
  std::function<bool(const GradedGroupElement&)> stabilizer_test;
  int poincare_dim = 0;
  std::optional<GeometricRealization> realization;
  double cone_flow_tol = 1e-8;  // invariance-sampling tolerance for the cone
};

// Throws if the cone contains a line (nonnegative combination of the
// normalized generators summing to zero with weight one).
void verify_pointed(const PolyhedralCone& C, double tol = 1e-9);

// Ready-made config for the spacetime wedge of poincare(d), including a
// geometric realization on sampled wedge points.
WedgeOrderConfig poincare_wedge_config(int d);

// Splits an adjoint matrix of poincare(d) into (lorentz, translation);
// nullopt when the matrix is not of that form.
std::optional<std::pair<Eigen::MatrixXd, Eigen::VectorXd>> poincare_decode(
    const LieAlgebra& L, const Eigen::MatrixXd& adg, int d, double tol = 1e-8);

// Drops generators lying in the cone of the others.
PolyhedralCone reduce_generators(const PolyhedralCone& C, double tol = 1e-9);

enum class SemigroupVerdict { In, Out, Unknown };
enum class OrderVerdict { Leq, NotLeq, Unknown };

const char* to_string(SemigroupVerdict v);
const char* to_string(OrderVerdict v);

// Decides g in exp(C_+) G_W exp(C_-). Exact for the Poincaré case; otherwise
// a seeded multi-start least-squares certificate search (In), then -- if
// certify_out -- a sampled geometric witness (Out, requiring a realization:
// NoGeometricRealization otherwise), else Unknown.
SemigroupVerdict semigroup_member(const WedgeOrderConfig& cfg,
                                  const EulerCouple& W,
                                  const GradedGroupElement& g,
                                  double tol = 1e-8, unsigned seed = 0,
                                  int starts = 200, int iters = 100,
                                  bool certify_out = false);

// g2^{-1} g1 in S_W, mapped to the order verdict for g1.W <= g2.W.
OrderVerdict wedge_leq(const WedgeOrderConfig& cfg, const EulerCouple& W,
                       const GradedGroupElement& g1,
                       const GradedGroupElement& g2, double tol = 1e-8,
                       unsigned seed = 0, int starts = 200, int iters = 100,
                       bool certify_out = false);

}  // namespace ew
