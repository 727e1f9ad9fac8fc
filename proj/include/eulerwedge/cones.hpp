#pragma once

#include <Eigen/Dense>
#include <vector>

#include <eulerwedge/liealg.hpp>

namespace ew {

// Cone given as the nonnegative span of finitely many nonzero generators.
struct PolyhedralCone {
  int ambient_dim = 0;
  std::vector<Eigen::VectorXd> generators;
};

PolyhedralCone make_cone(int ambient_dim,
                         std::vector<Eigen::VectorXd> generators);

// A finite-dimensional representation by derivative images: one
// skew-hermitian matrix per algebra basis element, satisfying the bracket
// relations. Validated by make_rep.
struct FiniteDimRep {
  LieAlgebra algebra;
  std::vector<Eigen::MatrixXcd> images;
};

FiniteDimRep make_rep(LieAlgebra algebra, std::vector<Eigen::MatrixXcd> images,
                      double tol = 1e-8);

Eigen::MatrixXcd rep_image(const FiniteDimRep& rep, const Element& x);

// Nonnegative least squares (active-set). Returns the coefficient vector;
// throws SolverFailure if the iteration cap is hit.
Eigen::VectorXd nonnegative_lsq(const Eigen::MatrixXd& A,
                                const Eigen::VectorXd& b);

// x within tol * max(1,|x|) of the nonnegative span of the generators.
bool cone_member(const PolyhedralCone& C, const Eigen::VectorXd& x,
                 double tol);

struct GradedConeParts {
  PolyhedralCone plus;   // C  intersect  g_{+1}(h)
  PolyhedralCone minus;  // -C intersect  g_{-1}(h)
};

// Splits an ad-h-flow-invariant cone along the grading of h. Invariance is
// certified by sampling `samples` seeded flow times; the parts are computed
// exactly from the spectral projections of the generators (for an invariant
// closed cone the projection of C onto the +1 eigenspace equals the
// intersection).
GradedConeParts graded_cone_parts(const PolyhedralCone& C, const LieAlgebra& L,
                                  const Element& h, double tol = 1e-8,
                                  unsigned seed = 0, int samples = 64);

// Wedge of the order semigroup at the Lie-algebra level: an edge subspace
// plus a pointed cone part.
struct LieWedge {
  Eigen::MatrixXd edge;  // orthonormal columns
  PolyhedralCone cone;
};

LieWedge lie_wedge_LSW(const Eigen::MatrixXd& g0_basis,
                       const PolyhedralCone& c_plus,
                       const PolyhedralCone& c_minus);

// Membership in edge + cone: quotient by the edge, then test the cone part.
bool lie_wedge_member(const LieWedge& W, const Eigen::VectorXd& x, double tol);

// Smallest eigenvalue of -i * rep_image(x) is >= -tol. The image must be
// skew-hermitian (else NotSkewHermitian).
bool positive_cone_member(const FiniteDimRep& rep, const Element& x,
                          double tol);

}  // namespace ew
