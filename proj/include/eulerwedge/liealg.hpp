#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include <eulerwedge/errors.hpp>
#include <eulerwedge/numeric.hpp>

namespace ew {

// An element is its coefficient vector in the algebra's basis.
using Element = Eigen::VectorXd;

// Finite-dimensional Lie algebra given by structure constants:
// [e_i, e_j] = sum_k c[i][j](k) e_k. Antisymmetry and the Jacobi identity
// are enforced at construction (residual < 1e-10 on all basis triples).
// When the algebra was built from concrete matrices, `matrix_basis` retains
// them (empty otherwise); the structure constants are what all computations
// use.
struct LieAlgebra {
  int dim = 0;
  std::vector<std::string> basis_labels;
  std::vector<std::vector<Eigen::VectorXd>> c;
  std::vector<Eigen::MatrixXd> matrix_basis;

  Element bracket(const Element& x, const Element& y) const;
};

// Eigenbases of ad h for the eigenvalues +1, 0, -1 (orthonormal columns).
struct Grading {
  Eigen::MatrixXd g_plus;
  Eigen::MatrixXd g_zero;
  Eigen::MatrixXd g_minus;
};

struct EulerReport {
  bool is_euler = false;
  std::vector<double> spectrum;  // eigenvalues of ad h, descending
  Grading grading_bases;
  Eigen::MatrixXd tau_matrix;
  Eigen::MatrixXd n_h_basis;
  Eigen::MatrixXd n_h_natural_basis;  // n_h + span{h}
  bool anti_elliptic = false;
  bool h_in_commutator = false;
};

// Throws JacobiViolation naming the offending basis triple.
void verify_structure(const LieAlgebra& L, double tol = 1e-10);

// Builds the algebra spanned by the given matrices; brackets must close in
// the span (residual < 1e-10), otherwise JacobiViolation.
LieAlgebra from_matrix_basis(std::vector<Eigen::MatrixXd> basis,
                             std::vector<std::string> labels);

// Parses "sl(3)", "gl(2)", "so(1,3)", "sp(4)", "aff(1)", "poincare(4)".
// poincare(d) is the abelian R^d (translations first, labels P0..P{d-1})
// extended by so(1,d-1) acting on it; sp(2n) takes the even argument.
LieAlgebra build_algebra(const std::string& kind);

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);

// Acting algebra l on top of algebra r: basis order is r's basis first, then
// l's; [l_a, r_i] = action[a] * e_i. The action matrices must be derivations
// of r compatible with l's brackets -- verified via the Jacobi check.
LieAlgebra semidirect(const LieAlgebra& acting, const LieAlgebra& module,
                      const std::vector<Eigen::MatrixXd>& action);

// See the data-format section of the README for the accepted TOML subset.
LieAlgebra load_algebra_toml(const std::string& path);

// Coefficient vector of a concrete matrix in L.matrix_basis. Requires the
// algebra to carry matrices and m to lie in their span.
Eigen::VectorXd matrix_coordinates(const LieAlgebra& L,
                                   const Eigen::MatrixXd& m);

Eigen::MatrixXd ad_matrix(const LieAlgebra& L, const Element& x);

// ad h nonzero, diagonalizable (eigendecomposition reconstructs ad h to
// residual < tol), spectrum within tol of {-1,0,1}.
bool is_euler(const LieAlgebra& L, const Element& h, double tol = 1e-8);

// Requires is_euler. Bracket compatibility [g_i,g_j] <= g_{i+j} (zero when
// |i+j| >= 2) is verified to 1e-9.
Grading grading(const LieAlgebra& L, const Element& h, double tol = 1e-8);

// Involution acting as +1 on g_0 and -1 on g_{+1} + g_{-1}. Automorphism
// residual over all basis pairs must stay below 1e-9, else
// AutomorphismViolation.
Eigen::MatrixXd tau_h(const LieAlgebra& L, const Element& h, double tol = 1e-8);

// All eigenvalues of ad h within tol of integers (requires ad h
// diagonalizable).
bool integrality_check(const LieAlgebra& L, const Element& h,
                       double tol = 1e-8);

// Ideal generated by the grading wings: g_1 + [g_1, g_-1] + g_-1.
// The ideal property is verified to 1e-9.
Eigen::MatrixXd n_h(const LieAlgebra& L, const Element& h, double tol = 1e-8);

Eigen::MatrixXd n_h_natural(const LieAlgebra& L, const Element& h,
                            double tol = 1e-8);

// Two independent criteria, which must agree (else CriteriaDisagree):
// dim(n_h + Rh) = dim L, and g_0 <= Rh + [g_1, g_-1].
bool is_anti_elliptic(const LieAlgebra& L, const Element& h, double tol = 1e-8);

// h in span{[x,y] : x in g_1 basis, y in g_-1 basis}.
bool h_in_commutator(const LieAlgebra& L, const Element& h, double tol = 1e-8);

// Kernel basis of ad h (no Euler requirement).
Eigen::MatrixXd centralizer(const LieAlgebra& L, const Element& h,
                            double tol = 1e-8);

EulerReport euler_report(const LieAlgebra& L, const Element& h,
                         double tol = 1e-8);

}  // namespace ew
