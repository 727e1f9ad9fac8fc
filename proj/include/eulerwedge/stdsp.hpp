#pragma once

#include <Eigen/Dense>
#include <vector>

#include <eulerwedge/errors.hpp>
#include <eulerwedge/numeric.hpp>

namespace ew {

// C^n realified as R^{2n} with coordinates (Re xi, Im xi); I is
// multiplication by i. Antilinear maps become ordinary real matrices that
// anticommute with I.
struct ComplexSpace {
  int n = 0;
  Eigen::MatrixXd I;
};

ComplexSpace make_space(int n);

// Entrywise conjugation diag(1_n, -1_n) in the realified coordinates.
Eigen::MatrixXd coordinate_conjugation(const ComplexSpace& s);

// Realified matrix of a complex-linear operator, and its inverse (which
// requires the input to commute with I).
Eigen::MatrixXd realify(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd complexify(const Eigen::MatrixXd& m, double tol = 1e-9);
Eigen::VectorXcd complexify_vector(const Eigen::VectorXd& v);
Eigen::VectorXd realify_vector(const Eigen::VectorXcd& v);

// Closed real subspace, held as a canonical orthonormal span matrix so that
// equal subspaces have equal representations (to tolerance).
struct RealSubspace {
  Eigen::MatrixXd span_matrix;  // 2n x k
};

RealSubspace make_subspace(const ComplexSpace& s, const Eigen::MatrixXd& raw,
                           const NumCtx& ctx = {});
RealSubspace whole_space(const ComplexSpace& s);
RealSubspace zero_subspace(const ComplexSpace& s);

// Modular data: Delta positive hermitian, J a conjugation, JDJ = D^{-1}.
struct ModularPair {
  Eigen::MatrixXd Delta;
  Eigen::MatrixXd J;
};

// Validates all ModularPair invariants; NotModularPair on failure.
ModularPair make_modular_pair(const ComplexSpace& s, Eigen::MatrixXd Delta,
                              Eigen::MatrixXd J, double tol = 1e-10);

// Unitary (parity +1, commutes with I) or antiunitary (parity -1,
// anticommutes with I) operator; matrix is real orthogonal.
struct AntiUnitaryOp {
  Eigen::MatrixXd matrix;
  int parity = +1;
};

AntiUnitaryOp make_antiunitary(const ComplexSpace& s, Eigen::MatrixXd m,
                               int parity, double tol = 1e-9);

// The unitary Delta^{it} of a positive hermitian Delta.
AntiUnitaryOp modular_flow(const ComplexSpace& s, const Eigen::MatrixXd& Delta,
                           double t);

// Fixed space of J Delta^{1/2}; the result is checked to be standard.
RealSubspace subspace_from_modular(const ComplexSpace& s, const ModularPair& p,
                                   const NumCtx& ctx = {});

// Polar decomposition of the Tomita involution of a standard V.
// NotStandard when V is not standard.
ModularPair modular_from_subspace(const ComplexSpace& s, const RealSubspace& V,
                                  const NumCtx& ctx = {});

// Annihilator of V under the symplectic form Im<.,.>.
RealSubspace symplectic_complement(const ComplexSpace& s,
                                   const RealSubspace& V,
                                   const NumCtx& ctx = {});

bool is_cyclic(const ComplexSpace& s, const RealSubspace& V,
               const NumCtx& ctx = {});
bool is_separating(const ComplexSpace& s, const RealSubspace& V,
                   const NumCtx& ctx = {});
bool is_standard(const ComplexSpace& s, const RealSubspace& V,
                 const NumCtx& ctx = {});

// U.V for standard V. Internally re-verified: Delta and J of the image are
// the plain conjugates U Delta U^T and U J U^T, and the modular flow obeys
// U Delta^{it} U^T = Delta_{UV}^{parity * it} (an antilinear U reverses the
// flow direction).
RealSubspace transform(const ComplexSpace& s, const AntiUnitaryOp& U,
                       const RealSubspace& V, const NumCtx& ctx = {});

// Intersection of { U V : U in ops }; the whole space when ops is empty.
RealSubspace intersect_family(const ComplexSpace& s, const RealSubspace& V,
                              const std::vector<AntiUnitaryOp>& ops,
                              const NumCtx& ctx = {});

ComplexSpace direct_sum_space(const ComplexSpace& a, const ComplexSpace& b);

// Embedding of summand `which` (0 or 1) into the realified direct sum.
Eigen::MatrixXd summand_embedding(const ComplexSpace& a, const ComplexSpace& b,
                                  int which);

RealSubspace direct_sum(const ComplexSpace& a, const RealSubspace& Va,
                        const ComplexSpace& b, const RealSubspace& Vb,
                        const NumCtx& ctx = {});

// Blockwise operator on the direct sum; the parities must agree.
AntiUnitaryOp direct_sum_op(const ComplexSpace& a, const AntiUnitaryOp& Ua,
                            const ComplexSpace& b, const AntiUnitaryOp& Ub);

// Doubled space H + conj(H) for a positive hermitian Delta: the canonical
// standard subspace is the graph of Delta^{1/2}, its modular operator is
// Delta + Delta^{-1} and its conjugation is the component swap (both
// re-derived from the subspace and checked). Each input unitary u (assumed
// to commute with the reflection implicit in the doubling) is carried to
// u + conj(u) on the doubled space.
struct Doubling {
  ComplexSpace tilde_space;
  RealSubspace tilde_V;
  ModularPair tilde_pair;
  std::vector<AntiUnitaryOp> tilde_ops;
};

Doubling doubling(const ComplexSpace& s,
                  const std::vector<Eigen::MatrixXd>& unitaries,
                  const Eigen::MatrixXd& Delta, const NumCtx& ctx = {});

ComplexSpace tensor_space(const ComplexSpace& a, const ComplexSpace& b);

// Closed real span of elementary tensors of two standard subspaces. The
// multiplicativity of the modular data is re-verified internally.
RealSubspace tensor(const ComplexSpace& a, const RealSubspace& Va,
                    const ComplexSpace& b, const RealSubspace& Vb,
                    const NumCtx& ctx = {});

// Modular pair and standard subspace generated by a hermitian K via
// Delta = exp(-2 pi K) and the conjugation J. Requires J K J = -K
// (equivalently J Delta J = Delta^{-1}); ModularRelationViolation
// otherwise. Every basis vector xi of the result is checked to satisfy
// Delta^{1/2} xi = J xi.
struct BglResult {
  ModularPair pair;
  RealSubspace V;
};

BglResult bgl_pair(const ComplexSpace& s, const Eigen::MatrixXd& K,
                   const Eigen::MatrixXd& J, const NumCtx& ctx = {});

}  // namespace ew
