#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ew {

// Tolerance context shared by the numeric-linear-algebra layer. `warnings`,
// when non-null, collects non-fatal diagnostics (e.g. rank decisions made
// close to the threshold).
struct NumCtx {
  double tol = 1e-9;
  std::vector<std::string>* warnings = nullptr;

  void warn(const std::string& msg) const {
    if (warnings) warnings->push_back(msg);
  }
};

// Rank of A with threshold tol * max(1, sigma_max). Emits a DegenerateRank
// warning when a singular value falls within a decade of the threshold, i.e.
// when the rank decision is numerically fragile.
int numeric_rank(const Eigen::MatrixXd& A, const NumCtx& ctx = {});

// Orthonormal basis of the column span (SVD left vectors kept above the rank
// threshold). Column order follows singular-value order, so it is
// deterministic but depends on A's column scaling; use canonical_span for a
// representation that depends only on the subspace.
Eigen::MatrixXd column_space(const Eigen::MatrixXd& A, const NumCtx& ctx = {});

// Orthonormal basis of ker A.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& A, const NumCtx& ctx = {});

// Orthogonal projector onto the column span of A (columns need not be
// independent or normalized).
Eigen::MatrixXd projector(const Eigen::MatrixXd& A, const NumCtx& ctx = {});

// Deterministic orthonormal basis depending (to tolerance) only on the
// subspace spanned by A's columns: pivoted Gram-Schmidt over the projector's
// columns with a fixed tie-breaking and sign rule.
Eigen::MatrixXd canonical_span(const Eigen::MatrixXd& A, const NumCtx& ctx = {});

// Column-wise concatenation tolerating zero-column blocks. All non-empty
// blocks must agree on the row count; `rows` disambiguates when every block
// is empty.
Eigen::MatrixXd hcat(const std::vector<Eigen::MatrixXd>& parts,
                     Eigen::Index rows);

// Is v in the column span of `basis`? Residual test against
// tol * max(1, |v|).
bool in_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v,
             double tol);

// Does span(big) contain span(small)?
bool span_contains(const Eigen::MatrixXd& big, const Eigen::MatrixXd& small,
                   double tol);

// Do A and B span the same subspace? Projector Frobenius-distance test.
bool spans_equal(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                 double tol);

}  // namespace ew
