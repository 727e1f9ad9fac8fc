#include <eulerwedge/numeric.hpp>

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace ew {

namespace {

Eigen::JacobiSVD<Eigen::MatrixXd> thin_svd(const Eigen::MatrixXd& A) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(
      A, Eigen::ComputeThinU | Eigen::ComputeFullV);
}

int rank_from_svd(const Eigen::VectorXd& sv, const NumCtx& ctx) {
  const double smax = sv.size() ? sv(0) : 0.0;
  const double thresh = ctx.tol * std::max(1.0, smax);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > thresh) ++r;
    if (sv(i) > thresh / 10 && sv(i) < thresh * 10)
      ctx.warn("DegenerateRank: singular value " + std::to_string(sv(i)) +
               " within a decade of threshold " + std::to_string(thresh));
  }
  return r;
}

}  // namespace

int numeric_rank(const Eigen::MatrixXd& A, const NumCtx& ctx) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  return rank_from_svd(svd.singularValues(), ctx);
}

Eigen::MatrixXd column_space(const Eigen::MatrixXd& A, const NumCtx& ctx) {
  if (A.size() == 0) return Eigen::MatrixXd(A.rows(), 0);
  auto svd = thin_svd(A);
  const int r = rank_from_svd(svd.singularValues(), ctx);
  return svd.matrixU().leftCols(r);
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& A, const NumCtx& ctx) {
  if (A.size() == 0) return Eigen::MatrixXd::Identity(A.cols(), A.cols());
  auto svd = thin_svd(A);
  const int r = rank_from_svd(svd.singularValues(), ctx);
  return svd.matrixV().rightCols(A.cols() - r);
}

Eigen::MatrixXd projector(const Eigen::MatrixXd& A, const NumCtx& ctx) {
  const Eigen::MatrixXd Q = column_space(A, ctx);
  if (Q.cols() == 0) return Eigen::MatrixXd::Zero(A.rows(), A.rows());
  return Q * Q.transpose();
}

Eigen::MatrixXd canonical_span(const Eigen::MatrixXd& A, const NumCtx& ctx) {
  if (A.size() == 0 || A.cols() == 0) return Eigen::MatrixXd(A.rows(), 0);
  Eigen::MatrixXd P = projector(A, ctx);
  const int n = static_cast<int>(P.cols());
  const int r = numeric_rank(A, ctx);
  Eigen::MatrixXd B(P.rows(), r);
  // Pivoted Gram-Schmidt on the projector columns: the projector depends only
  // on the subspace, and the pivot/sign rules below are deterministic, so the
  // result is a canonical basis.
  for (int k = 0; k < r; ++k) {
    int pivot = 0;
    double best = -1.0;
    for (int j = 0; j < n; ++j) {
      const double nrm = P.col(j).norm();
      if (nrm > best * (1 + 1e-12)) {
        best = nrm;
        pivot = j;
      }
    }
    Eigen::VectorXd q = P.col(pivot);
    q /= q.norm();
    int imax = 0;
    q.cwiseAbs().maxCoeff(&imax);
    if (q(imax) < 0) q = -q;
    B.col(k) = q;
    P -= q * (q.transpose() * P);
  }
  return B;
}

Eigen::MatrixXd hcat(const std::vector<Eigen::MatrixXd>& parts,
                     Eigen::Index rows) {
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    cols += p.cols();
    if (p.size() > 0 && p.rows() != rows)
      throw std::invalid_argument("hcat: row counts differ");
  }
  Eigen::MatrixXd out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    if (p.cols() > 0) out.middleCols(at, p.cols()) = p;
    at += p.cols();
  }
  return out;
}

bool in_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v,
             double tol) {
  if (basis.cols() == 0) return v.norm() <= tol;
  const Eigen::VectorXd c = basis.colPivHouseholderQr().solve(v);
  return (basis * c - v).norm() <= tol * std::max(1.0, v.norm());
}

bool span_contains(const Eigen::MatrixXd& big, const Eigen::MatrixXd& small,
                   double tol) {
  for (int j = 0; j < small.cols(); ++j)
    if (!in_span(big, small.col(j), tol)) return false;
  return true;
}

bool spans_equal(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                 double tol) {
  NumCtx ctx{tol, nullptr};
  const Eigen::MatrixXd PA = projector(A, ctx);
  const Eigen::MatrixXd PB = projector(B, ctx);
  if (PA.rows() != PB.rows()) return false;
  return (PA - PB).norm() <= tol * std::max<double>(1.0, PA.rows());
}

}  // namespace ew
