#include <eulerwedge/stdsp.hpp>

#include <cmath>
#include <complex>

namespace ew {

namespace {

void check_sizes(const ComplexSpace& s, const Eigen::MatrixXd& m,
                 const char* what) {
  if (m.rows() != 2 * s.n || m.cols() != 2 * s.n)
    throw Error(Err::DimensionMismatch, std::string(what) + " shape");
}

bool commutes_with_i(const ComplexSpace& s, const Eigen::MatrixXd& m,
                     double tol) {
  return (m * s.I - s.I * m).norm() <= tol * std::max(1.0, m.norm());
}

bool anticommutes_with_i(const ComplexSpace& s, const Eigen::MatrixXd& m,
                         double tol) {
  return (m * s.I + s.I * m).norm() <= tol * std::max(1.0, m.norm());
}

bool is_orthogonal(const Eigen::MatrixXd& m, double tol) {
  const int n = static_cast<int>(m.rows());
  return (m.transpose() * m - Eigen::MatrixXd::Identity(n, n)).norm() <=
         tol * n;
}

Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).operatorSqrt();
}

// Hermitian positive definiteness of a realified operator.
void check_positive_hermitian(const ComplexSpace& s, const Eigen::MatrixXd& m,
                              double tol, Err code, const char* what) {
  check_sizes(s, m, what);
  if ((m - m.transpose()).norm() > tol * std::max(1.0, m.norm()) ||
      !commutes_with_i(s, m, tol))
    throw Error(code, std::string(what) + " is not hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 *
                                                    (m + m.transpose()));
  if (es.eigenvalues().minCoeff() <= tol)
    throw Error(code, std::string(what) + " is not positive definite");
}

}  // namespace

ComplexSpace make_space(int n) {
  if (n < 1) throw Error(Err::DimensionMismatch, "need n >= 1");
  ComplexSpace s;
  s.n = n;
  s.I = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  s.I.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  s.I.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  return s;
}

Eigen::MatrixXd coordinate_conjugation(const ComplexSpace& s) {
  Eigen::VectorXd d(2 * s.n);
  d.head(s.n).setOnes();
  d.tail(s.n).setConstant(-1.0);
  return d.asDiagonal();
}

Eigen::MatrixXd realify(const Eigen::MatrixXcd& m) {
  const int r = static_cast<int>(m.rows());
  const int c = static_cast<int>(m.cols());
  Eigen::MatrixXd out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = m.real();
  out.topRightCorner(r, c) = -m.imag();
  out.bottomLeftCorner(r, c) = m.imag();
  out.bottomRightCorner(r, c) = m.real();
  return out;
}

Eigen::MatrixXcd complexify(const Eigen::MatrixXd& m, double tol) {
  const int n = static_cast<int>(m.rows()) / 2;
  if (m.rows() != 2 * n || m.cols() != 2 * n)
    throw Error(Err::DimensionMismatch, "realified matrix must be 2n x 2n");
  if ((m.topLeftCorner(n, n) - m.bottomRightCorner(n, n)).norm() >
          tol * std::max(1.0, m.norm()) ||
      (m.topRightCorner(n, n) + m.bottomLeftCorner(n, n)).norm() >
          tol * std::max(1.0, m.norm()))
    throw Error(Err::InvariantViolation,
                "matrix is not complex-linear in the realified coordinates");
  return m.topLeftCorner(n, n).cast<std::complex<double>>() +
         std::complex<double>(0, 1) *
             m.bottomLeftCorner(n, n).cast<std::complex<double>>();
}

Eigen::VectorXcd complexify_vector(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size()) / 2;
  return v.head(n).cast<std::complex<double>>() +
         std::complex<double>(0, 1) * v.tail(n).cast<std::complex<double>>();
}

Eigen::VectorXd realify_vector(const Eigen::VectorXcd& v) {
  Eigen::VectorXd out(2 * v.size());
  out.head(v.size()) = v.real();
  out.tail(v.size()) = v.imag();
  return out;
}

RealSubspace make_subspace(const ComplexSpace& s, const Eigen::MatrixXd& raw,
                           const NumCtx& ctx) {
  if (raw.rows() != 2 * s.n)
    throw Error(Err::DimensionMismatch, "span rows vs space");
  return RealSubspace{canonical_span(raw, ctx)};
}

RealSubspace whole_space(const ComplexSpace& s) {
  return RealSubspace{Eigen::MatrixXd::Identity(2 * s.n, 2 * s.n)};
}

RealSubspace zero_subspace(const ComplexSpace& s) {
  return RealSubspace{Eigen::MatrixXd(2 * s.n, 0)};
}

ModularPair make_modular_pair(const ComplexSpace& s, Eigen::MatrixXd Delta,
                              Eigen::MatrixXd J, double tol) {
  check_positive_hermitian(s, Delta, tol, Err::NotModularPair,
                           "modular operator");
  check_sizes(s, J, "conjugation");
  if (!is_orthogonal(J, tol) || !anticommutes_with_i(s, J, tol))
    throw Error(Err::NotModularPair, "J is not a conjugation");
  if ((J * J - Eigen::MatrixXd::Identity(2 * s.n, 2 * s.n)).norm() >
      tol * 2 * s.n)
    throw Error(Err::NotModularPair, "J is not an involution");
  const Eigen::MatrixXd rel = J * Delta * J * Delta;
  if ((rel - Eigen::MatrixXd::Identity(2 * s.n, 2 * s.n)).norm() >
      tol * std::max(1.0, Delta.norm() * Delta.norm()))
    throw Error(Err::NotModularPair, "J Delta J != Delta^{-1}");
  return ModularPair{std::move(Delta), std::move(J)};
}

AntiUnitaryOp make_antiunitary(const ComplexSpace& s, Eigen::MatrixXd m,
                               int parity, double tol) {
  check_sizes(s, m, "operator");
  if (parity != 1 && parity != -1)
    throw Error(Err::InvariantViolation, "parity must be +1 or -1");
  if (!is_orthogonal(m, tol))
    throw Error(Err::InvariantViolation, "operator is not orthogonal");
  const bool ok = parity == 1 ? commutes_with_i(s, m, tol)
                              : anticommutes_with_i(s, m, tol);
  if (!ok)
    throw Error(Err::InvariantViolation,
                "operator does not satisfy its complex-structure law");
  return AntiUnitaryOp{std::move(m), parity};
}

AntiUnitaryOp modular_flow(const ComplexSpace& s, const Eigen::MatrixXd& Delta,
                           double t) {
  check_positive_hermitian(s, Delta, 1e-9, Err::NotModularPair,
                           "modular operator");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(complexify(Delta));
  Eigen::VectorXcd phases(s.n);
  for (int i = 0; i < s.n; ++i)
    phases(i) = std::exp(std::complex<double>(0, t) *
                         std::log(es.eigenvalues()(i)));
  const Eigen::MatrixXcd u = es.eigenvectors() * phases.asDiagonal() *
                             es.eigenvectors().adjoint();
  return make_antiunitary(s, realify(u), +1);
}

RealSubspace subspace_from_modular(const ComplexSpace& s, const ModularPair& p,
                                   const NumCtx& ctx) {
  make_modular_pair(s, p.Delta, p.J, 1e-10);
  const Eigen::MatrixXd tomita = p.J * sym_sqrt(p.Delta);
  const Eigen::MatrixXd fixed = null_space(
      tomita - Eigen::MatrixXd::Identity(2 * s.n, 2 * s.n), ctx);
  const RealSubspace V{canonical_span(fixed, ctx)};
  if (!is_standard(s, V, ctx))
    throw Error(Err::NotModularPair, "fixed space of J Delta^{1/2} is not standard");
  return V;
}

ModularPair modular_from_subspace(const ComplexSpace& s, const RealSubspace& V,
                                  const NumCtx& ctx) {
  if (!is_standard(s, V, ctx))
    throw Error(Err::NotStandard, "subspace is not standard");
  const int n = s.n;
  Eigen::MatrixXd b(2 * n, 2 * n);
  b.leftCols(n) = V.span_matrix;
  b.rightCols(n) = s.I * V.span_matrix;
  Eigen::VectorXd signs(2 * n);
  signs.head(n).setOnes();
  signs.tail(n).setConstant(-1.0);
  // Tomita involution: +1 on V, -1 on IV.
  const Eigen::MatrixXd tomita =
      b * signs.asDiagonal() * b.partialPivLu().solve(
                                   Eigen::MatrixXd::Identity(2 * n, 2 * n));
  const Eigen::MatrixXd delta = tomita.transpose() * tomita;
  const Eigen::MatrixXd j =
      tomita * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(delta)
                   .operatorInverseSqrt();
  return make_modular_pair(s, delta, j, 1e-9);
}

RealSubspace symplectic_complement(const ComplexSpace& s,
                                   const RealSubspace& V, const NumCtx& ctx) {
  if (V.span_matrix.cols() == 0) return whole_space(s);
  const Eigen::MatrixXd rows = (s.I * V.span_matrix).transpose();
  return RealSubspace{canonical_span(null_space(rows, ctx), ctx)};
}

bool is_cyclic(const ComplexSpace& s, const RealSubspace& V,
               const NumCtx& ctx) {
  const Eigen::MatrixXd stack =
      hcat({V.span_matrix, s.I * V.span_matrix}, 2 * s.n);
  return numeric_rank(stack, ctx) == 2 * s.n;
}

bool is_separating(const ComplexSpace& s, const RealSubspace& V,
                   const NumCtx& ctx) {
  const Eigen::MatrixXd stack =
      hcat({V.span_matrix, s.I * V.span_matrix}, 2 * s.n);
  return numeric_rank(stack, ctx) ==
         2 * static_cast<int>(V.span_matrix.cols());
}

bool is_standard(const ComplexSpace& s, const RealSubspace& V,
                 const NumCtx& ctx) {
  if (V.span_matrix.cols() != s.n) return false;
  return is_cyclic(s, V, ctx) && is_separating(s, V, ctx);
}

RealSubspace transform(const ComplexSpace& s, const AntiUnitaryOp& U,
                       const RealSubspace& V, const NumCtx& ctx) {
  if (!is_standard(s, V, ctx))
    throw Error(Err::NotStandard, "subspace is not standard");
  const RealSubspace image{canonical_span(U.matrix * V.span_matrix, ctx)};

  const ModularPair before = modular_from_subspace(s, V, ctx);
  const ModularPair after = modular_from_subspace(s, image, ctx);
  // The positive operator and the conjugation transport plainly; the parity
  // of U bites on imaginary powers, where conjugating by an antilinear map
  // reverses the flow direction.
  const Eigen::MatrixXd expect =
      U.matrix * before.Delta * U.matrix.transpose();
  const double scale = std::max(1.0, expect.norm());
  if ((after.Delta - expect).norm() > 1e-8 * scale ||
      (after.J - U.matrix * before.J * U.matrix.transpose()).norm() > 1e-8)
    throw Error(Err::NumericalFailure,
                "transformed modular data violates the covariance law");
  const double t = 0.7;
  const Eigen::MatrixXd moved =
      U.matrix * modular_flow(s, before.Delta, t).matrix *
      U.matrix.transpose();
  const Eigen::MatrixXd flow =
      modular_flow(s, after.Delta, U.parity * t).matrix;
  if ((moved - flow).norm() > 1e-8 * 2 * s.n)
    throw Error(Err::NumericalFailure,
                "transformed modular flow violates the parity law");
  return image;
}

RealSubspace intersect_family(const ComplexSpace& s, const RealSubspace& V,
                              const std::vector<AntiUnitaryOp>& ops,
                              const NumCtx& ctx) {
  if (ops.empty()) return whole_space(s);
  const int n2 = 2 * s.n;
  Eigen::MatrixXd stack(n2 * static_cast<int>(ops.size()), n2);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Eigen::MatrixXd w = ops[k].matrix * V.span_matrix;
    stack.middleRows(static_cast<int>(k) * n2, n2) =
        Eigen::MatrixXd::Identity(n2, n2) - w * w.transpose();
  }
  return RealSubspace{canonical_span(null_space(stack, ctx), ctx)};
}

ComplexSpace direct_sum_space(const ComplexSpace& a, const ComplexSpace& b) {
  return make_space(a.n + b.n);
}

Eigen::MatrixXd summand_embedding(const ComplexSpace& a, const ComplexSpace& b,
                                  int which) {
  const int n = a.n + b.n;
  const int m = which == 0 ? a.n : b.n;
  const int off = which == 0 ? 0 : a.n;
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(2 * n, 2 * m);
  e.block(off, 0, m, m).setIdentity();
  e.block(n + off, m, m, m).setIdentity();
  return e;
}

RealSubspace direct_sum(const ComplexSpace& a, const RealSubspace& Va,
                        const ComplexSpace& b, const RealSubspace& Vb,
                        const NumCtx& ctx) {
  if (Va.span_matrix.rows() != 2 * a.n || Vb.span_matrix.rows() != 2 * b.n)
    throw Error(Err::DimensionMismatch, "subspace rows vs summand spaces");
  const Eigen::MatrixXd ea = summand_embedding(a, b, 0);
  const Eigen::MatrixXd eb = summand_embedding(a, b, 1);
  const Eigen::MatrixXd joined =
      hcat({ea * Va.span_matrix, eb * Vb.span_matrix}, 2 * (a.n + b.n));
  return RealSubspace{canonical_span(joined, ctx)};
}

AntiUnitaryOp direct_sum_op(const ComplexSpace& a, const AntiUnitaryOp& Ua,
                            const ComplexSpace& b, const AntiUnitaryOp& Ub) {
  if (Ua.parity != Ub.parity)
    throw Error(Err::InvariantViolation,
                "blockwise operator needs equal parities");
  if (Ua.matrix.rows() != 2 * a.n || Ub.matrix.rows() != 2 * b.n)
    throw Error(Err::DimensionMismatch, "operator rows vs summand spaces");
  const Eigen::MatrixXd ea = summand_embedding(a, b, 0);
  const Eigen::MatrixXd eb = summand_embedding(a, b, 1);
  return AntiUnitaryOp{ea * Ua.matrix * ea.transpose() +
                           eb * Ub.matrix * eb.transpose(),
                       Ua.parity};
}

Doubling doubling(const ComplexSpace& s,
                  const std::vector<Eigen::MatrixXd>& unitaries,
                  const Eigen::MatrixXd& Delta, const NumCtx& ctx) {
  check_positive_hermitian(s, Delta, 1e-9, Err::NotModularPair,
                           "modular operator");
  Doubling out;
  out.tilde_space = direct_sum_space(s, s);
  const Eigen::MatrixXd e1 = summand_embedding(s, s, 0);
  const Eigen::MatrixXd e2 = summand_embedding(s, s, 1);
  const Eigen::MatrixXd c = coordinate_conjugation(s);

  // Graph of Delta^{1/2}; the second component is written in the conjugate
  // coordinates of the doubled space.
  const Eigen::MatrixXd root = sym_sqrt(Delta);
  out.tilde_V = make_subspace(out.tilde_space, e1 + e2 * (c * root), ctx);

  const Eigen::MatrixXd tilde_delta =
      e1 * Delta * e1.transpose() +
      e2 * (c * Delta.inverse() * c) * e2.transpose();
  const Eigen::MatrixXd tilde_j = e1 * c * e2.transpose() +
                                  e2 * c * e1.transpose();
  out.tilde_pair = make_modular_pair(out.tilde_space, tilde_delta, tilde_j);

  const ModularPair derived =
      modular_from_subspace(out.tilde_space, out.tilde_V, ctx);
  if ((derived.Delta - out.tilde_pair.Delta).norm() >
          1e-9 * std::max(1.0, tilde_delta.norm()) ||
      (derived.J - out.tilde_pair.J).norm() > 1e-9 * 2 * s.n)
    throw Error(Err::NumericalFailure,
                "doubled modular data does not match the block formula");

  for (const auto& u : unitaries) {
    const AntiUnitaryOp checked = make_antiunitary(s, u, +1);
    out.tilde_ops.push_back(
        direct_sum_op(s, checked,
                      s, make_antiunitary(s, c * u * c, +1)));
  }
  return out;
}

ComplexSpace tensor_space(const ComplexSpace& a, const ComplexSpace& b) {
  return make_space(a.n * b.n);
}

RealSubspace tensor(const ComplexSpace& a, const RealSubspace& Va,
                    const ComplexSpace& b, const RealSubspace& Vb,
                    const NumCtx& ctx) {
  if (!is_standard(a, Va, ctx) || !is_standard(b, Vb, ctx))
    throw Error(Err::NotStandard, "tensor factors must be standard");
  const ComplexSpace t = tensor_space(a, b);
  Eigen::MatrixXd cols(2 * t.n, a.n * b.n);
  int idx = 0;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < b.n; ++j) {
      const Eigen::VectorXcd za = complexify_vector(Va.span_matrix.col(i));
      const Eigen::VectorXcd zb = complexify_vector(Vb.span_matrix.col(j));
      Eigen::VectorXcd prod(t.n);
      for (int p = 0; p < a.n; ++p)
        prod.segment(p * b.n, b.n) = za(p) * zb;
      cols.col(idx++) = realify_vector(prod);
    }
  const RealSubspace result = make_subspace(t, cols, ctx);

  // Multiplicativity of the modular data, via the Kronecker product.
  const ModularPair pa = modular_from_subspace(a, Va, ctx);
  const ModularPair pb = modular_from_subspace(b, Vb, ctx);
  const ModularPair pt = modular_from_subspace(t, result, ctx);
  const Eigen::MatrixXcd da = complexify(pa.Delta);
  const Eigen::MatrixXcd db = complexify(pb.Delta);
  Eigen::MatrixXcd dt(t.n, t.n);
  for (int p = 0; p < a.n; ++p)
    for (int q = 0; q < a.n; ++q)
      dt.block(p * b.n, q * b.n, b.n, b.n) = da(p, q) * db;
  const Eigen::MatrixXcd ca = complexify(pa.J * coordinate_conjugation(a));
  const Eigen::MatrixXcd cb = complexify(pb.J * coordinate_conjugation(b));
  Eigen::MatrixXcd ct(t.n, t.n);
  for (int p = 0; p < a.n; ++p)
    for (int q = 0; q < a.n; ++q)
      ct.block(p * b.n, q * b.n, b.n, b.n) = ca(p, q) * cb;
  const Eigen::MatrixXd jt = realify(ct) * coordinate_conjugation(t);
  if ((pt.Delta - realify(dt)).norm() >
          1e-9 * std::max(1.0, pt.Delta.norm()) ||
      (pt.J - jt).norm() > 1e-9 * 2 * t.n)
    throw Error(Err::NumericalFailure,
                "tensor modular data is not multiplicative");
  return result;
}

BglResult bgl_pair(const ComplexSpace& s, const Eigen::MatrixXd& K,
                   const Eigen::MatrixXd& J, const NumCtx& ctx) {
  check_sizes(s, K, "generator");
  if ((K - K.transpose()).norm() > 1e-9 * std::max(1.0, K.norm()) ||
      !commutes_with_i(s, K, 1e-9))
    throw Error(Err::ModularRelationViolation, "generator is not hermitian");
  check_sizes(s, J, "conjugation");
  if (!is_orthogonal(J, 1e-9) || !anticommutes_with_i(s, J, 1e-9))
    throw Error(Err::ModularRelationViolation, "J is not a conjugation");
  if ((J * K * J + K).norm() > 1e-9 * std::max(1.0, K.norm()))
    throw Error(Err::ModularRelationViolation,
                "J does not reverse the generator");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  const Eigen::VectorXd scaled =
      (-2.0 * M_PI * es.eigenvalues().array()).exp();
  const Eigen::MatrixXd delta = es.eigenvectors() * scaled.asDiagonal() *
                                es.eigenvectors().transpose();

  BglResult out;
  out.pair = make_modular_pair(s, delta, J, 1e-9);
  out.V = subspace_from_modular(s, out.pair, ctx);

  // Per-vector KMS identity, independently of the fixed-space computation.
  const Eigen::MatrixXd root = sym_sqrt(delta);
  for (int k = 0; k < out.V.span_matrix.cols(); ++k) {
    const Eigen::VectorXd xi = out.V.span_matrix.col(k);
    if ((root * xi - J * xi).norm() > 1e-9 * std::max(1.0, (root * xi).norm()))
      throw Error(Err::NumericalFailure, "KMS identity fails on a basis vector");
  }
  return out;
}

}  // namespace ew
