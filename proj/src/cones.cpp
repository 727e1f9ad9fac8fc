#include <eulerwedge/cones.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>

namespace ew {

PolyhedralCone make_cone(int ambient_dim,
                         std::vector<Eigen::VectorXd> generators) {
  for (const auto& g : generators) {
    if (g.size() != ambient_dim)
      throw Error(Err::DimensionMismatch, "generator length vs ambient_dim");
    if (g.norm() == 0.0)
      throw Error(Err::DimensionMismatch, "zero generator");
  }
  return PolyhedralCone{ambient_dim, std::move(generators)};
}

FiniteDimRep make_rep(LieAlgebra algebra, std::vector<Eigen::MatrixXcd> images,
                      double tol) {
  if (static_cast<int>(images.size()) != algebra.dim)
    throw Error(Err::DimensionMismatch, "one image per basis element");
  for (const auto& m : images) {
    if (m.rows() != m.cols() || m.rows() != images[0].rows())
      throw Error(Err::DimensionMismatch, "image shapes differ");
    if ((m + m.adjoint()).norm() > tol * std::max(1.0, m.norm()))
      throw Error(Err::NotSkewHermitian, "representation image");
  }
  FiniteDimRep rep{std::move(algebra), std::move(images)};
  const int n = rep.algebra.dim;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXcd expect =
          Eigen::MatrixXcd::Zero(rep.images[0].rows(), rep.images[0].cols());
      for (int k = 0; k < n; ++k)
        if (rep.algebra.c[i][j](k) != 0.0)
          expect += rep.algebra.c[i][j](k) * rep.images[k];
      const Eigen::MatrixXcd got =
          rep.images[i] * rep.images[j] - rep.images[j] * rep.images[i];
      if ((got - expect).norm() > tol * std::max(1.0, expect.norm()))
        throw Error(Err::JacobiViolation,
                    "representation images violate the bracket relation at "
                    "pair (" + std::to_string(i) + "," + std::to_string(j) +
                    ")");
    }
  return rep;
}

Eigen::MatrixXcd rep_image(const FiniteDimRep& rep, const Element& x) {
  if (x.size() != rep.algebra.dim)
    throw Error(Err::DimensionMismatch, "element length vs algebra dim");
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(rep.images[0].rows(), rep.images[0].cols());
  for (int i = 0; i < rep.algebra.dim; ++i)
    if (x(i) != 0.0) out += x(i) * rep.images[i];
  return out;
}

// Lawson-Hanson active-set NNLS: min |A z - b| subject to z >= 0.
Eigen::VectorXd nonnegative_lsq(const Eigen::MatrixXd& A,
                                const Eigen::VectorXd& b) {
  const int n = static_cast<int>(A.cols());
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  if (n == 0) return z;
  std::vector<bool> passive(n, false);
  const double wtol = 1e-12 * std::max(1.0, b.norm()) *
                      std::max(1.0, A.norm());
  int iter = 0;
  const int cap = 6 * n + 60;

  auto solve_passive = [&](const std::vector<bool>& act) -> Eigen::VectorXd {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (act[i]) idx.push_back(i);
    Eigen::MatrixXd Ap(A.rows(), idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(k) = A.col(idx[k]);
    const Eigen::VectorXd sol = Ap.colPivHouseholderQr().solve(b);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) full(idx[k]) = sol(k);
    return full;
  };

  while (true) {
    const Eigen::VectorXd w = A.transpose() * (b - A * z);
    int best = -1;
    double wmax = wtol;
    for (int i = 0; i < n; ++i)
      if (!passive[i] && w(i) > wmax) {
        wmax = w(i);
        best = i;
      }
    if (best < 0) return z;
    passive[best] = true;
    Eigen::VectorXd trial = solve_passive(passive);
    while (true) {
      if (++iter > cap)
        throw Error(Err::SolverFailure, "nonnegative_lsq iteration cap");
      bool feasible = true;
      for (int i = 0; i < n; ++i)
        if (passive[i] && trial(i) <= 0) feasible = false;
      if (feasible) break;
      double alpha = 1.0;
      for (int i = 0; i < n; ++i)
        if (passive[i] && trial(i) <= 0)
          alpha = std::min(alpha, z(i) / (z(i) - trial(i)));
      z += alpha * (trial - z);
      for (int i = 0; i < n; ++i)
        if (passive[i] && z(i) <= 1e-14) {
          passive[i] = false;
          z(i) = 0.0;
        }
      trial = solve_passive(passive);
    }
    z = trial;
  }
}

bool cone_member(const PolyhedralCone& C, const Eigen::VectorXd& x,
                 double tol) {
  if (x.size() != C.ambient_dim)
    throw Error(Err::DimensionMismatch, "point length vs ambient_dim");
  if (C.generators.empty()) return x.norm() <= tol;
  Eigen::MatrixXd A(C.ambient_dim, C.generators.size());
  for (std::size_t j = 0; j < C.generators.size(); ++j)
    A.col(j) = C.generators[j].normalized();
  const Eigen::VectorXd z = nonnegative_lsq(A, x);
  return (A * z - x).norm() <= tol * std::max(1.0, x.norm());
}

GradedConeParts graded_cone_parts(const PolyhedralCone& C, const LieAlgebra& L,
                                  const Element& h, double tol, unsigned seed,
                                  int samples) {
  if (C.ambient_dim != L.dim)
    throw Error(Err::DimensionMismatch, "cone ambient vs algebra dim");
  const Eigen::MatrixXd ad = ad_matrix(L, h);

  // Sampled invariance certificate: flow each generator and ask for
  // membership. Flow times stay moderate so the membership tolerance is not
  // swamped by e^{|t|} growth.
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> tdist(-2.0, 2.0);
  for (int s = 0; s < samples; ++s) {
    const double t = tdist(rng);
    const Eigen::MatrixXd flow = (t * ad).exp();
    for (const auto& g : C.generators) {
      const Eigen::VectorXd y = flow * g;
      if (!cone_member(C, y, std::max(tol, 1e-7)))
        throw Error(Err::NotInvariant,
                    "generator leaves the cone under the grading flow (t=" +
                        std::to_string(t) + ")");
    }
  }

  const Grading g = grading(L, h, tol);
  const Eigen::MatrixXd V = hcat({g.g_plus, g.g_zero, g.g_minus}, L.dim);
  const auto lu = V.partialPivLu();
  const long dp = g.g_plus.cols();
  const long dm = g.g_minus.cols();

  GradedConeParts out;
  out.plus.ambient_dim = L.dim;
  out.minus.ambient_dim = L.dim;
  for (const auto& gen : C.generators) {
    const Eigen::VectorXd coef = lu.solve(gen);
    const Eigen::VectorXd p = g.g_plus * coef.head(dp);
    const Eigen::VectorXd m = g.g_minus * coef.tail(dm);
    if (p.norm() > tol) out.plus.generators.push_back(p);
    if (m.norm() > tol) out.minus.generators.push_back(-m);
  }
  return out;
}

LieWedge lie_wedge_LSW(const Eigen::MatrixXd& g0_basis,
                       const PolyhedralCone& c_plus,
                       const PolyhedralCone& c_minus) {
  if (c_plus.ambient_dim != c_minus.ambient_dim)
    throw Error(Err::DimensionMismatch, "cone ambient dims differ");
  const int n = c_plus.ambient_dim;
  if (g0_basis.size() > 0 && g0_basis.rows() != n)
    throw Error(Err::DimensionMismatch, "edge basis rows vs ambient dim");
  LieWedge W;
  NumCtx ctx;
  W.edge = column_space(g0_basis, ctx);
  W.cone.ambient_dim = n;
  W.cone.generators = c_plus.generators;
  for (const auto& g : c_minus.generators) W.cone.generators.push_back(g);
  return W;
}

bool lie_wedge_member(const LieWedge& W, const Eigen::VectorXd& x,
                      double tol) {
  const int n = W.cone.ambient_dim;
  if (x.size() != n)
    throw Error(Err::DimensionMismatch, "point length vs ambient dim");
  // Quotient by the edge: x is in edge + cone iff the edge-orthogonal part
  // of x lies in the projected cone.
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
  if (W.edge.cols() > 0) P -= W.edge * W.edge.transpose();
  PolyhedralCone q;
  q.ambient_dim = n;
  for (const auto& g : W.cone.generators) {
    const Eigen::VectorXd pg = P * g;
    if (pg.norm() > 1e-14) q.generators.push_back(pg);
  }
  return cone_member(q, P * x, tol);
}

bool positive_cone_member(const FiniteDimRep& rep, const Element& x,
                          double tol) {
  const Eigen::MatrixXcd img = rep_image(rep, x);
  if ((img + img.adjoint()).norm() > tol * std::max(1.0, img.norm()))
    throw Error(Err::NotSkewHermitian, "image of the given element");
  const Eigen::MatrixXcd herm =
      std::complex<double>(0, -1) * img;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  if (es.info() != Eigen::Success)
    throw Error(Err::NumericalFailure, "hermitian eigensolve failed");
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace ew
