#include <eulerwedge/wedgespace.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>

namespace ew {

namespace {

void check_automorphism(const LieAlgebra& L, const Eigen::MatrixXd& m,
                        double tol, Err code) {
  if (m.rows() != L.dim || m.cols() != L.dim)
    throw Error(Err::DimensionMismatch, "matrix shape vs algebra dim");
  for (int i = 0; i < L.dim; ++i)
    for (int j = 0; j < L.dim; ++j) {
      const Eigen::VectorXd lhs = m * L.c[i][j];
      const Eigen::VectorXd rhs = L.bracket(m.col(i), m.col(j));
      if ((lhs - rhs).norm() > tol * std::max(1.0, lhs.norm()))
        throw Error(code, "matrix is not a bracket automorphism at pair (" +
                              std::to_string(i) + "," + std::to_string(j) +
                              ")");
    }
}

}  // namespace

GradedGroupElement make_graded_element(const LieAlgebra& L, Eigen::MatrixXd m,
                                       int parity, double tol) {
  if (parity != 1 && parity != -1)
    throw Error(Err::InvariantViolation, "parity must be +1 or -1");
  check_automorphism(L, m, tol, Err::InvariantViolation);
  return GradedGroupElement{std::move(m), parity};
}

GradedGroupElement compose(const GradedGroupElement& a,
                           const GradedGroupElement& b) {
  return GradedGroupElement{a.matrix * b.matrix, a.parity * b.parity};
}

GradedGroupElement inverse(const GradedGroupElement& g) {
  return GradedGroupElement{g.matrix.inverse(), g.parity};
}

GradedGroupElement exp_ad(const LieAlgebra& L, const Element& x) {
  return GradedGroupElement{ad_matrix(L, x).exp(), +1};
}

EulerCouple make_couple(const LieAlgebra& L, Element h, GradedGroupElement tau,
                        double tol) {
  if (tau.parity != -1)
    throw Error(Err::InvariantViolation, "couple involution must be odd");
  if (h.size() != L.dim)
    throw Error(Err::DimensionMismatch, "element length vs algebra dim");
  const int n = L.dim;
  if ((tau.matrix * tau.matrix - Eigen::MatrixXd::Identity(n, n)).norm() >
      tol * n)
    throw Error(Err::InvariantViolation, "involution square defect");
  if ((tau.matrix * h - h).norm() > tol * std::max(1.0, h.norm()))
    throw Error(Err::InvariantViolation, "involution does not fix h");
  check_automorphism(L, tau.matrix, tol, Err::InvariantViolation);
  return EulerCouple{std::move(h), std::move(tau)};
}

EulerCouple standard_couple(const LieAlgebra& L, const Element& h,
                            double tol) {
  return make_couple(L, h, GradedGroupElement{tau_h(L, h, tol), -1}, tol);
}

bool is_euler_couple(const LieAlgebra& L, const EulerCouple& W, double tol) {
  if (!is_euler(L, W.h, tol)) return false;
  return (W.tau.matrix - tau_h(L, W.h, tol)).norm() <= tol * L.dim;
}

Element twisted_adjoint(const GradedGroupElement& g, const Element& x) {
  if (g.matrix.cols() != x.size())
    throw Error(Err::DimensionMismatch, "element length vs matrix size");
  return static_cast<double>(g.parity) * (g.matrix * x);
}

EulerCouple act_on_wedge(const LieAlgebra& L, const GradedGroupElement& g,
                         const EulerCouple& W, double tol) {
  Element h = twisted_adjoint(g, W.h);
  GradedGroupElement tau{g.matrix * W.tau.matrix * g.matrix.inverse(), -1};
  return make_couple(L, std::move(h), std::move(tau), tol);
}

EulerCouple dual_wedge(const LieAlgebra& L, const EulerCouple& W, double tol) {
  return make_couple(L, -W.h, W.tau, tol);
}

void verify_pointed(const PolyhedralCone& C, double tol) {
  if (C.generators.empty()) return;
  const int k = static_cast<int>(C.generators.size());
  Eigen::MatrixXd A(C.ambient_dim + 1, k);
  for (int j = 0; j < k; ++j) {
    A.col(j).head(C.ambient_dim) = C.generators[j].normalized();
    A(C.ambient_dim, j) = 1.0;
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(C.ambient_dim + 1);
  b(C.ambient_dim) = 1.0;
  const Eigen::VectorXd z = nonnegative_lsq(A, b);
  if ((A * z - b).norm() <= std::max(tol, 1e-9))
    throw Error(Err::InvariantViolation, "cone contains a line");
}

PolyhedralCone reduce_generators(const PolyhedralCone& C, double tol) {
  std::vector<bool> keep(C.generators.size(), true);
  for (std::size_t i = 0; i < C.generators.size(); ++i) {
    PolyhedralCone rest{C.ambient_dim, {}};
    for (std::size_t j = 0; j < C.generators.size(); ++j)
      if (j != i && keep[j]) rest.generators.push_back(C.generators[j]);
    if (!rest.generators.empty() &&
        cone_member(rest, C.generators[i], tol))
      keep[i] = false;
  }
  PolyhedralCone out{C.ambient_dim, {}};
  for (std::size_t i = 0; i < C.generators.size(); ++i)
    if (keep[i]) out.generators.push_back(C.generators[i]);
  return out;
}

std::optional<std::pair<Eigen::MatrixXd, Eigen::VectorXd>> poincare_decode(
    const LieAlgebra& L, const Eigen::MatrixXd& adg, int d, double tol) {
  const int n = L.dim;
  if (n != d + d * (d - 1) / 2 || adg.rows() != n || adg.cols() != n)
    return std::nullopt;
  const double scale = std::max(1.0, adg.norm());
  // translations form an ideal: no rotation component may appear
  if (adg.block(d, 0, n - d, d).norm() > tol * scale) return std::nullopt;

  const Eigen::MatrixXd lorentz = adg.topLeftCorner(d, d);
  Eigen::VectorXd eta(d);
  eta(0) = 1.0;
  for (int i = 1; i < d; ++i) eta(i) = -1.0;
  const Eigen::MatrixXd metric_defect =
      lorentz.transpose() * eta.asDiagonal() * lorentz -
      Eigen::MatrixXd(eta.asDiagonal());
  if (metric_defect.norm() > tol * std::max(1.0, lorentz.squaredNorm()))
    return std::nullopt;

  // Each rotation basis column carries -(lorentz X lorentz^{-1}) a in its
  // translation part; stack those equations to recover a.
  const int k = n - d;
  Eigen::MatrixXd A(d * k, d);
  Eigen::VectorXd rhs(d * k);
  const Eigen::MatrixXd lorentz_inv = lorentz.inverse();
  for (int m = 0; m < k; ++m) {
    Eigen::MatrixXd xm = Eigen::MatrixXd::Zero(d, d);
    for (int r = 0; r < k; ++r) {
      const Eigen::MatrixXd& base =
          L.matrix_basis[d + r].topLeftCorner(d, d);
      xm += adg(d + r, d + m) * base;
    }
    const Eigen::MatrixXd expect =
        lorentz * L.matrix_basis[d + m].topLeftCorner(d, d) * lorentz_inv;
    if ((xm - expect).norm() > tol * std::max(1.0, expect.norm()))
      return std::nullopt;
    A.middleRows(m * d, d) = xm;
    rhs.segment(m * d, d) = -adg.col(d + m).head(d);
  }
  const Eigen::VectorXd a = A.colPivHouseholderQr().solve(rhs);
  if ((A * a - rhs).norm() > tol * std::max(1.0, rhs.norm()))
    return std::nullopt;
  return std::make_pair(lorentz, a);
}

namespace {

// Wedge-preserving Lorentz matrices: a boost in the (0,1) block and an
// orthogonal map on the remaining spatial coordinates.
bool wedge_stabilizer_form(const Eigen::MatrixXd& lorentz, int d, double tol) {
  const double c = lorentz(0, 0);
  const double s = lorentz(0, 1);
  if (std::abs(lorentz(1, 1) - c) > tol || std::abs(lorentz(1, 0) - s) > tol)
    return false;
  if (std::abs(c * c - s * s - 1.0) > tol || c < 1.0 - tol) return false;
  if (d > 2) {
    if (lorentz.block(0, 2, 2, d - 2).norm() > tol) return false;
    if (lorentz.block(2, 0, d - 2, 2).norm() > tol) return false;
    const Eigen::MatrixXd r = lorentz.bottomRightCorner(d - 2, d - 2);
    if ((r.transpose() * r - Eigen::MatrixXd::Identity(d - 2, d - 2)).norm() >
        tol * (d - 2))
      return false;
  }
  return true;
}

struct CertificateProblem {
  const LieAlgebra* L;
  std::vector<Eigen::MatrixXd> ad_plus;   // ad of C_+ generators
  std::vector<Eigen::MatrixXd> ad_minus;  // ad of C_- generators
  Eigen::MatrixXd g0;                     // centralizer basis
  const Eigen::MatrixXd* target;

  int params() const {
    return static_cast<int>(ad_plus.size() + ad_minus.size() + g0.cols());
  }

  // theta = (xi_+, y, xi_-); squared entries of xi enforce cone coefficients.
  Eigen::MatrixXd assemble(const Eigen::VectorXd& theta) const {
    const int kp = static_cast<int>(ad_plus.size());
    const int km = static_cast<int>(ad_minus.size());
    const int kz = static_cast<int>(g0.cols());
    const int n = L->dim;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < kp; ++i)
      acc += theta(i) * theta(i) * ad_plus[i];
    const Eigen::MatrixXd left = acc.exp();
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    if (kz > 0) y = g0 * theta.segment(kp, kz);
    const Eigen::MatrixXd mid = ad_matrix(*L, y).exp();
    acc.setZero();
    for (int j = 0; j < km; ++j)
      acc += theta(kp + kz + j) * theta(kp + kz + j) * ad_minus[j];
    const Eigen::MatrixXd right = acc.exp();
    return left * mid * right;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& theta) const {
    return (assemble(theta) - *target).reshaped();
  }
};

// Damped least squares with a numeric Jacobian. Returns the best residual
// norm reached; theta is updated in place.
double levenberg_fit(const CertificateProblem& prob, Eigen::VectorXd& theta,
                     int iters) {
  const int p = prob.params();
  double lambda = 1e-3;
  Eigen::VectorXd r = prob.residual(theta);
  double best = r.norm();
  for (int it = 0; it < iters; ++it) {
    if (best < 1e-12) break;
    Eigen::MatrixXd J(r.size(), p);
    for (int i = 0; i < p; ++i) {
      const double step = 1e-6 * std::max(1.0, std::abs(theta(i)));
      Eigen::VectorXd tp = theta;
      tp(i) += step;
      J.col(i) = (prob.residual(tp) - r) / step;
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd Jtr = J.transpose() * r;
    if (Jtr.norm() < 1e-14) break;
    bool stepped = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
      const Eigen::MatrixXd M =
          JtJ + lambda * Eigen::MatrixXd::Identity(p, p);
      const Eigen::VectorXd delta = M.ldlt().solve(-Jtr);
      const Eigen::VectorXd trial = theta + delta;
      const Eigen::VectorXd rt = prob.residual(trial);
      if (rt.norm() < best) {
        theta = trial;
        r = rt;
        best = rt.norm();
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!stepped) break;
  }
  return best;
}

}  // namespace

WedgeOrderConfig poincare_wedge_config(int d) {
  WedgeOrderConfig cfg;
  cfg.algebra = build_algebra("poincare(" + std::to_string(d) + ")");
  cfg.poincare_dim = d;

  std::vector<Eigen::VectorXd> gens;
  for (int i = 1; i < d; ++i)
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(cfg.algebra.dim);
      g(0) = 1.0;
      g(i) = s;
      gens.push_back(g);
    }
  cfg.invariant_cone = make_cone(cfg.algebra.dim, std::move(gens));
  verify_pointed(cfg.invariant_cone);

  const LieAlgebra L = cfg.algebra;
  cfg.stabilizer_test = [L, d](const GradedGroupElement& g) {
    const auto dec = poincare_decode(L, g.matrix, d, 1e-8);
    if (!dec) return false;
    const auto& [lorentz, a] = *dec;
    if (!wedge_stabilizer_form(lorentz, d, 1e-8)) return false;
    return std::abs(a(0)) < 1e-8 && std::abs(a(1)) < 1e-8;
  };

  GeometricRealization real;
  real.sample_wedge = [d](unsigned seed, int n) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd x(d);
      x(1) = 3.0 * unit(rng) + 1e-6;
      x(0) = 0.999 * sym(rng) * x(1);
      for (int j = 2; j < d; ++j) x(j) = 3.0 * sym(rng);
      pts.push_back(x);
    }
    return pts;
  };
  real.in_closed_wedge = [](const Eigen::VectorXd& x) {
    return std::abs(x(0)) <= x(1) + 1e-9;
  };
  real.act = [L, d](const GradedGroupElement& g, const Eigen::VectorXd& x) {
    const auto dec = poincare_decode(L, g.matrix, d, 1e-8);
    if (!dec)
      throw Error(Err::InvariantViolation,
                  "element is not an isometry image");
    return Eigen::VectorXd(dec->first * x + dec->second);
  };
  cfg.realization = real;
  return cfg;
}

SemigroupVerdict semigroup_member(const WedgeOrderConfig& cfg,
                                  const EulerCouple& W,
                                  const GradedGroupElement& g, double tol,
                                  unsigned seed, int starts, int iters,
                                  bool certify_out) {
  if (g.parity != +1)
    throw Error(Err::PreconditionViolated,
                "semigroup membership is defined on the even part");
  const LieAlgebra& L = cfg.algebra;

  if (cfg.poincare_dim > 0) {
    const int d = cfg.poincare_dim;
    const auto dec = poincare_decode(L, g.matrix, d, std::max(tol, 1e-8));
    if (!dec)
      throw Error(Err::InvariantViolation,
                  "element is not an isometry image");
    const auto& [lorentz, a] = *dec;
    if (lorentz(0, 0) < 0)
      throw Error(Err::InvariantViolation,
                  "time-reversing element declared even");
    if (!wedge_stabilizer_form(lorentz, d, std::max(tol, 1e-8)))
      return SemigroupVerdict::Out;
    return std::abs(a(0)) <= a(1) + tol ? SemigroupVerdict::In
                                        : SemigroupVerdict::Out;
  }

  verify_pointed(cfg.invariant_cone);
  if (cfg.stabilizer_test && cfg.stabilizer_test(g)) return SemigroupVerdict::In;

  const auto parts =
      graded_cone_parts(cfg.invariant_cone, L, W.h,
                        std::max(tol, cfg.cone_flow_tol), seed, 64);
  const PolyhedralCone cp = reduce_generators(parts.plus);
  const PolyhedralCone cm = reduce_generators(parts.minus);

  CertificateProblem prob;
  prob.L = &L;
  for (const auto& u : cp.generators)
    prob.ad_plus.push_back(ad_matrix(L, u.normalized()));
  for (const auto& v : cm.generators)
    prob.ad_minus.push_back(ad_matrix(L, v.normalized()));
  prob.g0 = centralizer(L, W.h, tol);
  prob.target = &g.matrix;

  const double scale = std::max(1.0, g.matrix.norm());
  std::mt19937 rng(seed ^ 0x9e3779b9u);
  std::normal_distribution<double> gauss;
  const int p = prob.params();
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd theta(p);
    const double spread = (s == 0) ? 0.0 : 0.3 * (1 + s % 5);
    for (int i = 0; i < p; ++i) theta(i) = spread * gauss(rng);
    const double res = levenberg_fit(prob, theta, iters);
    if (res <= 1e-7 * scale) {
      if (cfg.stabilizer_test) {
        const int kp = static_cast<int>(prob.ad_plus.size());
        const int kz = static_cast<int>(prob.g0.cols());
        Eigen::VectorXd y = Eigen::VectorXd::Zero(L.dim);
        if (kz > 0) y = prob.g0 * theta.segment(kp, kz);
        if (!cfg.stabilizer_test(exp_ad(L, y))) continue;
      }
      return SemigroupVerdict::In;
    }
  }

  if (certify_out) {
    if (!cfg.realization)
      throw Error(Err::NoGeometricRealization,
                  "Out certification needs a geometric realization");
    const auto pts = cfg.realization->sample_wedge(seed, 256);
    if (pts.empty()) throw Error(Err::EmptyRegionSample, "no wedge samples");
    for (const auto& x : pts)
      if (!cfg.realization->in_closed_wedge(cfg.realization->act(g, x)))
        return SemigroupVerdict::Out;
  }
  return SemigroupVerdict::Unknown;
}

OrderVerdict wedge_leq(const WedgeOrderConfig& cfg, const EulerCouple& W,
                       const GradedGroupElement& g1,
                       const GradedGroupElement& g2, double tol, unsigned seed,
                       int starts, int iters, bool certify_out) {
  const GradedGroupElement rel = compose(inverse(g2), g1);
  switch (semigroup_member(cfg, W, rel, tol, seed, starts, iters,
                           certify_out)) {
    case SemigroupVerdict::In:
      return OrderVerdict::Leq;
    case SemigroupVerdict::Out:
      return OrderVerdict::NotLeq;
    default:
      return OrderVerdict::Unknown;
  }
}

const char* to_string(SemigroupVerdict v) {
  switch (v) {
    case SemigroupVerdict::In:
      return "In";
    case SemigroupVerdict::Out:
      return "Out";
    default:
      return "Unknown";
  }
}

const char* to_string(OrderVerdict v) {
  switch (v) {
    case OrderVerdict::Leq:
      return "True";
    case OrderVerdict::NotLeq:
      return "False";
    default:
      return "Unknown";
  }
}

}  // namespace ew
