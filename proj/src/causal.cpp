#include <eulerwedge/causal.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

namespace ew {

namespace {

Eigen::VectorXd metric_diag(int n) {
  Eigen::VectorXd eta = Eigen::VectorXd::Constant(n, -1.0);
  eta(0) = 1.0;
  return eta;
}

}  // namespace

IsometryElement make_isometry(Eigen::MatrixXd lorentz,
                              Eigen::VectorXd translation, double tol) {
  const int n = static_cast<int>(lorentz.rows());
  if (lorentz.cols() != n || translation.size() != n)
    throw Error(Err::DimensionMismatch, "isometry shape");
  const Eigen::VectorXd eta = metric_diag(n);
  const Eigen::MatrixXd defect = lorentz.transpose() * eta.asDiagonal() *
                                     lorentz -
                                 Eigen::MatrixXd(eta.asDiagonal());
  if (defect.norm() > tol * std::max(1.0, lorentz.squaredNorm()))
    throw Error(Err::InvariantViolation, "matrix does not preserve the metric");
  IsometryElement g{std::move(lorentz), std::move(translation), true, true};
  g.orthochronous = g.lorentz(0, 0) > 0;
  g.proper = g.lorentz.determinant() > 0;
  return g;
}

SpacetimePoint apply_isometry(const IsometryElement& g,
                              const SpacetimePoint& x) {
  if (x.size() != g.lorentz.rows())
    throw Error(Err::DimensionMismatch, "point length vs isometry");
  return g.lorentz * x + g.translation;
}

IsometryElement compose_isometry(const IsometryElement& a,
                                 const IsometryElement& b) {
  if (a.lorentz.rows() != b.lorentz.rows())
    throw Error(Err::DimensionMismatch, "isometry sizes");
  return make_isometry(a.lorentz * b.lorentz,
                       a.translation + a.lorentz * b.translation);
}

IsometryElement inverse_isometry(const IsometryElement& g) {
  const Eigen::VectorXd eta = metric_diag(static_cast<int>(g.lorentz.rows()));
  const Eigen::MatrixXd inv =
      eta.asDiagonal() * g.lorentz.transpose() * eta.asDiagonal();
  return make_isometry(inv, -(inv * g.translation).eval());
}

double minkowski_inner(const SpacetimePoint& x, const SpacetimePoint& y) {
  if (x.size() != y.size())
    throw Error(Err::DimensionMismatch, "point lengths");
  return 2.0 * x(0) * y(0) - x.dot(y);
}

bool in_wedge_WR(const SpacetimePoint& x) {
  if (x.size() < 2)
    throw Error(Err::DimensionMismatch, "point needs at least two coordinates");
  return std::abs(x(0)) < x(1);
}

Eigen::VectorXd modular_vector_field(ModularKind kind,
                                     const SpacetimePoint& m) {
  (void)kind;  // single built-in generator
  if (m.size() < 2)
    throw Error(Err::DimensionMismatch, "point needs at least two coordinates");
  const int n = static_cast<int>(m.size());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  x(0) = m(1);
  x(1) = m(0);

  // Independent route: central difference of the matrix flow.
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  k(0, 1) = 1.0;
  k(1, 0) = 1.0;
  const double step = 1e-6;
  const Eigen::VectorXd fd =
      ((step * k).exp() * m - (-step * k).exp() * m) / (2.0 * step);
  if ((fd - x).norm() > 1e-8 * std::max(1.0, m.norm()))
    throw Error(Err::NumericalFailure, "flow derivative mismatch");
  return x;
}

bool on_manifold(Space space, const SpacetimePoint& m, double tol) {
  if (space == Space::Minkowski) return true;
  if (m.size() < 2)
    throw Error(Err::DimensionMismatch, "point needs at least two coordinates");
  const double q = m.tail(m.size() - 1).squaredNorm() - m(0) * m(0);
  return std::abs(q - 1.0) <= tol * std::max(1.0, m.squaredNorm());
}

std::vector<SpacetimePoint> sample_de_sitter(int d, int n, unsigned seed) {
  if (d < 1) throw Error(Err::DimensionMismatch, "need d >= 1");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::bernoulli_distribution flip;
  std::vector<SpacetimePoint> pts;
  pts.reserve(n);
  while (static_cast<int>(pts.size()) < n) {
    Eigen::VectorXd m(d + 1);
    m(0) = box(rng);
    double rest = 0.0;
    for (int i = 2; i <= d; ++i) {
      m(i) = box(rng);
      rest += m(i) * m(i);
    }
    const double x1sq = 1.0 + m(0) * m(0) - rest;
    if (x1sq < 0.0) continue;  // box point misses the hyperboloid
    m(1) = (flip(rng) ? 1.0 : -1.0) * std::sqrt(x1sq);
    pts.push_back(m);
  }
  return pts;
}

bool positivity_region_member(Space space, const SpacetimePoint& m,
                              double tol) {
  if (!on_manifold(space, m, tol))
    throw Error(Err::NotOnManifold, "point is off the hyperboloid");
  const Eigen::VectorXd x = modular_vector_field(ModularKind::boost_01, m);
  if (space == Space::Minkowski)
    return x(0) > x.tail(x.size() - 1).norm();
  if (std::abs(minkowski_inner(x, m)) > 1e-10 * std::max(1.0, m.squaredNorm()))
    throw Error(Err::NumericalFailure, "field is not tangent");
  return minkowski_inner(x, x) > 0.0 && x(0) > 0.0;
}

bool wedge_region_dS_member(const SpacetimePoint& m, double tol) {
  if (!on_manifold(Space::DeSitter, m, tol))
    throw Error(Err::NotOnManifold, "point is off the hyperboloid");
  return in_wedge_WR(m);
}

bool compression_member_poincare(const IsometryElement& g, int d, double tol) {
  const int n = d + 1;
  if (g.lorentz.rows() != n)
    throw Error(Err::DimensionMismatch, "isometry size vs dimension");
  if (!g.orthochronous || !g.proper)
    throw Error(Err::NotProper, "need an orthochronous proper isometry");

  const Eigen::MatrixXd& l = g.lorentz;
  const double c = l(0, 0);
  const double s = l(0, 1);
  if (std::abs(l(1, 1) - c) > tol || std::abs(l(1, 0) - s) > tol) return false;
  if (std::abs(c * c - s * s - 1.0) > tol || c < 1.0 - tol) return false;
  if (n > 2) {
    if (l.block(0, 2, 2, n - 2).norm() > tol) return false;
    if (l.block(2, 0, n - 2, 2).norm() > tol) return false;
    const Eigen::MatrixXd r = l.bottomRightCorner(n - 2, n - 2);
    if ((r.transpose() * r - Eigen::MatrixXd::Identity(n - 2, n - 2)).norm() >
        tol * (n - 2))
      return false;
  }
  return std::abs(g.translation(0)) <= g.translation(1) + tol;
}

CompressionCheck sampled_compression_check(
    const IsometryElement& g,
    const std::function<bool(const SpacetimePoint&)>& region, int n,
    unsigned seed) {
  if (n < 1) throw Error(Err::InvariantViolation, "need n >= 1");
  const int dim = static_cast<int>(g.lorentz.rows());
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> box(-5.0, 5.0);
  int found = 0;
  long long budget = 1000LL * n;
  while (found < n && budget-- > 0) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x(i) = box(rng);
    if (!region(x)) continue;
    ++found;
    if (!region(apply_isometry(g, x))) return CompressionCheck{false, x};
  }
  if (found == 0)
    throw Error(Err::EmptyRegionSample, "box sampler never hit the region");
  return CompressionCheck{true, std::nullopt};
}

}  // namespace ew
