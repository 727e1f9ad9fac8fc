#include <eulerwedge/liealg.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <utility>

namespace ew {

namespace {

Eigen::MatrixXd unit_matrix(int n, int i, int j) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

// Commutator of two concrete matrices.
Eigen::MatrixXd comm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a * b - b * a;
}

double near_int_dist(double x) { return std::abs(x - std::round(x)); }

}  // namespace

Element LieAlgebra::bracket(const Element& x, const Element& y) const {
  if (x.size() != dim || y.size() != dim)
    throw Error(Err::DimensionMismatch, "bracket: element length vs dim");
  Element out = Element::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < dim; ++j) {
      if (y(j) == 0.0) continue;
      out += (x(i) * y(j)) * c[i][j];
    }
  }
  return out;
}

void verify_structure(const LieAlgebra& L, double tol) {
  const int n = L.dim;
  if (static_cast<int>(L.c.size()) != n)
    throw Error(Err::DimensionMismatch, "structure constant table size");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((L.c[i][j] + L.c[j][i]).norm() > tol)
        throw Error(Err::JacobiViolation,
                    "antisymmetry fails at pair (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const Element r = L.bracket(Element::Unit(n, i), L.c[j][k]) +
                          L.bracket(Element::Unit(n, j), L.c[k][i]) +
                          L.bracket(Element::Unit(n, k), L.c[i][j]);
        if (r.norm() > tol)
          throw Error(Err::JacobiViolation,
                      "Jacobi identity fails at triple (" + std::to_string(i) +
                          "," + std::to_string(j) + "," + std::to_string(k) +
                          "), residual " + std::to_string(r.norm()));
      }
}

LieAlgebra from_matrix_basis(std::vector<Eigen::MatrixXd> basis,
                             std::vector<std::string> labels) {
  const int n = static_cast<int>(basis.size());
  if (n == 0) throw Error(Err::DimensionMismatch, "empty matrix basis");
  const auto rows = basis[0].rows();
  const auto cols = basis[0].cols();
  Eigen::MatrixXd flat(rows * cols, n);
  for (int i = 0; i < n; ++i) {
    if (basis[i].rows() != rows || basis[i].cols() != cols)
      throw Error(Err::DimensionMismatch, "matrix basis shapes differ");
    flat.col(i) = basis[i].reshaped();
  }
  const auto qr = flat.colPivHouseholderQr();
  if (qr.rank() < n)
    throw Error(Err::DimensionMismatch, "matrix basis is linearly dependent");

  LieAlgebra L;
  L.dim = n;
  L.basis_labels = std::move(labels);
  if (static_cast<int>(L.basis_labels.size()) != n)
    throw Error(Err::DimensionMismatch, "label count vs basis size");
  L.c.assign(n, std::vector<Eigen::VectorXd>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::MatrixXd br = comm(basis[i], basis[j]);
      const Eigen::VectorXd v = br.reshaped();
      const Eigen::VectorXd coef = qr.solve(v);
      if ((flat * coef - v).norm() > 1e-10 * std::max(1.0, v.norm()))
        throw Error(Err::JacobiViolation,
                    "bracket of basis pair (" + std::to_string(i) + "," +
                        std::to_string(j) + ") leaves the span");
      L.c[i][j] = coef;
    }
  L.matrix_basis = std::move(basis);
  verify_structure(L);
  return L;
}

namespace {

LieAlgebra build_sl(int n) {
  if (n < 2) throw Error(Err::InvalidRank, "sl(n) needs n >= 2");
  std::vector<Eigen::MatrixXd> basis;
  std::vector<std::string> labels;
  for (int i = 0; i + 1 < n; ++i) {
    basis.push_back(unit_matrix(n, i, i) - unit_matrix(n, i + 1, i + 1));
    labels.push_back("H" + std::to_string(i + 1));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        basis.push_back(unit_matrix(n, i, j));
        labels.push_back("E" + std::to_string(i + 1) + "_" +
                         std::to_string(j + 1));
      }
  return from_matrix_basis(std::move(basis), std::move(labels));
}

LieAlgebra build_gl(int n) {
  if (n < 1) throw Error(Err::InvalidRank, "gl(n) needs n >= 1");
  std::vector<Eigen::MatrixXd> basis;
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      basis.push_back(unit_matrix(n, i, j));
      labels.push_back("E" + std::to_string(i + 1) + "_" +
                       std::to_string(j + 1));
    }
  return from_matrix_basis(std::move(basis), std::move(labels));
}

// Matrices X with X^T eta + eta X = 0, eta = diag(1_p, -1_q); basis
// X_ij = eta (E_ij - E_ji) for i < j. Index 0-based in labels, matching the
// spacetime coordinate convention used by the wedge-geometry layer.
std::vector<Eigen::MatrixXd> so_pq_basis(int p, int q,
                                         std::vector<std::string>* labels) {
  const int n = p + q;
  Eigen::VectorXd eta(n);
  for (int i = 0; i < n; ++i) eta(i) = i < p ? 1.0 : -1.0;
  std::vector<Eigen::MatrixXd> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::MatrixXd m = unit_matrix(n, i, j) - unit_matrix(n, j, i);
      basis.push_back(eta.asDiagonal() * m);
      if (labels)
        labels->push_back("M" + std::to_string(i) + "_" + std::to_string(j));
    }
  return basis;
}

LieAlgebra build_so(int p, int q) {
  if (p < 0 || q < 0 || p + q < 2)
    throw Error(Err::InvalidRank, "so(p,q) needs p+q >= 2");
  std::vector<std::string> labels;
  auto basis = so_pq_basis(p, q, &labels);
  return from_matrix_basis(std::move(basis), std::move(labels));
}

LieAlgebra build_sp(int two_n) {
  if (two_n < 2 || two_n % 2 != 0)
    throw Error(Err::InvalidRank, "sp(2n) takes an even argument >= 2");
  const int n = two_n / 2;
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(two_n, two_n);
  omega.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  omega.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  // X = -omega * S, S symmetric, parametrizes {X : X^T omega + omega X = 0}.
  std::vector<Eigen::MatrixXd> basis;
  std::vector<std::string> labels;
  for (int i = 0; i < two_n; ++i)
    for (int j = i; j < two_n; ++j) {
      Eigen::MatrixXd s = unit_matrix(two_n, i, j);
      if (i != j) s(j, i) = 1.0;
      basis.push_back(-omega * s);
      labels.push_back("S" + std::to_string(i + 1) + "_" +
                       std::to_string(j + 1));
    }
  return from_matrix_basis(std::move(basis), std::move(labels));
}

LieAlgebra build_aff1() {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
  h(0, 0) = 1.0;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2, 2);
  x(0, 1) = 1.0;
  return from_matrix_basis({h, x}, {"h", "x"});
}

// Affine embedding of R^{1,d-1} x| so(1,d-1) in (d+1)x(d+1) matrices:
// translations first (labels P0..P{d-1}), then the so(1,d-1) block.
LieAlgebra build_poincare(int d) {
  if (d < 2) throw Error(Err::InvalidRank, "poincare(d) needs d >= 2");
  std::vector<Eigen::MatrixXd> basis;
  std::vector<std::string> labels;
  for (int i = 0; i < d; ++i) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d + 1, d + 1);
    m(i, d) = 1.0;
    basis.push_back(m);
    labels.push_back("P" + std::to_string(i));
  }
  std::vector<std::string> so_labels;
  for (const auto& x : so_pq_basis(1, d - 1, &so_labels)) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d + 1, d + 1);
    m.topLeftCorner(d, d) = x;
    basis.push_back(m);
  }
  labels.insert(labels.end(), so_labels.begin(), so_labels.end());
  return from_matrix_basis(std::move(basis), std::move(labels));
}

// Parses "name(args)" into name and integer args.
bool parse_kind(const std::string& kind, std::string& name,
                std::vector<int>& args) {
  const auto open = kind.find('(');
  if (open == std::string::npos || kind.back() != ')') return false;
  name = kind.substr(0, open);
  std::string inner = kind.substr(open + 1, kind.size() - open - 2);
  args.clear();
  std::size_t pos = 0;
  while (pos <= inner.size()) {
    auto next = inner.find(',', pos);
    if (next == std::string::npos) next = inner.size();
    const std::string tok = inner.substr(pos, next - pos);
    if (tok.empty()) return false;
    try {
      std::size_t used = 0;
      args.push_back(std::stoi(tok, &used));
      if (used != tok.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
    pos = next + 1;
    if (next == inner.size()) break;
  }
  return !args.empty();
}

}  // namespace

LieAlgebra build_algebra(const std::string& kind) {
  std::string name;
  std::vector<int> args;
  if (!parse_kind(kind, name, args))
    throw Error(Err::ParseError, "unrecognized algebra kind: " + kind);
  if (name == "sl" && args.size() == 1) return build_sl(args[0]);
  if (name == "gl" && args.size() == 1) return build_gl(args[0]);
  if (name == "so" && args.size() == 2) return build_so(args[0], args[1]);
  if (name == "sp" && args.size() == 1) return build_sp(args[0]);
  if (name == "aff" && args.size() == 1 && args[0] == 1) return build_aff1();
  if (name == "poincare" && args.size() == 1) return build_poincare(args[0]);
  throw Error(Err::ParseError, "unrecognized algebra kind: " + kind);
}

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
  LieAlgebra L;
  L.dim = a.dim + b.dim;
  L.basis_labels = a.basis_labels;
  for (const auto& s : b.basis_labels) L.basis_labels.push_back(s + "'");
  L.c.assign(L.dim, std::vector<Eigen::VectorXd>(L.dim,
                                                 Element::Zero(L.dim)));
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      L.c[i][j].head(a.dim) = a.c[i][j];
  for (int i = 0; i < b.dim; ++i)
    for (int j = 0; j < b.dim; ++j)
      L.c[a.dim + i][a.dim + j].tail(b.dim) = b.c[i][j];
  verify_structure(L);
  return L;
}

LieAlgebra semidirect(const LieAlgebra& acting, const LieAlgebra& module,
                      const std::vector<Eigen::MatrixXd>& action) {
  if (static_cast<int>(action.size()) != acting.dim)
    throw Error(Err::DimensionMismatch, "one action matrix per acting basis");
  for (const auto& m : action)
    if (m.rows() != module.dim || m.cols() != module.dim)
      throw Error(Err::DimensionMismatch, "action matrix shape vs module dim");
  LieAlgebra L;
  const int nr = module.dim;
  L.dim = nr + acting.dim;
  L.basis_labels = module.basis_labels;
  L.basis_labels.insert(L.basis_labels.end(), acting.basis_labels.begin(),
                        acting.basis_labels.end());
  L.c.assign(L.dim, std::vector<Eigen::VectorXd>(L.dim,
                                                 Element::Zero(L.dim)));
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nr; ++j) L.c[i][j].head(nr) = module.c[i][j];
  for (int a = 0; a < acting.dim; ++a)
    for (int b = 0; b < acting.dim; ++b)
      L.c[nr + a][nr + b].tail(acting.dim) = acting.c[a][b];
  for (int a = 0; a < acting.dim; ++a)
    for (int i = 0; i < nr; ++i) {
      L.c[nr + a][i].head(nr) = action[a].col(i);
      L.c[i][nr + a] = -L.c[nr + a][i];
    }
  verify_structure(L);
  return L;
}

Eigen::VectorXd matrix_coordinates(const LieAlgebra& L,
                                   const Eigen::MatrixXd& m) {
  if (L.matrix_basis.empty())
    throw Error(Err::DimensionMismatch, "algebra carries no matrix basis");
  const auto rows = L.matrix_basis[0].rows();
  const auto cols = L.matrix_basis[0].cols();
  if (m.rows() != rows || m.cols() != cols)
    throw Error(Err::DimensionMismatch, "matrix shape vs basis shape");
  Eigen::MatrixXd flat(rows * cols, L.dim);
  for (int i = 0; i < L.dim; ++i) flat.col(i) = L.matrix_basis[i].reshaped();
  const Eigen::VectorXd v = m.reshaped();
  const Eigen::VectorXd coef = flat.colPivHouseholderQr().solve(v);
  if ((flat * coef - v).norm() > 1e-9 * std::max(1.0, v.norm()))
    throw Error(Err::DimensionMismatch, "matrix not in the basis span");
  return coef;
}

Eigen::MatrixXd ad_matrix(const LieAlgebra& L, const Element& x) {
  if (x.size() != L.dim)
    throw Error(Err::DimensionMismatch, "ad_matrix: element length vs dim");
  Eigen::MatrixXd ad = Eigen::MatrixXd::Zero(L.dim, L.dim);
  for (int j = 0; j < L.dim; ++j)
    ad.col(j) = L.bracket(x, Element::Unit(L.dim, j));
  return ad;
}

namespace {

struct EigenData {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
  bool diagonalizable = false;
  bool real_spectrum = false;
};

EigenData eigen_data(const Eigen::MatrixXd& ad, double tol) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(ad, true);
  if (es.info() != Eigen::Success)
    throw Error(Err::NumericalFailure, "eigendecomposition did not converge");
  EigenData out;
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.vectors);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  if (sv(sv.size() - 1) > 1e-12 * smax) {
    const Eigen::MatrixXcd rec = out.vectors *
                                 out.values.asDiagonal() *
                                 out.vectors.inverse();
    out.diagonalizable =
        (rec - ad.cast<std::complex<double>>()).norm() <=
        tol * std::max(1.0, ad.norm());
  }
  out.real_spectrum = out.values.imag().cwiseAbs().maxCoeff() <= tol;
  return out;
}

void require_euler(const LieAlgebra& L, const Element& h, double tol) {
  if (!is_euler(L, h, tol))
    throw Error(Err::NotEuler, "element fails the grading-generator test");
}

Eigen::MatrixXd eigenspace(const Eigen::MatrixXd& ad, double nu,
                           const NumCtx& ctx) {
  const int n = static_cast<int>(ad.rows());
  return null_space(ad - nu * Eigen::MatrixXd::Identity(n, n), ctx);
}

// Bracket of two column sets, as columns [B1_i, B2_j].
Eigen::MatrixXd pairwise_brackets(const LieAlgebra& L,
                                  const Eigen::MatrixXd& B1,
                                  const Eigen::MatrixXd& B2) {
  Eigen::MatrixXd out(L.dim, B1.cols() * B2.cols());
  int k = 0;
  for (int i = 0; i < B1.cols(); ++i)
    for (int j = 0; j < B2.cols(); ++j)
      out.col(k++) = L.bracket(B1.col(i), B2.col(j));
  return out;
}

}  // namespace

bool is_euler(const LieAlgebra& L, const Element& h, double tol) {
  if (tol <= 0) throw Error(Err::NumericalFailure, "tol must be positive");
  const Eigen::MatrixXd ad = ad_matrix(L, h);
  if (ad.norm() <= tol) return false;  // ad h = 0 never qualifies
  const EigenData ed = eigen_data(ad, tol);
  if (!ed.diagonalizable || !ed.real_spectrum) return false;
  for (int i = 0; i < ed.values.size(); ++i) {
    const double re = ed.values(i).real();
    const double d = std::min({std::abs(re - 1.0), std::abs(re),
                               std::abs(re + 1.0)});
    if (d > tol) return false;
  }
  return true;
}

Grading grading(const LieAlgebra& L, const Element& h, double tol) {
  require_euler(L, h, tol);
  const Eigen::MatrixXd ad = ad_matrix(L, h);
  NumCtx ctx{tol, nullptr};
  Grading g{eigenspace(ad, 1.0, ctx), eigenspace(ad, 0.0, ctx),
            eigenspace(ad, -1.0, ctx)};
  if (g.g_plus.cols() + g.g_zero.cols() + g.g_minus.cols() != L.dim)
    throw Error(Err::NumericalFailure, "grading does not span the algebra");
  // [g_i, g_j] <= g_{i+j}, with the |i+j| >= 2 blocks vanishing.
  const std::vector<std::pair<int, const Eigen::MatrixXd*>> blocks = {
      {1, &g.g_plus}, {0, &g.g_zero}, {-1, &g.g_minus}};
  for (const auto& [vi, Bi] : blocks)
    for (const auto& [vj, Bj] : blocks) {
      const Eigen::MatrixXd br = pairwise_brackets(L, *Bi, *Bj);
      const int target = vi + vj;
      Eigen::MatrixXd proj;
      if (target == 1)
        proj = projector(g.g_plus, ctx);
      else if (target == 0)
        proj = projector(g.g_zero, ctx);
      else if (target == -1)
        proj = projector(g.g_minus, ctx);
      else
        proj = Eigen::MatrixXd::Zero(L.dim, L.dim);
      for (int k = 0; k < br.cols(); ++k) {
        const Eigen::VectorXd r = br.col(k) - proj * br.col(k);
        if (r.norm() > 1e-9 * std::max(1.0, br.col(k).norm()))
          throw Error(Err::NumericalFailure,
                      "bracket escapes its grading component");
      }
    }
  return g;
}

Eigen::MatrixXd tau_h(const LieAlgebra& L, const Element& h, double tol) {
  const Grading g = grading(L, h, tol);  // enforces the Euler precondition
  Eigen::MatrixXd V(L.dim, L.dim);
  Eigen::VectorXd sign(L.dim);
  int k = 0;
  for (int i = 0; i < g.g_plus.cols(); ++i, ++k) {
    V.col(k) = g.g_plus.col(i);
    sign(k) = -1.0;
  }
  for (int i = 0; i < g.g_zero.cols(); ++i, ++k) {
    V.col(k) = g.g_zero.col(i);
    sign(k) = 1.0;
  }
  for (int i = 0; i < g.g_minus.cols(); ++i, ++k) {
    V.col(k) = g.g_minus.col(i);
    sign(k) = -1.0;
  }
  const Eigen::MatrixXd tau =
      V * sign.asDiagonal() * V.colPivHouseholderQr().inverse();
  const int n = L.dim;
  if ((tau * tau - Eigen::MatrixXd::Identity(n, n)).norm() > 1e-9 * n)
    throw Error(Err::NumericalFailure, "involution square defect");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd lhs = tau * L.c[i][j];
      const Eigen::VectorXd rhs =
          L.bracket(tau.col(i), tau.col(j));
      if ((lhs - rhs).norm() > 1e-9 * std::max(1.0, lhs.norm()))
        throw Error(Err::AutomorphismViolation,
                    "involution fails to respect the bracket at pair (" +
                        std::to_string(i) + "," + std::to_string(j) + ")");
    }
  return tau;
}

bool integrality_check(const LieAlgebra& L, const Element& h, double tol) {
  const Eigen::MatrixXd ad = ad_matrix(L, h);
  const EigenData ed = eigen_data(ad, tol);
  if (!ed.diagonalizable)
    throw Error(Err::NumericalFailure, "ad h is not diagonalizable");
  if (!ed.real_spectrum) return false;
  for (int i = 0; i < ed.values.size(); ++i)
    if (near_int_dist(ed.values(i).real()) > tol) return false;
  return true;
}

Eigen::MatrixXd n_h(const LieAlgebra& L, const Element& h, double tol) {
  const Grading g = grading(L, h, tol);
  const Eigen::MatrixXd br = pairwise_brackets(L, g.g_plus, g.g_minus);
  const Eigen::MatrixXd cand = hcat({g.g_plus, g.g_minus, br}, L.dim);
  NumCtx ctx{tol, nullptr};
  const Eigen::MatrixXd basis = canonical_span(cand, ctx);
  for (int i = 0; i < L.dim; ++i)
    for (int j = 0; j < basis.cols(); ++j) {
      const Eigen::VectorXd b = L.bracket(Element::Unit(L.dim, i),
                                          basis.col(j));
      if (!in_span(basis, b, 1e-9))
        throw Error(Err::NumericalFailure, "ideal property check failed");
    }
  return basis;
}

Eigen::MatrixXd n_h_natural(const LieAlgebra& L, const Element& h,
                            double tol) {
  const Eigen::MatrixXd n = n_h(L, h, tol);
  NumCtx ctx{tol, nullptr};
  return canonical_span(hcat({n, h}, L.dim), ctx);
}

bool is_anti_elliptic(const LieAlgebra& L, const Element& h, double tol) {
  const Grading g = grading(L, h, tol);
  const bool by_dim = n_h_natural(L, h, tol).cols() == L.dim;

  const Eigen::MatrixXd br = pairwise_brackets(L, g.g_plus, g.g_minus);
  const Eigen::MatrixXd rhs = hcat({h, br}, L.dim);
  const bool by_inclusion = span_contains(rhs, g.g_zero, tol);

  if (by_dim != by_inclusion)
    throw Error(Err::CriteriaDisagree,
                "dimension count and centralizer inclusion disagree");
  return by_dim;
}

bool h_in_commutator(const LieAlgebra& L, const Element& h, double tol) {
  const Grading g = grading(L, h, tol);
  const Eigen::MatrixXd br = pairwise_brackets(L, g.g_plus, g.g_minus);
  return in_span(br, h, tol);
}

Eigen::MatrixXd centralizer(const LieAlgebra& L, const Element& h,
                            double tol) {
  NumCtx ctx{tol, nullptr};
  return null_space(ad_matrix(L, h), ctx);
}

EulerReport euler_report(const LieAlgebra& L, const Element& h, double tol) {
  EulerReport rep;
  const Eigen::MatrixXd ad = ad_matrix(L, h);
  const EigenData ed = eigen_data(ad, tol);
  rep.spectrum.resize(ed.values.size());
  for (int i = 0; i < ed.values.size(); ++i)
    rep.spectrum[i] = ed.values(i).real();
  std::sort(rep.spectrum.rbegin(), rep.spectrum.rend());
  rep.is_euler = is_euler(L, h, tol);
  if (!rep.is_euler) return rep;
  rep.grading_bases = grading(L, h, tol);
  rep.tau_matrix = tau_h(L, h, tol);
  rep.n_h_basis = n_h(L, h, tol);
  rep.n_h_natural_basis = n_h_natural(L, h, tol);
  rep.anti_elliptic = is_anti_elliptic(L, h, tol);
  rep.h_in_commutator = h_in_commutator(L, h, tol);
  return rep;
}

}  // namespace ew
