#include <eulerwedge/models.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace ew {
namespace {

using cd = std::complex<double>;

// Fourth-order centered difference for d/du; circular wrap or zero fill.
// Antisymmetric in both variants, so -i D realifies to a symmetric matrix.
Eigen::MatrixXd deriv4(int N, double du, bool circular) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
  const double c1 = 8.0 / (12.0 * du), c2 = 1.0 / (12.0 * du);
  auto wrap = [N](long long i) { return static_cast<int>(((i % N) + N) % N); };
  for (int j = 0; j < N; ++j) {
    auto add = [&](long long l, double v) {
      if (circular) {
        D(j, wrap(l)) += v;
      } else if (l >= 0 && l < N) {
        D(j, static_cast<int>(l)) += v;
      }
    };
    add(j + 1LL, c1);
    add(j - 1LL, -c1);
    add(j + 2LL, -c2);
    add(j - 2LL, c2);
  }
  return D;
}

// Realified matrix of a real operator acting componentwise on C^N.
Eigen::MatrixXd realify_componentwise(const Eigen::MatrixXd& S) {
  const Eigen::Index N = S.rows();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  M.topLeftCorner(N, N) = S;
  M.bottomRightCorner(N, N) = S;
  return M;
}

// Cubic interpolation weights at offsets {-1, 0, 1, 2} for fraction f.
std::array<double, 4> cubic_weights(double f) {
  return {-f * (f - 1.0) * (f - 2.0) / 6.0, (f * f - 1.0) * (f - 2.0) / 2.0,
          -f * (f + 1.0) * (f - 2.0) / 2.0, f * (f * f - 1.0) / 6.0};
}

GridOperatorSet finish_build(ModelKind kind, Grid grid,
                             Eigen::VectorXd profile, bool circular) {
  const int N = static_cast<int>(grid.nodes.size());
  GridOperatorSet ops;
  ops.kind = kind;
  ops.grid = std::move(grid);
  ops.space = make_space(N);
  ops.phase_profile = std::move(profile);
  const Eigen::MatrixXd D = deriv4(N, ops.grid.du, circular);
  // K = -i D: realify(0 - iD) has blocks [[0, D], [-D, 0]].
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  K.topRightCorner(N, N) = D;
  K.bottomLeftCorner(N, N) = -D;
  ops.K = K;
  ops.J = make_antiunitary(ops.space, -coordinate_conjugation(ops.space), -1);
  ops.circular = circular;
  return ops;
}

// e^{i theta u} sampled on the grid; tapered near the ends of non-circular
// grids so that boundary truncation does not pollute the probe.
Eigen::VectorXcd band_probe(const GridOperatorSet& ops, double theta) {
  const int N = static_cast<int>(ops.grid.coords.size());
  Eigen::VectorXcd q(N);
  for (int j = 0; j < N; ++j) {
    double env = 1.0;
    if (!ops.circular) {
      const double x = static_cast<double>(j) / (N - 1);
      const double edge = std::min(x, 1.0 - x);
      if (edge < 0.15)
        env = 0.5 * (1.0 - std::cos(M_PI * edge / 0.15));
    }
    q(j) = env * std::polar(1.0, theta * ops.grid.coords(j));
  }
  return q;
}

int round_to_int(double s, double tol, const char* what) {
  const double k = std::llround(s);
  if (std::abs(s - k) > tol * std::max(1.0, std::abs(s)))
    throw Error(Err::ResolutionTooCoarse, std::string(what) +
                                              ": parameter is not a grid "
                                              "multiple and cannot be "
                                              "represented exactly");
  return static_cast<int>(k);
}

// Simpson value of h on [a, b] with P panels (P even).
template <class F>
double simpson(const F& h, double a, double b, int P) {
  const double step = (b - a) / P;
  double acc = h(a) + h(b);
  for (int m = 1; m < P; ++m) acc += h(a + m * step) * (m % 2 ? 4.0 : 2.0);
  return acc * step / 3.0;
}

// Chebyshev-polynomial-times-bump dictionary function on [lo, hi],
// evaluated pointwise in x.
double dictionary_function(double x, double lo, double hi, int degree) {
  const double y = (2.0 * x - lo - hi) / (hi - lo);
  if (std::abs(y) >= 1.0 - 1e-12) return 0.0;
  double t0 = 1.0, t1 = y;
  double t = (degree == 0) ? t0 : t1;
  for (int r = 2; r <= degree; ++r) {
    const double t2 = 2.0 * y * t1 - t0;
    t0 = t1;
    t1 = t2;
    t = t2;
  }
  return t * std::exp(-1.0 / (1.0 - y * y));
}

// Columns of the realified dictionary embedding: the Fourier transform of
// each dictionary function, sampled on the grid, weighted by
// (-ip)^{order-1} sqrt(w).
Eigen::MatrixXd dictionary_columns(
    const GridOperatorSet& ops,
    const std::vector<std::pair<double, double>>& intervals, int order,
    int count) {
  if (intervals.empty() || count < 1)
    throw Error(Err::EmptyDictionary,
                "the test-function dictionary has no members");
  if (order < 1)
    throw Error(Err::InvariantViolation,
                "the derivative order must be at least 1");
  for (const auto& iv : intervals)
    if (!(iv.first < iv.second))
      throw Error(Err::InvariantViolation,
                  "dictionary intervals must have positive length");

  const int N = static_cast<int>(ops.grid.nodes.size());
  const int ni = static_cast<int>(intervals.size());
  const int panels = 2048;
  Eigen::MatrixXd cols(2 * N, count);
  std::vector<double> fx(panels + 1);
  for (int c = 0; c < count; ++c) {
    const auto [lo, hi] = intervals[c % ni];
    const int degree = c / ni;
    const double h = (hi - lo) / panels;
    for (int m = 0; m <= panels; ++m)
      fx[m] = dictionary_function(lo + m * h, lo, hi, degree);
    Eigen::VectorXcd col(N);
    for (int j = 0; j < N; ++j) {
      const double p = ops.grid.nodes(j);
      // Simpson weights 1,4,2,...,4,1; phase advanced multiplicatively.
      const cd step = std::polar(1.0, p * h);
      cd phase = std::polar(1.0, p * lo);
      cd acc = fx[0] * phase;
      for (int m = 1; m < panels; ++m) {
        phase *= step;
        acc += fx[m] * phase * (m % 2 ? 4.0 : 2.0);
      }
      phase *= step;
      acc += fx[panels] * phase;
      cd fhat = acc * (h / 3.0);
      fhat *= std::pow(cd(0.0, -p), order - 1);
      col(j) = fhat * std::sqrt(ops.grid.weights(j));
    }
    cols.col(c) = realify_vector(col);
  }
  return cols;
}

}  // namespace

GridOperatorSet build_u1_current(int N, double p_min, double p_max) {
  if (N < 16)
    throw Error(Err::ResolutionTooCoarse,
                "the half-line grid needs at least 16 nodes");
  if (!(p_min > 0.0) || !(p_max > p_min))
    throw Error(Err::InvariantViolation,
                "the momentum range must satisfy 0 < p_min < p_max");
  Grid g;
  g.log_spaced = true;
  const double u_min = std::log(p_min);
  const double span = std::log(p_max / p_min);
  g.du = span / N;  // periodic convention: node N aliases node 0
  g.coords.resize(N);
  g.nodes.resize(N);
  g.weights.resize(N);
  for (int j = 0; j < N; ++j) {
    g.coords(j) = u_min + j * g.du;
    g.nodes(j) = std::exp(g.coords(j));
    g.weights(j) = g.du * g.nodes(j) * g.nodes(j);  // p dp = p^2 du
  }
  Eigen::VectorXd profile = g.nodes;
  return finish_build(ModelKind::CurrentHalfLine, std::move(g),
                      std::move(profile), /*circular=*/true);
}

GridOperatorSet build_aff_rep(int N, double half_width) {
  if (N < 16)
    throw Error(Err::ResolutionTooCoarse,
                "the line grid needs at least 16 nodes");
  if (!(half_width > 0.0))
    throw Error(Err::InvariantViolation,
                "the line grid needs a positive half-width");
  Grid g;
  g.log_spaced = false;
  g.du = 2.0 * half_width / (N - 1);  // inclusive endpoints
  g.coords.resize(N);
  g.weights.resize(N);
  for (int j = 0; j < N; ++j) {
    g.coords(j) = -half_width + j * g.du;
    g.weights(j) = g.du * ((j == 0 || j == N - 1) ? 0.5 : 1.0);
  }
  g.nodes = g.coords;
  Eigen::VectorXd profile = g.coords.array().exp();
  return finish_build(ModelKind::AffineLine, std::move(g), std::move(profile),
                      /*circular=*/false);
}

AntiUnitaryOp phase_op(const GridOperatorSet& ops, double s) {
  const int N = static_cast<int>(ops.phase_profile.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  for (int j = 0; j < N; ++j) {
    const double c = std::cos(s * ops.phase_profile(j));
    const double sn = std::sin(s * ops.phase_profile(j));
    M(j, j) = c;
    M(j, N + j) = -sn;
    M(N + j, j) = sn;
    M(N + j, N + j) = c;
  }
  return make_antiunitary(ops.space, M, +1);
}

Eigen::MatrixXd shift_matrix(const GridOperatorSet& ops, double t) {
  const int N = static_cast<int>(ops.grid.coords.size());
  const double s = t / ops.grid.du;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N);
  if (!ops.circular) {
    const int k = round_to_int(s, 1e-9, "line-grid shift");
    for (int j = 0; j < N; ++j) {
      const long long l = j + static_cast<long long>(k);
      if (l >= 0 && l < N) S(j, static_cast<int>(l)) = 1.0;  // zero fill
    }
    return realify_componentwise(S);
  }
  double k = std::floor(s);
  double f = s - k;
  if (f > 1.0 - 1e-12) {
    k += 1.0;
    f = 0.0;
  }
  auto wrap = [N](long long i) { return static_cast<int>(((i % N) + N) % N); };
  if (f < 1e-12) {
    for (int j = 0; j < N; ++j)
      S(j, wrap(j + static_cast<long long>(k))) = 1.0;
  } else {
    const auto w = cubic_weights(f);
    for (int j = 0; j < N; ++j)
      for (int m = -1; m <= 2; ++m)
        S(j, wrap(j + static_cast<long long>(k) + m)) += w[m + 1];
  }
  return realify_componentwise(S);
}

AntiUnitaryOp shift_op(const GridOperatorSet& ops, double t) {
  if (!ops.circular)
    throw Error(Err::InvariantViolation,
                "zero-fill shifts are not unitary; only the circular grid "
                "carries a unitary shift");
  const int N = static_cast<int>(ops.grid.coords.size());
  const double s = t / ops.grid.du;
  double kf = std::floor(s);
  double f = s - kf;
  if (f > 1.0 - 1e-12) {
    kf += 1.0;
    f = 0.0;
  }
  const long long k = static_cast<long long>(kf);
  // Normalize the interpolation symbol mode by mode so the shift becomes
  // exactly orthogonal while keeping the cubic's phase behavior.
  const auto w = cubic_weights(f);
  std::vector<cd> sym(N);
  for (int m = 0; m < N; ++m) {
    const double phi = 2.0 * M_PI * m / N;
    cd c(0.0, 0.0);
    if (f < 1e-12) {
      c = 1.0;
    } else {
      for (int l = -1; l <= 2; ++l) c += w[l + 1] * std::polar(1.0, l * phi);
      const double mag = std::abs(c);
      c = (mag < 1e-12) ? cd(1.0, 0.0) : c / mag;
    }
    const long long km = ((k * m) % N + N) % N;
    sym[m] = c * std::polar(1.0, 2.0 * M_PI * static_cast<double>(km) / N);
  }
  std::vector<double> val(N);
  for (int d = 0; d < N; ++d) {
    double acc = 0.0;
    for (int m = 0; m < N; ++m) {
      const long long md = (static_cast<long long>(m) * d) % N;
      acc += (sym[m] * std::polar(1.0, 2.0 * M_PI * md / N)).real();
    }
    val[d] = acc / N;
  }
  Eigen::MatrixXd S(N, N);
  for (int j = 0; j < N; ++j)
    for (int l = 0; l < N; ++l) S(j, l) = val[((j - l) % N + N) % N];
  return make_antiunitary(ops.space, realify_componentwise(S), +1);
}

Eigen::VectorXd apply_shift(const GridOperatorSet& ops, double t,
                            const Eigen::VectorXd& state) {
  const int N = static_cast<int>(ops.grid.coords.size());
  if (state.size() != 2 * N)
    throw Error(Err::DimensionMismatch, "state does not match the grid");
  if (!ops.circular) {
    // zero-fill truncation: the state must keep its support a margin of
    // |shift| + stencil nodes away from the grid edges
    const int k = round_to_int(t / ops.grid.du, 1e-9, "line-grid shift");
    const int margin = std::min(std::abs(k) + 2, N);
    const double norm2 = state.squaredNorm();
    double edge = 0.0;
    for (int j = 0; j < margin; ++j) {
      edge += state(j) * state(j) + state(N + j) * state(N + j);
      edge += state(N - 1 - j) * state(N - 1 - j) +
              state(2 * N - 1 - j) * state(2 * N - 1 - j);
    }
    if (edge > 1e-9 * std::max(norm2, 1e-300))
      throw Error(Err::PreconditionViolated,
                  "the state carries mass within the truncation margin of "
                  "the grid edge");
  }
  return shift_matrix(ops, t) * state;
}

Eigen::MatrixXd dilation_matrix(const GridOperatorSet& ops, double a) {
  if (!ops.grid.log_spaced)
    throw Error(Err::InvariantViolation,
                "dilations live on the log-spaced grid");
  if (!(a > 0.0))
    throw Error(Err::InvariantViolation, "dilation ratios must be positive");
  return shift_matrix(ops, std::log(a));
}

AntiUnitaryOp dilation_op(const GridOperatorSet& ops, double a) {
  if (!ops.grid.log_spaced)
    throw Error(Err::InvariantViolation,
                "dilations live on the log-spaced grid");
  if (!(a > 0.0))
    throw Error(Err::InvariantViolation, "dilation ratios must be positive");
  return shift_op(ops, std::log(a));
}

Eigen::VectorXd embed_samples(const GridOperatorSet& ops,
                              const Eigen::VectorXcd& values) {
  if (values.size() != ops.grid.nodes.size())
    throw Error(Err::DimensionMismatch,
                "sample count does not match the grid");
  Eigen::VectorXcd psi(values.size());
  for (Eigen::Index j = 0; j < values.size(); ++j)
    psi(j) = values(j) * std::sqrt(ops.grid.weights(j));
  return realify_vector(psi);
}

std::complex<double> pairing(const GridOperatorSet& ops,
                             const Eigen::VectorXcd& F,
                             const Eigen::VectorXcd& G) {
  if (F.size() != ops.grid.nodes.size() || G.size() != ops.grid.nodes.size())
    throw Error(Err::DimensionMismatch,
                "sample count does not match the grid");
  cd acc(0.0, 0.0);
  for (Eigen::Index j = 0; j < F.size(); ++j)
    acc += ops.grid.weights(j) * std::conj(F(j)) * G(j);
  return acc;
}

Eigen::VectorXd constant_direction(const GridOperatorSet& ops) {
  return embed_samples(ops,
                       Eigen::VectorXcd::Ones(ops.grid.nodes.size()));
}

double unitarity_defect(const GridOperatorSet& ops,
                        const Eigen::MatrixXd& op_matrix, double band) {
  if (!(band > 0.0))
    throw Error(Err::InvariantViolation, "the probe band must be positive");
  const int N = static_cast<int>(ops.grid.coords.size());
  if (op_matrix.rows() != 2 * N || op_matrix.cols() != 2 * N)
    throw Error(Err::DimensionMismatch, "operator does not match the grid");
  const double span = ops.grid.du * (ops.circular ? N : N - 1);
  double worst = 0.0;
  for (int i = 1; i <= 3; ++i) {
    double theta = band * i / 3.0;
    if (ops.circular) {
      // snap to an exact circulant mode so the seam stays invisible
      const double m = std::max(1.0, std::round(theta * span / (2.0 * M_PI)));
      theta = 2.0 * M_PI * m / span;
    }
    const Eigen::VectorXd q = realify_vector(band_probe(ops, theta));
    const Eigen::VectorXd r = op_matrix.transpose() * (op_matrix * q) - q;
    worst = std::max(worst, r.norm() / q.norm());
  }
  return worst;
}

BglGridResult bgl_subspace_grid(const GridOperatorSet& ops, double window) {
  if (!(window > 0.0))
    throw Error(Err::InvariantViolation, "the spectral window must be positive");
  if (M_PI * window > 21.0)
    throw Error(Err::GeneratorIllConditioned,
                "the spectral window is too wide: the modular weights "
                "exp(pi * window) would exceed reliable double range");
  const int N = static_cast<int>(ops.grid.coords.size());
  const Eigen::MatrixXcd Kc = complexify(ops.K);
  if ((Kc - Kc.adjoint()).norm() > 1e-9 * (1.0 + Kc.norm()))
    throw Error(Err::GeneratorIllConditioned,
                "the shift generator is not hermitian");
  const Eigen::MatrixXd& Jm = ops.J.matrix;
  if ((Jm * ops.K * Jm + ops.K).norm() > 1e-9 * (1.0 + ops.K.norm()))
    throw Error(Err::GeneratorIllConditioned,
                "the conjugation does not invert the shift generator");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Kc);
  if (es.info() != Eigen::Success)
    throw Error(Err::NumericalFailure, "eigensolver failed on the generator");
  const Eigen::VectorXd theta = es.eigenvalues();  // N complex-level modes
  const double theta_scale = std::max(theta.cwiseAbs().maxCoeff(), 1.0);
  const double zero_tol = 1e-9 * theta_scale;

  Eigen::VectorXd clamped(N);
  for (int i = 0; i < N; ++i)
    clamped(i) = std::exp(-M_PI * std::clamp(theta(i), -window, window));
  Eigen::MatrixXcd Hc = es.eigenvectors() * clamped.asDiagonal() *
                        es.eigenvectors().adjoint();
  Hc = 0.5 * (Hc + Eigen::MatrixXcd(Hc.adjoint()));
  Eigen::MatrixXd half_delta = realify(Hc);

  // One eigenvector per mode; its conjugate lives in the -theta block, so
  // only theta >= 0 contributes fresh directions.  Modes beyond the window
  // carry unrepresentable modular weights and are excluded.
  std::vector<Eigen::MatrixXd> cols;
  for (int i = 0; i < N; ++i) {
    const double th = theta(i);
    const Eigen::VectorXcd v = es.eigenvectors().col(i);
    Eigen::VectorXcd x1, x2;
    if (std::abs(th) <= zero_tol) {
      x1 = v - v.conjugate();
      x2 = cd(0.0, 1.0) * (v + v.conjugate());
    } else if (th > zero_tol && th <= window + zero_tol) {
      const double r = std::exp(-M_PI * th);
      x1 = v - r * v.conjugate();
      x2 = cd(0.0, 1.0) * (v + r * v.conjugate());
    } else {
      continue;
    }
    for (const auto& x : {x1, x2})
      if (x.norm() > 1e-8)
        cols.push_back(realify_vector(x));
  }
  BglGridResult out;
  out.window = window;
  out.half_delta = half_delta;
  out.V = make_subspace(ops.space, hcat(cols, 2 * N));

  const Eigen::MatrixXd& B = out.V.span_matrix;
  out.kms_residuals.resize(B.cols());
  for (Eigen::Index c = 0; c < B.cols(); ++c) {
    out.kms_residuals(c) =
        (half_delta * B.col(c) - Jm * B.col(c)).norm() / B.col(c).norm();
    if (!(out.kms_residuals(c) < 1e-6))
      throw Error(Err::NumericalFailure,
                  "a basis vector violates the grid KMS equation (residual " +
                      std::to_string(out.kms_residuals(c)) + ")");
  }
  return out;
}

RealSubspace test_function_subspace(
    const GridOperatorSet& ops,
    const std::vector<std::pair<double, double>>& intervals, int order,
    int dictionary_size) {
  const Eigen::MatrixXd cols =
      dictionary_columns(ops, intervals, order, dictionary_size);
  return make_subspace(ops.space, cols);
}

Eigen::VectorXd codim_profile(
    const GridOperatorSet& ops,
    const std::vector<std::pair<double, double>>& intervals, int k, int l,
    int dictionary_size) {
  if (k < 1 || l <= k)
    throw Error(Err::InvariantViolation,
                "codimension profiles need derivative orders 1 <= k < l");
  Eigen::MatrixXd Ak = dictionary_columns(ops, intervals, k, dictionary_size);
  const Eigen::MatrixXd Al =
      dictionary_columns(ops, intervals, l, dictionary_size);
  for (Eigen::Index c = 0; c < Ak.cols(); ++c) {
    const double n = Ak.col(c).norm();
    if (n > 0.0) Ak.col(c) /= n;
  }
  const Eigen::MatrixXd R = Ak - projector(Al) * Ak;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
  return svd.singularValues();
}

RegularityTrajectory regularity_demo(
    const GridOperatorSet& ops, const RealSubspace& V,
    const std::vector<std::pair<double, double>>& pairs,
    const Eigen::VectorXd& scales, double tol) {
  if (scales.size() == 0)
    throw Error(Err::InvariantViolation, "no scales to sample");
  if (V.span_matrix.cols() == 0)
    throw Error(Err::InvariantViolation,
                "the reference subspace must not be zero");
  RegularityTrajectory out;
  out.scales = scales;
  out.v_dim = static_cast<int>(V.span_matrix.cols());
  const AntiUnitaryOp id = make_antiunitary(
      ops.space, Eigen::MatrixXd::Identity(2 * ops.space.n, 2 * ops.space.n),
      +1);
  for (Eigen::Index i = 0; i < scales.size(); ++i) {
    const double eps = scales(i);
    if (!(eps > 0.0))
      throw Error(Err::InvariantViolation, "scales must be positive");
    std::vector<AntiUnitaryOp> family{id};
    for (const auto& [s, t] : pairs) {
      Eigen::MatrixXd M = phase_op(ops, s * eps).matrix;
      if (ops.circular && t * eps != 0.0)
        M = M * shift_op(ops, t * eps).matrix;
      family.push_back(make_antiunitary(ops.space, M, +1));
    }
    const RealSubspace Vn = intersect_family(ops.space, V, family, {tol});
    out.ranks.push_back(static_cast<int>(Vn.span_matrix.cols()));
  }
  return out;
}

namespace {

// Band-limited test vector on exact circulant modes: xi = g + J g_delta
// with g a cos^2-profile over frequencies in [1, 2.5] and g_delta carrying
// the exact per-mode modular weights exp(-pi theta).  Its continuum
// counterpart solves the KMS equation exactly, so the grid residual
// isolates the discretization error of the shift generator.
double band_kms_residual(const GridOperatorSet& ops,
                         const Eigen::MatrixXd& half_delta) {
  const int N = static_cast<int>(ops.grid.coords.size());
  const double span = ops.grid.du * N;
  const double center = 1.75, half = 0.75;
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(N);
  Eigen::VectorXcd gd = Eigen::VectorXcd::Zero(N);
  int used = 0;
  for (int m = 1;; ++m) {
    const double th = 2.0 * M_PI * m / span;
    if (th > center + half) break;
    if (th < center - half) continue;
    const double amp =
        std::pow(std::cos(M_PI * (th - center) / (2.0 * half)), 2);
    const double r = std::exp(-M_PI * th);
    for (int j = 0; j < N; ++j) {
      const cd mode = std::polar(1.0, th * ops.grid.coords(j));
      g(j) += amp * mode;
      gd(j) += amp * r * mode;
    }
    ++used;
  }
  if (used == 0)
    throw Error(Err::ResolutionTooCoarse,
                "the diagnostic band holds no grid modes; widen the "
                "momentum range");
  const Eigen::VectorXcd xi = g - gd.conjugate();  // g + J g_delta
  const Eigen::VectorXd xr = realify_vector(xi);
  return (half_delta * xr - ops.J.matrix * xr).norm() / xr.norm();
}

}  // namespace

TrendReport kms_refinement(int N, double p_min, double p_max) {
  TrendReport rep;
  for (int pass = 0; pass < 2; ++pass) {
    const GridOperatorSet ops =
        build_u1_current(pass == 0 ? N : 2 * N, p_min, p_max);
    const BglGridResult bgl = bgl_subspace_grid(ops);
    (pass == 0 ? rep.coarse : rep.fine) =
        band_kms_residual(ops, bgl.half_delta);
  }
  rep.ratio = rep.coarse > 0.0 ? rep.fine / rep.coarse : 0.0;
  rep.improved = rep.fine <= 0.5 * rep.coarse;
  return rep;
}

TrendReport dilation_defect_refinement(int N, double p_min, double p_max,
                                       double a) {
  TrendReport rep;
  for (int pass = 0; pass < 2; ++pass) {
    const GridOperatorSet ops =
        build_u1_current(pass == 0 ? N : 2 * N, p_min, p_max);
    (pass == 0 ? rep.coarse : rep.fine) =
        unitarity_defect(ops, dilation_matrix(ops, a));
  }
  rep.ratio = rep.coarse > 0.0 ? rep.fine / rep.coarse : 0.0;
  rep.improved = rep.fine <= 0.5 * rep.coarse;
  return rep;
}

TrendReport pairing_refinement(int N, double p_min, double p_max) {
  if (N < 32 || N % 2 != 0)
    throw Error(Err::ResolutionTooCoarse,
                "the pairing diagnostic needs an even grid of at least 32 "
                "nodes");
  TrendReport rep;
  // C^3 window with node-aligned support ends (indices from the coarse
  // grid, which the fine grid contains): the quadrature error is then a
  // clean power of the step.
  const GridOperatorSet coarse = build_u1_current(N, p_min, p_max);
  const double c = coarse.grid.coords(0) + coarse.grid.du * (N / 2);
  const double w = coarse.grid.du * (N / 4);
  auto window4 = [&](double u) {
    const double t = (u - c) / w;
    if (std::abs(t) >= 1.0) return 0.0;
    return std::pow(1.0 - t * t, 2);
  };
  const double oracle = simpson(
      [&](double u) {
        const double f = window4(u);
        return std::exp(2.0 * u) * f * f;
      },
      c - w, c + w, 1 << 14);
  for (int pass = 0; pass < 2; ++pass) {
    const GridOperatorSet ops =
        build_u1_current(pass == 0 ? N : 2 * N, p_min, p_max);
    const int n = static_cast<int>(ops.grid.nodes.size());
    Eigen::VectorXcd F(n);
    for (int j = 0; j < n; ++j) F(j) = window4(ops.grid.coords(j));
    const double value = pairing(ops, F, F).real();
    (pass == 0 ? rep.coarse : rep.fine) = std::abs(value - oracle);
  }
  rep.ratio = rep.coarse > 0.0 ? rep.fine / rep.coarse : 0.0;
  rep.improved = rep.fine <= 0.5 * rep.coarse;
  return rep;
}

TrendReport commutator_refinement(int N, double half_width) {
  TrendReport rep;
  for (int pass = 0; pass < 2; ++pass) {
    const GridOperatorSet ops =
        build_aff_rep(pass == 0 ? N : 2 * N, half_width);
    const int n = static_cast<int>(ops.grid.nodes.size());
    const Eigen::MatrixXd D = deriv4(n, ops.grid.du, false);
    const Eigen::VectorXd E = ops.phase_profile;
    // Interior-supported smooth oscillating probe, centered left of the
    // origin so that the exp(p) weight cannot re-inflate the right tail.
    Eigen::VectorXd q(n);
    const double sigma = 0.25 * half_width;
    const double center = -0.2 * half_width;
    for (int j = 0; j < n; ++j) {
      const double p = ops.grid.nodes(j);
      const double d = (p - center) / sigma;
      q(j) = std::exp(-d * d) * std::cos(1.3 * p);
    }
    const Eigen::VectorXd lhs =
        D * (E.asDiagonal() * q) - E.asDiagonal() * (D * q);
    const Eigen::VectorXd rhs = E.asDiagonal() * q;
    (pass == 0 ? rep.coarse : rep.fine) = (lhs - rhs).norm() / rhs.norm();
  }
  rep.ratio = rep.coarse > 0.0 ? rep.fine / rep.coarse : 0.0;
  rep.improved = rep.fine <= 0.5 * rep.coarse;
  return rep;
}

SpreadReport shift_generator_spread(const GridOperatorSet& ops) {
  const int N = static_cast<int>(ops.grid.coords.size());
  const Eigen::MatrixXcd Kc = complexify(ops.K);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Kc);
  if (es.info() != Eigen::Success)
    throw Error(Err::NumericalFailure, "eigensolver failed on the generator");
  const double theta_max = es.eigenvalues().cwiseAbs().maxCoeff();
  const int edge = std::max(1, N / 10);
  SpreadReport rep;
  for (int i = 0; i < N; ++i) {
    if (std::abs(es.eigenvalues()(i)) > 0.6 * theta_max) continue;
    const Eigen::VectorXcd v = es.eigenvectors().col(i);
    double boundary = 0.0;
    for (int j = 0; j < edge; ++j)
      boundary += std::norm(v(j)) + std::norm(v(N - 1 - j));
    if (boundary > 0.2) continue;
    ++rep.interior_count;
    for (int j = 0; j < N; ++j)
      rep.max_node_mass = std::max(rep.max_node_mass, std::norm(v(j)));
  }
  return rep;
}

Eigen::MatrixXd position_phase_generator(const GridOperatorSet& ops) {
  const int N = static_cast<int>(ops.phase_profile.size());
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  X.topRightCorner(N, N) =
      -Eigen::MatrixXd(ops.phase_profile.asDiagonal());
  X.bottomLeftCorner(N, N) = Eigen::MatrixXd(ops.phase_profile.asDiagonal());
  return X;
}

double scaling_conjugation_defect(const GridOperatorSet& ops, double t) {
  const int N = static_cast<int>(ops.grid.coords.size());
  const int k = round_to_int(t / ops.grid.du, 1e-9, "scaling shift");
  const double mult = std::exp(static_cast<double>(k) * ops.grid.du);
  const double scale = mult * ops.phase_profile.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    const long long l = j + static_cast<long long>(k);
    if (l < 0 || l >= N) continue;  // outside the zero-fill / wrap seam
    worst = std::max(worst, std::abs(ops.phase_profile(l) -
                                     mult * ops.phase_profile(j)) /
                                scale);
  }
  return worst;
}

}  // namespace ew
