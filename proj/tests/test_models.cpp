#include <catch2/catch_amalgamated.hpp>

#include <eulerwedge/models.hpp>

#include <cmath>
#include <complex>
#include <vector>

using namespace ew;
using cd = std::complex<double>;
using ivlist = std::vector<std::pair<double, double>>;

namespace {

// Smooth taper supported on the middle half of the grid, oscillating at
// frequency theta.  Seam-safe on the circular grid, margin-safe on the
// zero-fill grid.
Eigen::VectorXcd midspan_probe(const GridOperatorSet& ops, double theta) {
  const int N = static_cast<int>(ops.grid.coords.size());
  Eigen::VectorXcd v(N);
  const double u0 = ops.grid.coords(0);
  const double span = ops.grid.du * (ops.circular ? N : N - 1);
  for (int j = 0; j < N; ++j) {
    const double x = (ops.grid.coords(j) - u0) / span;  // in [0, 1)
    double env = 0.0;
    if (x > 0.25 && x < 0.75) {
      const double s = std::sin(2.0 * M_PI * (x - 0.25));
      env = s * s * s * s;  // C^3 at the support ends
    }
    v(j) = env * std::polar(1.0, theta * ops.grid.coords(j));
  }
  return v;
}

// Multi-scale tiling of the momentum half-line, reaching far enough out
// that every derivative order resolves the same grid-visible span.
ivlist halfline_tiles() {
  ivlist tiles;
  for (int j = 0; j < 10; ++j) tiles.push_back({0.05 + 2.5 * j, 5.05 + 2.5 * j});
  for (int j = 0; j < 8; ++j) tiles.push_back({0.1 + 1.1 * j, 1.2 + 1.1 * j});
  for (int j = 0; j < 3; ++j) tiles.push_back({0.05 + 9.0 * j, 12.05 + 9.0 * j});
  for (int j = 0; j < 3; ++j)
    tiles.push_back({0.05 + 20.0 * j, 25.05 + 20.0 * j});
  for (int j = 0; j < 2; ++j)
    tiles.push_back({0.05 + 40.0 * j, 50.05 + 40.0 * j});
  return tiles;
}

}  // namespace

TEST_CASE("grid construction and validation") {
  SECTION("log-spaced half-line grid") {
    const GridOperatorSet ops = build_u1_current(64, 0.1, 10.0);
    REQUIRE(ops.kind == ModelKind::CurrentHalfLine);
    REQUIRE(ops.circular);
    REQUIRE(ops.grid.log_spaced);
    REQUIRE(ops.grid.nodes.size() == 64);
    // periodic convention: N steps cover the full log-span
    CHECK(ops.grid.du == Catch::Approx(std::log(100.0) / 64));
    CHECK(ops.grid.nodes(0) == Catch::Approx(0.1));
    for (int j = 0; j < 64; ++j)
      CHECK(ops.grid.weights(j) ==
            Catch::Approx(ops.grid.du * ops.grid.nodes(j) * ops.grid.nodes(j)));
    CHECK(ops.phase_profile.isApprox(ops.grid.nodes));
  }
  SECTION("uniform line grid") {
    const GridOperatorSet ops = build_aff_rep(65, 4.0);
    REQUIRE(ops.kind == ModelKind::AffineLine);
    REQUIRE_FALSE(ops.circular);
    REQUIRE_FALSE(ops.grid.log_spaced);
    CHECK(ops.grid.coords(0) == Catch::Approx(-4.0));
    CHECK(ops.grid.coords(64) == Catch::Approx(4.0));
    CHECK(ops.grid.du == Catch::Approx(8.0 / 64));
    // trapezoid ends carry half weight
    CHECK(ops.grid.weights(0) == Catch::Approx(0.5 * ops.grid.du));
    CHECK(ops.grid.weights(32) == Catch::Approx(ops.grid.du));
    // multiplier weight exp(p)
    CHECK(ops.phase_profile(32) == Catch::Approx(1.0));
    CHECK(ops.phase_profile(64) == Catch::Approx(std::exp(4.0)));
  }
  SECTION("rejects unusable parameters") {
    CHECK_THROWS_AS(build_u1_current(8, 0.1, 10.0), Error);
    CHECK_THROWS_AS(build_u1_current(64, -1.0, 10.0), Error);
    CHECK_THROWS_AS(build_u1_current(64, 5.0, 2.0), Error);
    CHECK_THROWS_AS(build_aff_rep(8, 4.0), Error);
    CHECK_THROWS_AS(build_aff_rep(64, 0.0), Error);
    try {
      build_u1_current(8, 0.1, 10.0);
    } catch (const Error& e) {
      CHECK(e.code() == Err::ResolutionTooCoarse);
    }
    try {
      build_u1_current(64, 5.0, 2.0);
    } catch (const Error& e) {
      CHECK(e.code() == Err::InvariantViolation);
    }
  }
  SECTION("generator structure") {
    for (const GridOperatorSet& ops :
         {build_u1_current(48, 0.1, 10.0), build_aff_rep(48, 4.0)}) {
      const int n2 = static_cast<int>(ops.K.rows());
      // realified i d/du is symmetric and anticommutes with the conjugation
      CHECK((ops.K - ops.K.transpose()).norm() < 1e-12 * (1.0 + ops.K.norm()));
      CHECK((ops.J.matrix * ops.K * ops.J.matrix + ops.K).norm() <
            1e-12 * (1.0 + ops.K.norm()));
      CHECK(ops.J.parity == -1);
      CHECK((ops.J.matrix * ops.J.matrix -
             Eigen::MatrixXd::Identity(n2, n2))
                .norm() < 1e-12);
    }
  }
}

TEST_CASE("phase, shift, and dilation operators") {
  const GridOperatorSet u1 = build_u1_current(128, 0.05, 20.0);

  SECTION("phase operators are exactly unitary and compose") {
    const AntiUnitaryOp P = phase_op(u1, 0.7);
    CHECK(P.parity == +1);
    const int n2 = static_cast<int>(P.matrix.rows());
    CHECK((P.matrix.transpose() * P.matrix -
           Eigen::MatrixXd::Identity(n2, n2))
              .norm() < 1e-12);
    const AntiUnitaryOp Q = phase_op(u1, -0.3);
    const AntiUnitaryOp R = phase_op(u1, 0.4);
    CHECK((P.matrix * Q.matrix - R.matrix).norm() < 1e-12);
    CHECK(phase_op(u1, 0.0).matrix.isIdentity(1e-14));
  }

  SECTION("zero shift and unit dilation are the identity") {
    CHECK(shift_matrix(u1, 0.0).isIdentity(1e-14));
    CHECK(dilation_matrix(u1, 1.0).isIdentity(1e-14));
  }

  SECTION("grid-ratio dilations permute nodes exactly") {
    const double a = std::exp(7 * u1.grid.du);
    const Eigen::MatrixXd S = dilation_matrix(u1, a);
    const Eigen::MatrixXd U = dilation_op(u1, a).matrix;
    CHECK((U - S).norm() < 1e-10);
    for (int j : {0, 31, 100})
      CHECK(std::abs(S.row(j).sum() - 1.0) < 1e-14);
    // one step forward then back is the identity
    CHECK((dilation_matrix(u1, 1.0 / a) * S).isIdentity(1e-10));
  }

  SECTION("symbol-normalized shifts are exactly orthogonal") {
    const int n2 = static_cast<int>(u1.K.rows());
    for (double t : {0.37 * u1.grid.du, 3.0 * u1.grid.du, -1.4}) {
      const Eigen::MatrixXd U = shift_op(u1, t).matrix;
      CHECK((U.transpose() * U - Eigen::MatrixXd::Identity(n2, n2)).norm() <
            1e-11);
    }
    CHECK(unitarity_defect(u1, shift_op(u1, 0.9).matrix) < 1e-11);
  }

  SECTION("interpolated dilations are banded-probe unitary") {
    const GridOperatorSet fine = build_u1_current(512, 0.01, 100.0);
    for (double la : {0.99, -0.99, 0.5})
      CHECK(unitarity_defect(fine, dilation_matrix(fine, std::exp(la))) <
            1e-6);
  }

  SECTION("only the circular grid carries a unitary shift") {
    const GridOperatorSet aff = build_aff_rep(64, 4.0);
    CHECK_THROWS_AS(shift_op(aff, 0.5), Error);
    try {
      shift_op(aff, 0.5);
    } catch (const Error& e) {
      CHECK(e.code() == Err::InvariantViolation);
    }
    // line-grid shifts must land on grid nodes
    CHECK_THROWS_AS(shift_matrix(aff, 0.3 * aff.grid.du), Error);
    try {
      shift_matrix(aff, 0.3 * aff.grid.du);
    } catch (const Error& e) {
      CHECK(e.code() == Err::ResolutionTooCoarse);
    }
    CHECK(shift_matrix(aff, 0.0).isIdentity(1e-14));
  }

  SECTION("zero-fill shifts enforce the support margin") {
    const GridOperatorSet aff = build_aff_rep(128, 8.0);
    const double t = 4 * aff.grid.du;
    Eigen::VectorXcd mid = Eigen::VectorXcd::Zero(128);
    for (int j = 40; j < 88; ++j) {
      const double x = (j - 40) / 48.0;
      mid(j) = std::pow(std::sin(M_PI * x), 2);
    }
    const Eigen::VectorXd state = embed_samples(aff, mid);
    CHECK_NOTHROW(apply_shift(aff, t, state));
    Eigen::VectorXcd edge = Eigen::VectorXcd::Zero(128);
    edge(1) = 1.0;
    CHECK_THROWS_AS(apply_shift(aff, t, embed_samples(aff, edge)), Error);
    try {
      apply_shift(aff, t, embed_samples(aff, edge));
    } catch (const Error& e) {
      CHECK(e.code() == Err::PreconditionViolated);
    }
    // the circular grid needs no margin
    CHECK_NOTHROW(apply_shift(u1, 0.8, Eigen::VectorXd::Ones(2 * 128)));
  }
}

TEST_CASE("sampling, pairing, and the distinguished direction") {
  const GridOperatorSet u1 = build_u1_current(96, 0.1, 10.0);

  SECTION("pairing matches the weighted sum and is conjugate-symmetric") {
    Eigen::VectorXcd F(96), G(96);
    for (int j = 0; j < 96; ++j) {
      F(j) = cd(std::cos(0.2 * j), std::sin(0.11 * j));
      G(j) = cd(std::sin(0.07 * j), 0.3);
    }
    const cd fg = pairing(u1, F, G);
    CHECK(std::abs(fg - std::conj(pairing(u1, G, F))) < 1e-12);
    const cd ff = pairing(u1, F, F);
    CHECK(ff.imag() < 1e-12);
    // embedding is an isometry onto the weighted samples
    const Eigen::VectorXd f = embed_samples(u1, F);
    CHECK(f.squaredNorm() == Catch::Approx(ff.real()));
    CHECK_THROWS_AS(pairing(u1, F.head(50), G), Error);
  }

  SECTION("the constant profile is a dilation eigenvector off the seam") {
    const Eigen::VectorXd v = constant_direction(u1);
    const double a = std::exp(5 * u1.grid.du);
    const Eigen::VectorXd w = dilation_matrix(u1, a) * v;
    const Eigen::VectorXcd vc = complexify_vector(v);
    const Eigen::VectorXcd wc = complexify_vector(w);
    // ratio at interior nodes is one fixed multiplier (a or 1/a)
    const cd r0 = wc(40) / vc(40);
    double worst = 0.0;
    for (int j = 20; j < 76; ++j)
      worst = std::max(worst, std::abs(wc(j) / vc(j) - r0));
    CHECK(worst < 1e-12);
    CHECK((std::abs(r0 - cd(a)) < 1e-12 || std::abs(r0 - cd(1.0 / a)) < 1e-12));
  }
}

TEST_CASE("modular subspace from the spectral window") {
  const GridOperatorSet u1 = build_u1_current(128, 0.05, 20.0);
  const BglGridResult bgl = bgl_subspace_grid(u1);

  SECTION("window-limited dimension and conjugation compatibility") {
    CHECK(bgl.window == Catch::Approx(4.0));
    CHECK(bgl.V.span_matrix.cols() == 12);
    CHECK(bgl.kms_residuals.size() == 12);
    CHECK(bgl.kms_residuals.maxCoeff() < 1e-6);
    // half_delta is symmetric positive and commutes with the flow direction
    CHECK((bgl.half_delta - bgl.half_delta.transpose()).norm() <
          1e-9 * bgl.half_delta.norm());
  }

  SECTION("fixed vectors of the unit modular block lie in the subspace") {
    Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(128) / std::sqrt(128.0);
    CHECK(in_span(bgl.V.span_matrix, realify_vector(cd(0, 1) * ones), 1e-7));
    CHECK_FALSE(in_span(bgl.V.span_matrix, realify_vector(ones), 1e-7));
    Eigen::VectorXcd nyq(128);
    for (int j = 0; j < 128; ++j)
      nyq(j) = (j % 2 ? -1.0 : 1.0) / std::sqrt(128.0);
    CHECK(in_span(bgl.V.span_matrix, realify_vector(cd(0, 1) * nyq), 1e-7));
  }

  SECTION("window guards") {
    CHECK_THROWS_AS(bgl_subspace_grid(u1, 0.0), Error);
    CHECK_THROWS_AS(bgl_subspace_grid(u1, 8.0), Error);
    try {
      bgl_subspace_grid(u1, 8.0);
    } catch (const Error& e) {
      CHECK(e.code() == Err::GeneratorIllConditioned);
    }
  }
}

TEST_CASE("diagnostics improve under grid refinement") {
  SECTION("modular flow residual on the band vector") {
    const TrendReport rep = kms_refinement(128, 0.01, 100.0);
    CHECK(rep.coarse < 1e-3);
    CHECK(rep.fine < 1e-4);
    CHECK(rep.ratio <= 0.5);
    CHECK(rep.improved);
  }
  SECTION("interpolated dilation defect") {
    const TrendReport rep =
        dilation_defect_refinement(128, 0.01, 100.0, std::exp(0.37));
    CHECK(rep.fine < 1e-5);
    CHECK(rep.ratio <= 0.5);
    CHECK(rep.improved);
  }
  SECTION("pairing quadrature on the node-aligned window") {
    const TrendReport rep = pairing_refinement(64, 0.01, 100.0);
    CHECK(rep.coarse < 1e-4);
    CHECK(rep.ratio <= 0.5);
    CHECK(rep.improved);
    CHECK_THROWS_AS(pairing_refinement(30, 0.01, 100.0), Error);
    CHECK_THROWS_AS(pairing_refinement(33, 0.01, 100.0), Error);
  }
  SECTION("multiplier commutator on the line grid") {
    const TrendReport rep = commutator_refinement(128, 8.0);
    CHECK(rep.coarse < 1e-2);
    CHECK(rep.fine < 1e-3);
    CHECK(rep.ratio <= 0.5);
    CHECK(rep.improved);
  }
}

TEST_CASE("translation and dilation satisfy the affine group law") {
  // U(b2, a2) U(b1, a1) = U(b2 + a2 b1, a2 a1) with U(b, a) acting as the
  // dilation followed by the phase, on a seam-avoiding probe; the defect
  // is pure interpolation error and shrinks under refinement
  const double b1 = 0.4, b2 = -0.7;
  const double a1 = std::exp(0.37), a2 = std::exp(-0.21);
  const auto law_defect = [&](int N) {
    const GridOperatorSet u1 = build_u1_current(N, 0.01, 100.0);
    const Eigen::VectorXd q = embed_samples(
        u1, midspan_probe(u1, 2.0 * M_PI * 8 / (N * u1.grid.du)));
    const auto act = [&](double b, double a,
                         const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return phase_op(u1, b).matrix * (dilation_matrix(u1, a) * x);
    };
    const Eigen::VectorXd lhs = act(b2, a2, act(b1, a1, q));
    const Eigen::VectorXd rhs = act(b2 + a2 * b1, a2 * a1, q);
    return (lhs - rhs).norm() / q.norm();
  };
  const double coarse = law_defect(256);
  const double fine = law_defect(512);
  CHECK(coarse < 1e-3);
  CHECK(fine < 1e-5);
  CHECK(fine <= 0.5 * coarse);
}

TEST_CASE("test-function dictionaries on the half-line") {
  const GridOperatorSet ops = build_u1_current(24, 0.2, 5.0);
  const ivlist tiles = halfline_tiles();

  SECTION("every derivative order saturates the same rank") {
    const RealSubspace H1 = test_function_subspace(ops, tiles, 1, 104);
    const RealSubspace H2 = test_function_subspace(ops, tiles, 2, 104);
    const RealSubspace H3 = test_function_subspace(ops, tiles, 3, 104);
    CHECK(H1.span_matrix.cols() == 48);  // = 2N: grid-cyclic
    CHECK(H2.span_matrix.cols() == H1.span_matrix.cols());
    CHECK(H3.span_matrix.cols() == H1.span_matrix.cols());
    CHECK(is_cyclic(ops.space, H1, {1e-9}));
  }

  SECTION("dictionary guards") {
    CHECK_THROWS_AS(test_function_subspace(ops, {}, 1, 10), Error);
    CHECK_THROWS_AS(test_function_subspace(ops, tiles, 1, 0), Error);
    CHECK_THROWS_AS(test_function_subspace(ops, {{2.0, 1.0}}, 1, 10), Error);
    CHECK_THROWS_AS(test_function_subspace(ops, tiles, 0, 10), Error);
    try {
      test_function_subspace(ops, {}, 1, 10);
    } catch (const Error& e) {
      CHECK(e.code() == Err::EmptyDictionary);
    }
  }
}

TEST_CASE("derivative-order codimensions on a bounded interval") {
  const GridOperatorSet ops = build_u1_current(128, 0.05, 60.0);
  const ivlist sub{{1.0, 3.0},
                   {1.0, 2.0},
                   {2.0, 3.0},
                   {1.25, 2.75},
                   {1.5, 2.5}};
  // the quotient dimension equals the order gap: a clean singular-value
  // cliff separates exactly l - k kept directions from the rest
  for (auto [k, l] :
       std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}}) {
    const Eigen::VectorXd s = codim_profile(ops, sub, k, l, 60);
    const int keep = l - k;
    INFO("orders (" << k << ", " << l << ")");
    CHECK(s(keep - 1) > 1e-2);
    CHECK(s(keep) < 1e-6);
    CHECK(s(keep - 1) / s(keep) > 1e4);
  }
  CHECK_THROWS_AS(codim_profile(ops, sub, 2, 2, 60), Error);
  CHECK_THROWS_AS(codim_profile(ops, sub, 3, 1, 60), Error);
}

TEST_CASE("escape to infinity halves the embedded norm per width doubling") {
  const GridOperatorSet ops = build_u1_current(256, 0.005, 50.0);
  // bump profiles of width n on the line side embed with norm ~ 1/n
  const auto spread_norm = [&](double nwidth) {
    Eigen::VectorXcd fhat(256);
    for (int j = 0; j < 256; ++j) {
      const double p = ops.grid.nodes(j);
      // transform of a fixed bump stretched by nwidth, normalized mass
      const double y = p * nwidth;
      fhat(j) = std::exp(-y * y / 2.0);
    }
    return std::sqrt(pairing(ops, fhat, fhat).real());
  };
  const double n1 = spread_norm(1.0);
  const double n2 = spread_norm(2.0);
  const double n4 = spread_norm(4.0);
  CHECK(n2 / n1 == Catch::Approx(0.5).margin(0.01));
  CHECK(n4 / n2 == Catch::Approx(0.5).margin(0.01));
}

TEST_CASE("shrinking neighborhoods recover the full subspace") {
  const GridOperatorSet ops = build_u1_current(128, 0.05, 20.0);
  const BglGridResult bgl = bgl_subspace_grid(ops);
  Eigen::VectorXd scales(4);
  scales << 1.0, 1e-2, 1e-4, 1e-7;

  SECTION("mixed phase and shift perturbations") {
    const RegularityTrajectory tr = regularity_demo(
        ops, bgl.V, {{0.6, 0.0}, {0.0, 0.5}, {1.0, 1.0}}, scales, 1e-5);
    REQUIRE(tr.ranks.size() == 4);
    CHECK(tr.v_dim == 12);
    for (size_t i = 1; i < tr.ranks.size(); ++i)
      CHECK(tr.ranks[i] >= tr.ranks[i - 1]);
    CHECK(tr.ranks.front() < tr.v_dim);
    CHECK(tr.ranks.back() == tr.v_dim);
  }

  SECTION("phase-only perturbations") {
    const RegularityTrajectory tr =
        regularity_demo(ops, bgl.V, {{0.4, 0.0}}, scales, 1e-5);
    CHECK(tr.ranks.front() < tr.v_dim);
    CHECK(tr.ranks.back() == tr.v_dim);
  }

  SECTION("guards") {
    CHECK_THROWS_AS(
        regularity_demo(ops, bgl.V, {{0.4, 0.0}}, Eigen::VectorXd(), 1e-5),
        Error);
    Eigen::VectorXd bad(1);
    bad << -1.0;
    CHECK_THROWS_AS(regularity_demo(ops, bgl.V, {{0.4, 0.0}}, bad, 1e-5),
                    Error);
  }
}

TEST_CASE("line-grid generator diagnostics") {
  const GridOperatorSet aff = build_aff_rep(128, 8.0);

  SECTION("interior eigenvectors spread across the grid") {
    const SpreadReport rep = shift_generator_spread(aff);
    CHECK(rep.interior_count > 128 / 3);
    CHECK(rep.max_node_mass < 0.05);
  }

  SECTION("node-ratio conjugation of the multiplier weight is exact") {
    CHECK(scaling_conjugation_defect(aff, 3 * aff.grid.du) < 1e-12);
    CHECK(scaling_conjugation_defect(aff, -5 * aff.grid.du) < 1e-12);
  }

  SECTION("multiplier generator is the realified position weight") {
    const Eigen::MatrixXd X = position_phase_generator(aff);
    CHECK((X + X.transpose()).norm() < 1e-12 * (1.0 + X.norm()));
    // exp of the generator at parameter s reproduces the phase operator
    const Eigen::VectorXcd probe = midspan_probe(aff, 1.0);
    const Eigen::VectorXd q = embed_samples(aff, probe);
    const double s = 1e-3;
    const Eigen::VectorXd lin = q + s * (X * q);
    const Eigen::VectorXd exact = phase_op(aff, s).matrix * q;
    CHECK((lin - exact).norm() < 5e-3 * q.norm());
  }
}
