#include <catch2/catch_amalgamated.hpp>

#include <eulerwedge/numeric.hpp>
#include <eulerwedge/wedgespace.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

using namespace ew;

namespace {

Eigen::VectorXd vec3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

// Discretized invariant cone of sl(2): rays of the boundary circle.
PolyhedralCone sl2_round_cone(int rays) {
  std::vector<Eigen::VectorXd> gens;
  for (int k = 0; k < rays; ++k) {
    const double t = 2.0 * M_PI * k / rays;
    gens.push_back(vec3(std::sin(t), 1.0 + std::cos(t), -(1.0 - std::cos(t))));
  }
  return make_cone(3, std::move(gens));
}

// Boundary ray of the cone attached to the half-line point x >= 0; the ray
// coordinates are (-x, x^2, -1) up to positive scale.
Eigen::VectorXd halfline_ray(double x) {
  return vec3(-x, x * x, -1.0).normalized();
}

WedgeOrderConfig sl2_wedge_config(bool with_realization) {
  WedgeOrderConfig cfg;
  cfg.algebra = build_algebra("sl(2)");
  cfg.invariant_cone = sl2_round_cone(64);
  cfg.cone_flow_tol = 2e-2;  // discretization gap of the 64-ray hull
  cfg.stabilizer_test = [](const GradedGroupElement& g) {
    Eigen::VectorXd h = vec3(0.5, 0.0, 0.0);
    if ((g.matrix * h - h).norm() > 1e-7) return false;
    const Eigen::VectorXd ge = g.matrix * vec3(0.0, 1.0, 0.0);
    return std::abs(ge(0)) < 1e-7 && std::abs(ge(2)) < 1e-7 && ge(1) > 0.0;
  };
  if (with_realization) {
    GeometricRealization real;
    real.sample_wedge = [](unsigned seed, int n) {
      std::mt19937 rng(seed);
      std::uniform_real_distribution<double> unit(0.0, 10.0);
      std::vector<Eigen::VectorXd> pts;
      pts.push_back(halfline_ray(0.0));
      pts.push_back(vec3(0.0, 1.0, 0.0));  // the point at infinity
      for (int i = 2; i < n; ++i) pts.push_back(halfline_ray(unit(rng)));
      return pts;
    };
    real.in_closed_wedge = [](const Eigen::VectorXd& w) {
      if (std::abs(w(2)) <= 1e-7 * w.norm()) return true;
      return w(0) / w(2) >= -1e-7;
    };
    real.act = [](const GradedGroupElement& g, const Eigen::VectorXd& x) {
      return Eigen::VectorXd(g.matrix * x);
    };
    cfg.realization = real;
  }
  return cfg;
}

// Adjoint-level Poincaré element from a Lorentz matrix and a translation,
// computed by conjugating the affine matrix basis.
GradedGroupElement poincare_element(const LieAlgebra& L,
                                    const Eigen::MatrixXd& lorentz,
                                    const Eigen::VectorXd& a) {
  const int d = static_cast<int>(lorentz.rows());
  Eigen::MatrixXd big = Eigen::MatrixXd::Identity(d + 1, d + 1);
  big.topLeftCorner(d, d) = lorentz;
  big.col(d).head(d) = a;
  const Eigen::MatrixXd big_inv = big.inverse();
  Eigen::MatrixXd m(L.dim, L.dim);
  for (int k = 0; k < L.dim; ++k)
    m.col(k) = matrix_coordinates(L, big * L.matrix_basis[k] * big_inv);
  return make_graded_element(L, m, +1);
}

Eigen::MatrixXd boost01(int d, double t) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
  m(0, 0) = std::cosh(t);
  m(0, 1) = std::sinh(t);
  m(1, 0) = std::sinh(t);
  m(1, 1) = std::cosh(t);
  return m;
}

Eigen::MatrixXd rotation(int d, int i, int j, double t) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
  m(i, i) = std::cos(t);
  m(j, j) = std::cos(t);
  m(i, j) = -std::sin(t);
  m(j, i) = std::sin(t);
  return m;
}

Eigen::VectorXd unit_vec(int n, int i, double s = 1.0) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v(i) = s;
  return v;
}

}  // namespace

TEST_CASE("graded element validation and composition") {
  const LieAlgebra L = build_algebra("sl(2)");
  const GradedGroupElement g = exp_ad(L, vec3(0.2, 0.7, -0.4));
  CHECK(g.parity == +1);

  const GradedGroupElement gg =
      make_graded_element(L, g.matrix, +1);  // revalidates
  CHECK(gg.matrix.isApprox(g.matrix));

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(0, 1) = 0.3;  // shear is not a bracket automorphism
  CHECK_THROWS_AS(make_graded_element(L, bad, +1), Error);
  CHECK_THROWS_AS(
      make_graded_element(L, Eigen::MatrixXd::Identity(3, 3), 0), Error);

  const GradedGroupElement h = exp_ad(L, vec3(-0.1, 0.3, 0.5));
  const GradedGroupElement prod = compose(g, h);
  CHECK(prod.matrix.isApprox(g.matrix * h.matrix, 1e-12));
  const GradedGroupElement back = compose(inverse(g), prod);
  CHECK((back.matrix - h.matrix).norm() < 1e-10);
  CHECK(back.parity == +1);
}

TEST_CASE("twisted adjoint") {
  const LieAlgebra L = build_algebra("so(1,2)");
  const Eigen::VectorXd h = unit_vec(3, 0);  // the 01 boost generator

  const GradedGroupElement even{Eigen::MatrixXd::Identity(3, 3), +1};
  const GradedGroupElement odd{Eigen::MatrixXd::Identity(3, 3), -1};
  CHECK((twisted_adjoint(even, h) - h).norm() == 0.0);
  CHECK((twisted_adjoint(odd, h) + h).norm() == 0.0);

  // A half-turn in the spatial plane reverses the boost axis.
  const GradedGroupElement half_turn = exp_ad(L, unit_vec(3, 2, M_PI));
  CHECK((twisted_adjoint(half_turn, h) + h).norm() < 1e-9);
  CHECK((twisted_adjoint(compose(half_turn, half_turn), h) - h).norm() <
        1e-9);
}

TEST_CASE("couple construction") {
  const LieAlgebra L = build_algebra("sl(2)");
  const Eigen::VectorXd h = vec3(0.5, 0.0, 0.0);

  const EulerCouple W = standard_couple(L, h);
  Eigen::MatrixXd expect = Eigen::VectorXd(vec3(1, -1, -1)).asDiagonal();
  CHECK((W.tau.matrix - expect).norm() < 1e-9);
  CHECK(W.tau.parity == -1);
  CHECK(is_euler_couple(L, W));

  // Correct involution, wrong parity.
  CHECK_THROWS_AS(
      make_couple(L, h, GradedGroupElement{W.tau.matrix, +1}), Error);
  // The grading involution of h does not fix the raising element.
  CHECK_THROWS_AS(make_couple(L, vec3(0, 1, 0), W.tau), Error);

  // A valid couple whose axis is not an Euler element.
  const EulerCouple W2 = make_couple(L, 2.0 * h, W.tau);
  CHECK_FALSE(is_euler_couple(L, W2));
}

TEST_CASE("wedge action and duality") {
  const LieAlgebra L = build_algebra("sl(2)");
  const EulerCouple W = standard_couple(L, vec3(0.5, 0.0, 0.0));

  SECTION("identity and own involution") {
    const GradedGroupElement id{Eigen::MatrixXd::Identity(3, 3), +1};
    const EulerCouple fixed = act_on_wedge(L, id, W);
    CHECK((fixed.h - W.h).norm() == 0.0);
    CHECK(fixed.tau.matrix.isApprox(W.tau.matrix));

    const EulerCouple flipped = act_on_wedge(L, W.tau, W);
    const EulerCouple dual = dual_wedge(L, W);
    CHECK((flipped.h - dual.h).norm() < 1e-12);
    CHECK(flipped.tau.matrix.isApprox(dual.tau.matrix, 1e-12));
    CHECK((dual.h + W.h).norm() == 0.0);

    const EulerCouple twice = dual_wedge(L, dual);
    CHECK((twice.h - W.h).norm() == 0.0);
  }

  SECTION("modular flow fixes its own wedge") {
    const EulerCouple moved = act_on_wedge(L, exp_ad(L, 1.3 * W.h), W);
    CHECK((moved.h - W.h).norm() < 1e-9);
    CHECK((moved.tau.matrix - W.tau.matrix).norm() < 1e-9);
  }

  SECTION("action law and duality equivariance") {
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss(0.0, 0.5);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd x(3), y(3);
      for (int i = 0; i < 3; ++i) {
        x(i) = gauss(rng);
        y(i) = gauss(rng);
      }
      const GradedGroupElement g1 = exp_ad(L, x);
      const GradedGroupElement g2 = exp_ad(L, y);

      const EulerCouple lhs = act_on_wedge(L, compose(g1, g2), W);
      const EulerCouple rhs = act_on_wedge(L, g1, act_on_wedge(L, g2, W));
      CHECK((lhs.h - rhs.h).norm() < 1e-9);
      CHECK((lhs.tau.matrix - rhs.tau.matrix).norm() < 1e-9);

      const EulerCouple d1 = dual_wedge(L, act_on_wedge(L, g1, W));
      const EulerCouple d2 = act_on_wedge(L, g1, dual_wedge(L, W));
      CHECK((d1.h - d2.h).norm() < 1e-9);
      CHECK((d1.tau.matrix - d2.tau.matrix).norm() < 1e-9);
    }
  }
}

TEST_CASE("pointedness check and generator reduction") {
  CHECK_NOTHROW(verify_pointed(sl2_round_cone(64)));

  PolyhedralCone line = make_cone(3, {vec3(1, 0, 0), vec3(-1, 0, 0)});
  CHECK_THROWS_AS(verify_pointed(line), Error);

  PolyhedralCone fat =
      make_cone(2, {unit_vec(2, 0), Eigen::VectorXd(Eigen::Vector2d(1, 1)),
                    unit_vec(2, 1),
                    Eigen::VectorXd(Eigen::Vector2d(0.5, 0.5))});
  const PolyhedralCone lean = reduce_generators(fat);
  REQUIRE(lean.generators.size() == 2);
  CHECK(lean.generators[0].isApprox(unit_vec(2, 0)));
  CHECK(lean.generators[1].isApprox(unit_vec(2, 1)));

  // Projections of the 64 discretization rays are all parallel.
  const LieAlgebra L = build_algebra("sl(2)");
  const auto parts = graded_cone_parts(sl2_round_cone(64), L,
                                       vec3(0.5, 0.0, 0.0), 2e-2, 0, 64);
  CHECK(reduce_generators(parts.plus).generators.size() == 1);
  CHECK(reduce_generators(parts.minus).generators.size() == 1);
}

TEST_CASE("adjoint matrices of isometries decode") {
  const LieAlgebra L = build_algebra("poincare(4)");
  const Eigen::MatrixXd lorentz =
      boost01(4, 0.3) * rotation(4, 2, 3, 0.7);
  Eigen::VectorXd a(4);
  a << 1.0, -2.0, 0.5, 3.0;

  const GradedGroupElement g = poincare_element(L, lorentz, a);
  const auto dec = poincare_decode(L, g.matrix, 4);
  REQUIRE(dec.has_value());
  CHECK((dec->first - lorentz).norm() < 1e-9);
  CHECK((dec->second - a).norm() < 1e-9);

  CHECK_FALSE(
      poincare_decode(L, 2.0 * Eigen::MatrixXd::Identity(10, 10), 4));
}

TEST_CASE("spacetime wedge semigroup is decided exactly") {
  const WedgeOrderConfig cfg = poincare_wedge_config(4);
  const LieAlgebra& L = cfg.algebra;
  REQUIRE(L.dim == 10);
  const EulerCouple W = standard_couple(L, unit_vec(10, 4));  // the 01 boost

  auto member = [&](const GradedGroupElement& g) {
    return semigroup_member(cfg, W, g);
  };

  SECTION("translations") {
    CHECK(member(exp_ad(L, unit_vec(10, 1))) == SemigroupVerdict::In);
    CHECK(member(exp_ad(L, unit_vec(10, 0))) == SemigroupVerdict::Out);
    CHECK(member(exp_ad(L, unit_vec(10, 0) + 1.1 * unit_vec(10, 1))) ==
          SemigroupVerdict::In);
    CHECK(member(exp_ad(L, unit_vec(10, 0) + unit_vec(10, 1))) ==
          SemigroupVerdict::In);  // lightlike edge
    CHECK(member(exp_ad(L, unit_vec(10, 1, -1.0))) == SemigroupVerdict::Out);
    CHECK(member(exp_ad(L, unit_vec(10, 2, 5.0))) ==
          SemigroupVerdict::In);  // transverse shifts stabilize
  }

  SECTION("homogeneous part") {
    CHECK(member(exp_ad(L, unit_vec(10, 4, 0.7))) == SemigroupVerdict::In);
    CHECK(member(poincare_element(L, rotation(4, 2, 3, 0.4),
                                  Eigen::VectorXd::Zero(4))) ==
          SemigroupVerdict::In);
    CHECK(member(poincare_element(L, rotation(4, 1, 2, 0.3),
                                  Eigen::VectorXd::Zero(4))) ==
          SemigroupVerdict::Out);  // tilting the wedge axis
  }

  SECTION("random products stay in the semigroup") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    std::vector<GradedGroupElement> members;
    for (int k = 0; k < 6; ++k) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(10);
      x(1) = 0.5 + unit(rng);
      x(0) = 0.9 * sym(rng) * x(1);
      x(2) = sym(rng);
      x(3) = sym(rng);
      const GradedGroupElement g =
          compose(exp_ad(L, x),
                  compose(exp_ad(L, unit_vec(10, 4, sym(rng))),
                          exp_ad(L, unit_vec(10, 9, sym(rng)))));
      CHECK(member(g) == SemigroupVerdict::In);
      members.push_back(g);
    }
    for (std::size_t i = 0; i + 1 < members.size(); i += 2)
      CHECK(member(compose(members[i], members[i + 1])) ==
            SemigroupVerdict::In);
  }

  SECTION("rejected inputs") {
    GradedGroupElement odd = exp_ad(L, unit_vec(10, 1));
    odd.parity = -1;
    CHECK_THROWS_AS(member(odd), Error);

    const GradedGroupElement junk{Eigen::MatrixXd::Random(10, 10), +1};
    CHECK_THROWS_AS(member(junk), Error);

    Eigen::MatrixXd pt = Eigen::MatrixXd::Identity(4, 4);
    pt(0, 0) = -1.0;
    pt(1, 1) = -1.0;  // proper but time-reversing
    const GradedGroupElement rev =
        poincare_element(L, pt, Eigen::VectorXd::Zero(4));
    CHECK_THROWS_AS(member(rev), Error);
  }
}

TEST_CASE("wedge order on spacetime wedges") {
  const WedgeOrderConfig cfg = poincare_wedge_config(4);
  const LieAlgebra& L = cfg.algebra;
  const EulerCouple W = standard_couple(L, unit_vec(10, 4));
  const GradedGroupElement id{Eigen::MatrixXd::Identity(10, 10), +1};
  const GradedGroupElement shift_in = exp_ad(L, unit_vec(10, 1));

  CHECK(wedge_leq(cfg, W, id, id) == OrderVerdict::Leq);
  CHECK(wedge_leq(cfg, W, shift_in, id) == OrderVerdict::Leq);
  CHECK(wedge_leq(cfg, W, id, shift_in) == OrderVerdict::NotLeq);
  CHECK(wedge_leq(cfg, W, exp_ad(L, unit_vec(10, 0, 0.4)), id) ==
        OrderVerdict::NotLeq);
}

TEST_CASE("certificate search on the projective half-line") {
  const WedgeOrderConfig cfg = sl2_wedge_config(true);
  const LieAlgebra& L = cfg.algebra;
  const EulerCouple W = standard_couple(L, vec3(0.5, 0.0, 0.0));

  const Eigen::VectorXd e = vec3(0, 1, 0);
  const Eigen::VectorXd f = vec3(0, 0, 1);
  const Eigen::VectorXd h = vec3(0.5, 0, 0);

  SECTION("products of the three factors are certified In") {
    const GradedGroupElement g = compose(
        exp_ad(L, 0.5 * e), compose(exp_ad(L, 0.6 * h), exp_ad(L, 0.4 * f)));
    CHECK(semigroup_member(cfg, W, g, 1e-8, 0, 60, 60) ==
          SemigroupVerdict::In);

    CHECK(semigroup_member(cfg, W, exp_ad(L, 0.8 * f), 1e-8, 0, 60, 60) ==
          SemigroupVerdict::In);
  }

  SECTION("stabilizer fast path") {
    CHECK(semigroup_member(cfg, W, exp_ad(L, 0.7 * h), 1e-8, 0, 5, 5) ==
          SemigroupVerdict::In);
  }

  SECTION("backward translation") {
    const GradedGroupElement g = exp_ad(L, -0.5 * e);
    CHECK(semigroup_member(cfg, W, g, 1e-8, 0, 40, 40) ==
          SemigroupVerdict::Unknown);
    CHECK(semigroup_member(cfg, W, g, 1e-8, 0, 40, 40, true) ==
          SemigroupVerdict::Out);

    const WedgeOrderConfig blind = sl2_wedge_config(false);
    CHECK_THROWS_AS(semigroup_member(blind, W, g, 1e-8, 0, 5, 5, true),
                    Error);
  }
}

TEST_CASE("verdict names") {
  CHECK(std::string(to_string(SemigroupVerdict::In)) == "In");
  CHECK(std::string(to_string(SemigroupVerdict::Out)) == "Out");
  CHECK(std::string(to_string(SemigroupVerdict::Unknown)) == "Unknown");
  CHECK(std::string(to_string(OrderVerdict::Leq)) == "True");
  CHECK(std::string(to_string(OrderVerdict::NotLeq)) == "False");
  CHECK(std::string(to_string(OrderVerdict::Unknown)) == "Unknown");
}
