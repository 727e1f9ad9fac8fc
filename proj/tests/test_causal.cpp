#include <catch2/catch_amalgamated.hpp>

#include <eulerwedge/causal.hpp>
#include <eulerwedge/wedgespace.hpp>

#include <cmath>
#include <random>

using namespace ew;

namespace {

SpacetimePoint pt(std::initializer_list<double> xs) {
  SpacetimePoint p(static_cast<int>(xs.size()));
  int i = 0;
  for (double v : xs) p(i++) = v;
  return p;
}

Eigen::MatrixXd boost01(int n, double t) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  m(0, 0) = std::cosh(t);
  m(0, 1) = std::sinh(t);
  m(1, 0) = std::sinh(t);
  m(1, 1) = std::cosh(t);
  return m;
}

Eigen::MatrixXd rotation(int n, int i, int j, double t) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  m(i, i) = std::cos(t);
  m(j, j) = std::cos(t);
  m(i, j) = -std::sin(t);
  m(j, i) = std::sin(t);
  return m;
}

IsometryElement translation_only(const SpacetimePoint& a) {
  return make_isometry(
      Eigen::MatrixXd::Identity(a.size(), a.size()), a);
}

SpacetimePoint flip01(const SpacetimePoint& m) {
  SpacetimePoint out = m;
  out(0) = -m(0);
  out(1) = -m(1);
  return out;
}

}  // namespace

TEST_CASE("right wedge membership") {
  CHECK(in_wedge_WR(pt({0, 1, 0, 0})));
  CHECK_FALSE(in_wedge_WR(pt({2, 1, 0, 0})));
  CHECK(in_wedge_WR(pt({0.5, 0.6})));
  CHECK_FALSE(in_wedge_WR(pt({1, 1})));  // boundary is excluded
  CHECK_FALSE(in_wedge_WR(pt({0, -1, 0, 0})));
  CHECK_THROWS_AS(in_wedge_WR(pt({1})), Error);
}

TEST_CASE("boost vector field") {
  CHECK((modular_vector_field(ModularKind::boost_01, pt({0, 1, 0, 0})) -
         pt({1, 0, 0, 0}))
            .norm() == 0.0);
  CHECK(modular_vector_field(ModularKind::boost_01, pt({0, 0, 1, 0})).norm() ==
        0.0);
  CHECK((modular_vector_field(ModularKind::boost_01, pt({1, 0, 0, 0})) -
         pt({0, 1, 0, 0}))
            .norm() == 0.0);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> box(-4.0, 4.0);
  for (int k = 0; k < 50; ++k) {
    SpacetimePoint m(4), m2(4);
    for (int i = 0; i < 4; ++i) {
      m(i) = box(rng);
      m2(i) = box(rng);
    }
    const Eigen::VectorXd sum =
        modular_vector_field(ModularKind::boost_01, m + 2.0 * m2);
    const Eigen::VectorXd parts =
        modular_vector_field(ModularKind::boost_01, m) +
        2.0 * modular_vector_field(ModularKind::boost_01, m2);
    CHECK((sum - parts).norm() < 1e-12);
  }
}

TEST_CASE("isometry validation and flags") {
  const IsometryElement b = make_isometry(boost01(4, 0.7), pt({0, 0, 0, 0}));
  CHECK(b.orthochronous);
  CHECK(b.proper);

  const IsometryElement r =
      make_isometry(rotation(4, 2, 3, 0.4), pt({1, 2, 3, 4}));
  CHECK(r.orthochronous);
  CHECK(r.proper);

  Eigen::MatrixXd pt01 = Eigen::MatrixXd::Identity(4, 4);
  pt01(0, 0) = -1.0;
  pt01(1, 1) = -1.0;
  const IsometryElement rev = make_isometry(pt01, pt({0, 0, 0, 0}));
  CHECK_FALSE(rev.orthochronous);
  CHECK(rev.proper);

  Eigen::MatrixXd refl = Eigen::MatrixXd::Identity(4, 4);
  refl(1, 1) = -1.0;
  const IsometryElement mirror = make_isometry(refl, pt({0, 0, 0, 0}));
  CHECK(mirror.orthochronous);
  CHECK_FALSE(mirror.proper);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(4, 4);
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(make_isometry(bad, pt({0, 0, 0, 0})), Error);

  const SpacetimePoint x = pt({0.2, 1.4, -0.3, 0.8});
  CHECK((apply_isometry(b, x) - boost01(4, 0.7) * x).norm() == 0.0);
  CHECK((apply_isometry(r, x) - (rotation(4, 2, 3, 0.4) * x + pt({1, 2, 3, 4})))
            .norm() == 0.0);
}

TEST_CASE("hyperboloid sampling") {
  const auto pts = sample_de_sitter(3, 200, 5);
  REQUIRE(pts.size() == 200);
  for (const auto& m : pts) {
    CHECK(on_manifold(Space::DeSitter, m));
    CHECK(std::abs(m.tail(3).squaredNorm() - m(0) * m(0) - 1.0) < 1e-12);
  }
  const auto again = sample_de_sitter(3, 200, 5);
  CHECK((pts[7] - again[7]).norm() == 0.0);
  const auto other = sample_de_sitter(3, 200, 6);
  CHECK((pts[7] - other[7]).norm() > 0.0);

  CHECK(on_manifold(Space::Minkowski, pt({9, 9, 9, 9})));
  CHECK_FALSE(on_manifold(Space::DeSitter, pt({0, 2, 0, 0})));
}

TEST_CASE("positivity region membership") {
  CHECK(positivity_region_member(Space::DeSitter, pt({0, 1, 0, 0})));
  CHECK_FALSE(positivity_region_member(Space::DeSitter, pt({0, -1, 0, 0})));
  CHECK_FALSE(positivity_region_member(Space::Minkowski, pt({0, 0, 1, 0})));
  CHECK_THROWS_AS(positivity_region_member(Space::DeSitter, pt({0, 2, 0, 0})),
                  Error);

  SECTION("on Minkowski space the region is the right wedge") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> box(-3.0, 3.0);
    for (int k = 0; k < 300; ++k) {
      SpacetimePoint m(4);
      for (int i = 0; i < 4; ++i) m(i) = box(rng);
      CHECK(positivity_region_member(Space::Minkowski, m) == in_wedge_WR(m));
    }
  }

  SECTION("field is tangent to the hyperboloid") {
    for (const auto& m : sample_de_sitter(3, 400, 2)) {
      const Eigen::VectorXd x =
          modular_vector_field(ModularKind::boost_01, m);
      CHECK(std::abs(minkowski_inner(x, m)) <=
            1e-10 * std::max(1.0, m.squaredNorm()));
    }
  }

  SECTION("timelike locus splits into two signature classes") {
    int future = 0;
    int past = 0;
    for (const auto& m : sample_de_sitter(3, 2000, 9)) {
      const Eigen::VectorXd x =
          modular_vector_field(ModularKind::boost_01, m);
      if (minkowski_inner(x, x) <= 1e-9) continue;  // not timelike
      const bool member = positivity_region_member(Space::DeSitter, m);
      const bool member_flipped =
          positivity_region_member(Space::DeSitter, flip01(m));
      if (m(1) > 0) {
        ++future;
        CHECK(member);
        CHECK_FALSE(member_flipped);
      } else {
        ++past;
        CHECK_FALSE(member);
        CHECK(member_flipped);
      }
    }
    CHECK(future > 100);
    CHECK(past > 100);
  }
}

TEST_CASE("de Sitter wedge region") {
  CHECK(wedge_region_dS_member(pt({0, 1, 0, 0})));
  CHECK_FALSE(wedge_region_dS_member(pt({0, -1, 0, 0})));

  const double x1 = std::sqrt(1.0 + 0.3 * 0.3);
  CHECK(wedge_region_dS_member(pt({0.3, x1, 0, 0})));
  CHECK_THROWS_AS(wedge_region_dS_member(pt({0.3, 1.5, 0, 0})), Error);

  SECTION("agrees with the positivity region") {
    for (const auto& m : sample_de_sitter(3, 500, 21))
      CHECK(wedge_region_dS_member(m) ==
            positivity_region_member(Space::DeSitter, m));
  }
}

TEST_CASE("boost flow preserves the wedge exactly") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  for (double t : {-2.0, -0.5, 0.0, 0.7, 1.9}) {
    const IsometryElement g = make_isometry(boost01(4, t), pt({0, 0, 0, 0}));
    for (int k = 0; k < 200; ++k) {
      SpacetimePoint m(4);
      m(1) = 4.0 * unit(rng) + 1e-9;
      m(0) = 0.999 * sym(rng) * m(1);
      m(2) = 4.0 * sym(rng);
      m(3) = 4.0 * sym(rng);
      CHECK(in_wedge_WR(apply_isometry(g, m)));
      // complements map to complements: the flow is a wedge bijection
      SpacetimePoint out = m;
      out(1) = -m(1);
      CHECK_FALSE(in_wedge_WR(apply_isometry(g, out)));
    }
  }
}

TEST_CASE("compression semigroup membership") {
  const Eigen::MatrixXd id4 = Eigen::MatrixXd::Identity(4, 4);

  CHECK(compression_member_poincare(translation_only(pt({0, 1, 0, 0})), 3));
  CHECK(compression_member_poincare(
      make_isometry(boost01(4, 1.3), pt({0, 0, 0, 0})), 3));
  CHECK_FALSE(compression_member_poincare(
      make_isometry(rotation(4, 1, 2, 0.4), pt({0, 0, 0, 0})), 3));
  CHECK_FALSE(compression_member_poincare(translation_only(pt({1, 0, 0, 0})), 3));
  CHECK(compression_member_poincare(translation_only(pt({1, 1, 0, 0})), 3));
  CHECK(compression_member_poincare(
      make_isometry(rotation(4, 2, 3, 2.1), pt({0, 2, -3, 1})), 3));
  CHECK_FALSE(compression_member_poincare(translation_only(pt({0, -1, 0, 0})), 3));

  Eigen::MatrixXd pt01 = id4;
  pt01(0, 0) = -1.0;
  pt01(1, 1) = -1.0;
  CHECK_THROWS_AS(compression_member_poincare(
                      make_isometry(pt01, pt({0, 0, 0, 0})), 3),
                  Error);
  Eigen::MatrixXd refl = id4;
  refl(2, 2) = -1.0;
  CHECK_THROWS_AS(compression_member_poincare(
                      make_isometry(refl, pt({0, 0, 0, 0})), 3),
                  Error);
}

TEST_CASE("sampled compression check") {
  const auto wedge = [](const SpacetimePoint& x) { return in_wedge_WR(x); };

  const IsometryElement nudge = translation_only(pt({0, 0.1, 0, 0}));
  const CompressionCheck ok = sampled_compression_check(nudge, wedge, 10000, 0);
  CHECK(ok.consistent);
  CHECK_FALSE(ok.witness.has_value());

  const IsometryElement timewards = translation_only(pt({1, 0, 0, 0}));
  const CompressionCheck bad =
      sampled_compression_check(timewards, wedge, 10000, 0);
  CHECK_FALSE(bad.consistent);
  REQUIRE(bad.witness.has_value());
  CHECK(wedge(*bad.witness));
  CHECK_FALSE(wedge(apply_isometry(timewards, *bad.witness)));

  const IsometryElement id =
      translation_only(pt({0, 0, 0, 0}));
  CHECK(sampled_compression_check(id, wedge, 100, 0).consistent);

  CHECK_THROWS_AS(
      sampled_compression_check(id, [](const SpacetimePoint&) { return false; },
                                10, 0),
      Error);
  CHECK_THROWS_AS(sampled_compression_check(id, wedge, 0, 0), Error);
}

TEST_CASE("exact and sampled verdicts agree") {
  const auto wedge = [](const SpacetimePoint& x) { return in_wedge_WR(x); };
  std::vector<IsometryElement> elems;
  elems.push_back(translation_only(pt({0, 1, 0, 0})));
  elems.push_back(translation_only(pt({0.5, 1, 2, -1})));
  elems.push_back(make_isometry(boost01(4, -0.8), pt({0, 0, 0, 0})));
  elems.push_back(make_isometry(rotation(4, 2, 3, 0.9), pt({0, 0.3, 0, 0})));
  elems.push_back(translation_only(pt({1, 0.2, 0, 0})));
  elems.push_back(make_isometry(rotation(4, 1, 3, 0.2), pt({0, 0, 0, 0})));

  for (const auto& g : elems) {
    const bool exact = compression_member_poincare(g, 3);
    const CompressionCheck mc = sampled_compression_check(g, wedge, 4000, 1);
    if (exact) CHECK(mc.consistent);
    if (!mc.consistent) CHECK_FALSE(exact);
  }
}

TEST_CASE("matrix-level and adjoint-level compressions agree") {
  const WedgeOrderConfig cfg = poincare_wedge_config(4);
  const LieAlgebra& L = cfg.algebra;
  const EulerCouple W = standard_couple(L, Eigen::VectorXd::Unit(10, 4));

  const auto lift = [&](const IsometryElement& g) {
    Eigen::MatrixXd big = Eigen::MatrixXd::Identity(5, 5);
    big.topLeftCorner(4, 4) = g.lorentz;
    big.col(4).head(4) = g.translation;
    const Eigen::MatrixXd big_inv = big.inverse();
    Eigen::MatrixXd m(10, 10);
    for (int k = 0; k < 10; ++k)
      m.col(k) = matrix_coordinates(L, big * L.matrix_basis[k] * big_inv);
    return make_graded_element(L, m, +1);
  };

  std::vector<IsometryElement> elems;
  elems.push_back(translation_only(pt({0, 1, 0, 0})));
  elems.push_back(translation_only(pt({1, 0, 0, 0})));
  elems.push_back(make_isometry(boost01(4, 0.6), pt({0.1, 0.4, 1, 2})));
  elems.push_back(make_isometry(rotation(4, 2, 3, 1.1), pt({0, 0, 0, 0})));
  elems.push_back(make_isometry(rotation(4, 1, 2, 0.5), pt({0, 0, 0, 0})));
  elems.push_back(translation_only(pt({-0.7, 0.7, 3, -3})));

  for (const auto& g : elems) {
    const bool exact = compression_member_poincare(g, 3);
    const SemigroupVerdict v = semigroup_member(cfg, W, lift(g));
    CHECK(exact == (v == SemigroupVerdict::In));
  }
}
