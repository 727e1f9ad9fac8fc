#include <eulerwedge/nets.hpp>

#include <cmath>
#include <random>

namespace ew {

namespace {

bool same_isometry(const IsometryElement& a, const IsometryElement& b,
                   double tol) {
  if (a.lorentz.rows() != b.lorentz.rows()) return false;
  return (a.lorentz - b.lorentz).norm() <= tol * a.lorentz.rows() &&
         (a.translation - b.translation).norm() <=
             tol * std::max(1.0, a.translation.norm());
}

SpacetimePoint sample_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                          std::mt19937& rng) {
  SpacetimePoint x(lo.size());
  for (int i = 0; i < lo.size(); ++i) {
    std::uniform_real_distribution<double> u(lo(i), hi(i));
    x(i) = u(rng);
  }
  return x;
}

// Direct sample of the base wedge: x_1 > |x_0|, other coordinates free.
SpacetimePoint sample_wedge_point(int dim, double radius, std::mt19937& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  SpacetimePoint x(dim + 1);
  x(1) = radius * std::max(u01(rng), 1e-3);
  x(0) = 0.999 * sym(rng) * x(1);
  for (int i = 2; i <= dim; ++i) x(i) = radius * sym(rng);
  return x;
}

bool point_in_wedge_of(const IsometryElement& g, const SpacetimePoint& x) {
  return in_wedge_WR(apply_isometry(inverse_isometry(g), x));
}

// Exact inclusion a.W in b.W via the compression semigroup, when the
// composite stays in the identity component.
std::optional<bool> exact_wedge_inclusion(const IsometryElement& a,
                                          const IsometryElement& b, int dim,
                                          double tol) {
  const IsometryElement rel = compose_isometry(inverse_isometry(b), a);
  if (!rel.orthochronous || !rel.proper) return std::nullopt;
  return compression_member_poincare(rel, dim, tol);
}

}  // namespace

NetConfig make_net_config(const ComplexSpace& space, const RealSubspace& V,
                          std::vector<FamilyElement> family, double tol) {
  if (family.empty())
    throw Error(Err::PreconditionViolated, "family must not be empty");
  NetConfig cfg;
  cfg.space = space;
  cfg.V = V;
  cfg.tol = tol;
  cfg.spacetime_dim = static_cast<int>(family.front().motion.lorentz.rows()) - 1;
  if (cfg.spacetime_dim < 1)
    throw Error(Err::DimensionMismatch, "need at least two coordinates");
  if (!is_standard(space, V, NumCtx{tol, nullptr}))
    throw Error(Err::NotStandard, "base subspace is not standard");

  for (const auto& el : family) {
    if (el.motion.lorentz.rows() != cfg.spacetime_dim + 1)
      throw Error(Err::DimensionMismatch, "family members of unequal size");
    make_antiunitary(space, el.op.matrix, el.op.parity);
  }

  // Multiplicativity on the listed window: whenever a product of two listed
  // motions is listed again, the operators must compose the same way.
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j) {
      const IsometryElement prod =
          compose_isometry(family[i].motion, family[j].motion);
      for (std::size_t k = 0; k < family.size(); ++k) {
        if (!same_isometry(prod, family[k].motion, tol)) continue;
        const Eigen::MatrixXd got = family[i].op.matrix * family[j].op.matrix;
        if ((got - family[k].op.matrix).norm() > 1e-8 * 2 * space.n ||
            family[i].op.parity * family[j].op.parity != family[k].op.parity)
          throw Error(Err::InvariantViolation,
                      "representation is not multiplicative on the family");
      }
    }

  // The base wedge must be invariant under the boost flow.
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 64; ++trial) {
    const SpacetimePoint x =
        sample_wedge_point(cfg.spacetime_dim, 3.0, rng);
    for (double t : {-1.0, 0.5}) {
      Eigen::MatrixXd boost = Eigen::MatrixXd::Identity(
          cfg.spacetime_dim + 1, cfg.spacetime_dim + 1);
      boost(0, 0) = std::cosh(t);
      boost(0, 1) = std::sinh(t);
      boost(1, 0) = std::sinh(t);
      boost(1, 1) = std::cosh(t);
      if (!in_wedge_WR(boost * x))
        throw Error(Err::InvariantViolation,
                    "base wedge is not flow invariant");
    }
  }

  cfg.family = std::move(family);
  return cfg;
}

Region make_region(std::function<bool(const SpacetimePoint&)> contains,
                   Eigen::VectorXd box_lo, Eigen::VectorXd box_hi) {
  if (box_lo.size() != box_hi.size() || box_lo.size() < 2)
    throw Error(Err::DimensionMismatch, "sampling box shape");
  for (int i = 0; i < box_lo.size(); ++i)
    if (!(box_lo(i) < box_hi(i)))
      throw Error(Err::InvariantViolation, "empty sampling box");
  return Region{std::move(contains), std::move(box_lo), std::move(box_hi),
                std::nullopt};
}

Region wedge_region(const NetConfig& cfg, const IsometryElement& g,
                    double radius) {
  const int n = cfg.spacetime_dim + 1;
  if (g.lorentz.rows() != n)
    throw Error(Err::DimensionMismatch, "isometry size vs configuration");
  Region r = make_region(
      [g](const SpacetimePoint& x) { return point_in_wedge_of(g, x); },
      Eigen::VectorXd::Constant(n, -radius),
      Eigen::VectorXd::Constant(n, radius));
  r.as_wedge = g;
  return r;
}

bool region_in_wedge(const NetConfig& cfg, const Region& O,
                     const IsometryElement& g, int samples, unsigned seed) {
  if (samples < 1) throw Error(Err::InvariantViolation, "need samples >= 1");
  if (O.as_wedge) {
    const auto exact =
        exact_wedge_inclusion(*O.as_wedge, g, cfg.spacetime_dim, cfg.tol);
    if (exact) return *exact;
  }
  std::mt19937 rng(seed + 0x5157u);
  int hits = 0;
  for (int trial = 0; trial < 64 * samples && hits < samples; ++trial) {
    const SpacetimePoint x = sample_box(O.box_lo, O.box_hi, rng);
    if (!O.contains(x)) continue;
    ++hits;
    if (!point_in_wedge_of(g, x)) return false;
  }
  if (hits < std::min(samples, 32))
    throw Error(Err::AmbiguousInclusion,
                "region sampler cannot certify the inclusion");
  return true;
}

bool wedge_in_region(const NetConfig& cfg, const IsometryElement& g,
                     const Region& O, int samples, unsigned seed) {
  if (samples < 1) throw Error(Err::InvariantViolation, "need samples >= 1");
  if (O.as_wedge) {
    const auto exact =
        exact_wedge_inclusion(g, *O.as_wedge, cfg.spacetime_dim, cfg.tol);
    if (exact) return *exact;
  }
  // Wedge points are generated directly (several scales, so that large
  // regions cannot hide an escape at radii the box would miss).
  std::mt19937 rng(seed + 0x3361u);
  for (double radius : {0.5, 2.0, 8.0}) {
    for (int trial = 0; trial < samples; ++trial) {
      const SpacetimePoint x =
          sample_wedge_point(cfg.spacetime_dim, radius, rng);
      if (!O.contains(apply_isometry(g, x))) return false;
    }
  }
  return true;
}

RealSubspace h_max(const NetConfig& cfg, const Region& O, int samples,
                   unsigned seed) {
  std::vector<AntiUnitaryOp> qualifying;
  for (const auto& el : cfg.family)
    if (region_in_wedge(cfg, O, el.motion, samples, seed))
      qualifying.push_back(el.op);
  return intersect_family(cfg.space, cfg.V, qualifying, NumCtx{cfg.tol, nullptr});
}

RealSubspace h_min(const NetConfig& cfg, const Region& O, int samples,
                   unsigned seed) {
  std::vector<Eigen::MatrixXd> images;
  for (const auto& el : cfg.family)
    if (wedge_in_region(cfg, el.motion, O, samples, seed))
      images.push_back(el.op.matrix * cfg.V.span_matrix);
  const NumCtx ctx{cfg.tol, nullptr};
  return RealSubspace{
      canonical_span(hcat(images, 2 * cfg.space.n), ctx)};
}

Region hull_region(const NetConfig& cfg, const Region& O, int samples,
                   unsigned seed) {
  std::vector<IsometryElement> covers;
  for (const auto& el : cfg.family)
    if (region_in_wedge(cfg, O, el.motion, samples, seed))
      covers.push_back(el.motion);
  // Grow the sampling box: the hull contains O and can stick out of its box.
  const Eigen::VectorXd mid = 0.5 * (O.box_lo + O.box_hi);
  const Eigen::VectorXd half = 0.5 * (O.box_hi - O.box_lo);
  return make_region(
      [covers](const SpacetimePoint& x) {
        for (const auto& g : covers)
          if (!point_in_wedge_of(g, x)) return false;
        return true;  // no covering wedge: the hull is the whole space
      },
      mid - 3.0 * half, mid + 3.0 * half);
}

DirectNetReport direct_net_report(const NetConfig& cfg, int samples,
                                  unsigned seed) {
  DirectNetReport rep;
  const NumCtx ctx{cfg.tol, nullptr};

  rep.compressors_fix_v = true;
  for (std::size_t i = 0; i < cfg.family.size(); ++i) {
    const auto& el = cfg.family[i];
    if (!el.motion.orthochronous || !el.motion.proper) continue;
    if (!compression_member_poincare(el.motion, cfg.spacetime_dim, cfg.tol))
      continue;
    if (!span_contains(cfg.V.span_matrix,
                       (el.op.matrix * cfg.V.span_matrix).eval(), cfg.tol)) {
      rep.compressors_fix_v = false;
      if (!rep.violating_index) rep.violating_index = static_cast<int>(i);
    }
  }

  const IsometryElement id = make_isometry(
      Eigen::MatrixXd::Identity(cfg.spacetime_dim + 1, cfg.spacetime_dim + 1),
      Eigen::VectorXd::Zero(cfg.spacetime_dim + 1));
  const Region base = wedge_region(cfg, id);

  const RealSubspace hmax = h_max(cfg, base, samples, seed);
  rep.hmax_equals_v = spans_equal(hmax.span_matrix, cfg.V.span_matrix, cfg.tol);
  rep.hmax_standard = is_standard(cfg.space, hmax, ctx);
  rep.hmax_cyclic = is_cyclic(cfg.space, hmax, ctx);

  const RealSubspace hmin = h_min(cfg, base, samples, seed);
  rep.hmin_equals_v = spans_equal(hmin.span_matrix, cfg.V.span_matrix, cfg.tol);
  rep.hmin_standard = is_standard(cfg.space, hmin, ctx);
  rep.hmin_separating = is_separating(cfg.space, hmin, ctx);

  const bool all = rep.compressors_fix_v && rep.hmax_equals_v &&
                   rep.hmax_standard && rep.hmax_cyclic && rep.hmin_equals_v &&
                   rep.hmin_standard && rep.hmin_separating;
  const bool none = !rep.compressors_fix_v && !rep.hmax_equals_v &&
                    !rep.hmax_standard && !rep.hmax_cyclic &&
                    !rep.hmin_equals_v && !rep.hmin_standard &&
                    !rep.hmin_separating;
  rep.consistent = all || none;
  return rep;
}

bool sandwich_check(const NetConfig& cfg,
                    const std::function<RealSubspace(const Region&)>& net,
                    const std::vector<Region>& probes, int samples,
                    unsigned seed) {
  const IsometryElement id = make_isometry(
      Eigen::MatrixXd::Identity(cfg.spacetime_dim + 1, cfg.spacetime_dim + 1),
      Eigen::VectorXd::Zero(cfg.spacetime_dim + 1));
  const Region base = wedge_region(cfg, id);

  const RealSubspace at_base = net(base);
  if (!spans_equal(at_base.span_matrix, cfg.V.span_matrix, cfg.tol))
    throw Error(Err::PreconditionViolated,
                "base wedge value: the net does not assign V to the wedge");

  std::vector<IsometryElement> motions{id};
  std::vector<Eigen::MatrixXd> values{at_base.span_matrix};
  for (const auto& el : cfg.family) {
    const Region r = wedge_region(cfg, el.motion);
    const RealSubspace h = net(r);
    if (!spans_equal(h.span_matrix,
                     (el.op.matrix * cfg.V.span_matrix).eval(), cfg.tol))
      throw Error(Err::PreconditionViolated,
                  "covariance: net value on a translated wedge is not the "
                  "translated value");
    motions.push_back(el.motion);
    values.push_back(h.span_matrix);
  }

  for (std::size_t i = 0; i < motions.size(); ++i)
    for (std::size_t j = 0; j < motions.size(); ++j) {
      if (i == j) continue;
      const auto inc = exact_wedge_inclusion(motions[i], motions[j],
                                             cfg.spacetime_dim, cfg.tol);
      if (!inc || !*inc) continue;
      if (!span_contains(values[j], values[i], cfg.tol))
        throw Error(Err::PreconditionViolated,
                    "isotony: smaller wedge carries a larger subspace");
    }

  for (const auto& O : probes) {
    const RealSubspace lo = h_min(cfg, O, samples, seed);
    const RealSubspace hi = h_max(cfg, O, samples, seed);
    const RealSubspace mid = net(O);
    if (!span_contains(mid.span_matrix, lo.span_matrix, cfg.tol) ||
        !span_contains(hi.span_matrix, mid.span_matrix, cfg.tol))
      return false;
  }
  return true;
}

RegularityProbe regularity_probe(const ComplexSpace& space,
                                 const RealSubspace& V,
                                 const std::vector<AntiUnitaryOp>& ops,
                                 double tol) {
  const NumCtx ctx{tol, nullptr};
  const RealSubspace vn = intersect_family(space, V, ops, ctx);
  RegularityProbe probe;
  probe.cyclic_rank = numeric_rank(
      hcat({vn.span_matrix, space.I * vn.span_matrix}, 2 * space.n), ctx);
  probe.regular = probe.cyclic_rank == 2 * space.n;
  return probe;
}

DegeneracyReport degeneracy_report(const ComplexSpace& space,
                                   const RealSubspace& V,
                                   const std::vector<AntiUnitaryOp>& ops,
                                   const NumCtx& ctx) {
  DegeneracyReport rep;
  rep.V_G = intersect_family(space, V, ops, ctx);

  const RealSubspace vp = symplectic_complement(space, V, ctx);
  const int n2 = 2 * space.n;
  Eigen::MatrixXd stack(2 * n2, n2);
  stack.topRows(n2) = Eigen::MatrixXd::Identity(n2, n2) -
                      V.span_matrix * V.span_matrix.transpose();
  stack.bottomRows(n2) = Eigen::MatrixXd::Identity(n2, n2) -
                         vp.span_matrix * vp.span_matrix.transpose();
  rep.V_cap_Vprime = RealSubspace{canonical_span(null_space(stack, ctx), ctx)};

  rep.equal = spans_equal(rep.V_G.span_matrix, rep.V_cap_Vprime.span_matrix,
                          ctx.tol);
  return rep;
}

}  // namespace ew
