#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include <eulerwedge/errors.hpp>

namespace ew {

// Coordinates (x_0, x_1, ..., x_d) of a point in R^{1,d}.
using SpacetimePoint = Eigen::VectorXd;

// Affine isometry x -> lorentz * x + translation. Flags are derived from
// the matrix by make_isometry and kept consistent with it.
struct IsometryElement {
  Eigen::MatrixXd lorentz;
  Eigen::VectorXd translation;
  bool orthochronous = true;
  bool proper = true;
};

// Validates g^T eta g = eta (eta = diag(1,-1,...,-1)) and derives the flags.
IsometryElement make_isometry(Eigen::MatrixXd lorentz,
                              Eigen::VectorXd translation, double tol = 1e-9);

SpacetimePoint apply_isometry(const IsometryElement& g,
                              const SpacetimePoint& x);

// Group operations; results are re-validated through make_isometry.
IsometryElement compose_isometry(const IsometryElement& a,
                                 const IsometryElement& b);
IsometryElement inverse_isometry(const IsometryElement& g);

// Minkowski inner product x^T eta y.
double minkowski_inner(const SpacetimePoint& x, const SpacetimePoint& y);

// Standard right wedge |x_0| < x_1.
bool in_wedge_WR(const SpacetimePoint& x);

enum class ModularKind { boost_01 };

// Generator field of the (x_0,x_1) boost: m -> (m_1, m_0, 0, ..., 0).
// The closed formula is cross-checked against a central finite difference
// of the matrix flow (step 1e-6, agreement 1e-8); disagreement raises
// NumericalFailure.
Eigen::VectorXd modular_vector_field(ModularKind kind, const SpacetimePoint& m);

enum class Space { Minkowski, DeSitter };

// Minkowski: always true. De Sitter: |x|^2 - x_0^2 = 1 within tol.
bool on_manifold(Space space, const SpacetimePoint& m, double tol = 1e-9);

// Points of dS^d from seeded box rejection on (x_0, x_2, ..., x_d), with a
// random sign for the solved x_1 coordinate.
std::vector<SpacetimePoint> sample_de_sitter(int d, int n, unsigned seed);

// Whether the boost field at m is future timelike: in the open forward cone
// (Minkowski), or in the open forward cone of the tangent space at m
// (de Sitter; tangency is asserted to 1e-10). NotOnManifold when m fails
// the on_manifold test.
bool positivity_region_member(Space space, const SpacetimePoint& m,
                              double tol = 1e-9);

// The de Sitter wedge W_R intersected with dS^d. NotOnManifold off the
// hyperboloid.
bool wedge_region_dS_member(const SpacetimePoint& m, double tol = 1e-9);

// Exact membership of g in the compression semigroup of W_R in R^{1,d}:
// translation part in the closed wedge (|v_0| <= v_1) and Lorentz part a
// (0,1)-boost times a rotation of the remaining spatial coordinates.
// NotProper unless g is orthochronous and proper.
bool compression_member_poincare(const IsometryElement& g, int d,
                                 double tol = 1e-9);

// Outcome of a Monte-Carlo compression test: either every sampled region
// point stays inside under g, or `witness` holds a region point whose
// image escapes.
struct CompressionCheck {
  bool consistent = true;
  std::optional<SpacetimePoint> witness;
};

// Samples n region points from a seeded box and pushes them through g.
// EmptyRegionSample when the box sampler cannot hit the region.
CompressionCheck sampled_compression_check(
    const IsometryElement& g,
    const std::function<bool(const SpacetimePoint&)>& region, int n,
    unsigned seed);

}  // namespace ew
