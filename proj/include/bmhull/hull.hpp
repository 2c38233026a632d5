#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "bmhull/geometry.hpp"

namespace bmhull {

/// Relative tolerance; the absolute orientation tolerance of a hull is
/// kGeomRelTol times the diameter of its input.
inline constexpr double kGeomRelTol = 1e-9;

/// Oriented facet of a simplicial polytope: <normal, x> = offset on the facet
/// and <normal, v> <= offset + eps for every vertex v.
struct Facet
{
    std::vector<int> vertex_indices; // sorted, indices into Polytope::points
    Vec normal;                      // outward, unit
    double offset = 0.0;
};

/// A facet given by explicit vertex coordinates (used for F_r built from path
/// points and for facets extracted from a Polytope).
struct FacetGeometry
{
    PointSet vertices;
    Vec normal; // unit
    double offset = 0.0;

    int dim() const { return vertices.dim(); }
};

struct HullOptions
{
    /// Absolute tolerance; negative means kGeomRelTol * diameter.
    double eps = -1.0;
};

class Polytope
{
  public:
    Polytope(PointSet points, std::vector<Facet> facets, double eps);

    int dim() const { return points_.dim(); }
    /// All input points (facets index into these).
    const PointSet& points() const { return points_; }
    /// Indices of input points that are hull vertices, ascending.
    const std::vector<int>& vertex_indices() const { return vertices_; }
    const std::vector<Facet>& facets() const { return facets_; }
    double eps() const { return eps_; }

    FacetGeometry facet_geometry(std::size_t f) const;

    /// <normal, x> - offset <= eps for every facet.
    bool contains(std::span<const double> x, double tol) const;

    /// Euclidean distance from x to the polytope (0 inside).
    double distance_to(std::span<const double> x) const;

    /// Number of distinct ridges ((dim-2)-faces) of the boundary complex.
    std::size_t ridge_count() const;

  private:
    PointSet points_;
    std::vector<Facet> facets_;
    std::vector<int> vertices_;
    double eps_;
};

/// Convex hull in dimension 2, 3 or 4 by incremental insertion. Throws
/// DegeneracyError (carrying the affine rank) when the points do not span
/// the full dimension.
Polytope build_hull(const PointSet& points, HullOptions opts = {});

/// Brute-force facet enumeration: every dim-subset whose hyperplane leaves
/// all points on one side. Test oracle; cost C(N, dim) * N.
std::vector<std::vector<int>> enumerate_facets_bruteforce(const PointSet& points, double eps);

/// Unit normal of aff(points) (dim points of R^dim) with
/// <n, reference> >= 0; if that product is within tolerance of 0, the sign
/// making the first nonzero coordinate positive. Throws DegeneracyError for
/// affinely dependent input.
Vec oriented_normal(const PointSet& points, std::span<const double> reference);

/// F_r for the given points with the normal oriented by oriented_normal,
/// referenced at the first point.
FacetGeometry facet_from_points(const PointSet& points);

/// True iff every point of `others` lies weakly on one side of aff(facet)
/// (within eps): the facet condition for points in general position.
bool event_E(const PointSet& facet_points, const PointSet& others, double eps);

/// Predicate on sorted time tuples; an empty function means all of Delta_n.
using SimplexRegion = std::function<bool(std::span<const double>)>;

/// Number of facets of `hull` whose vertex times (times[index], sorted) lie
/// in `region`.
std::size_t count_q(const Polytope& hull, std::span<const double> times, const SimplexRegion& region = {});

/// Number of increasing n-tuples of `times` lying in `region`.
std::size_t count_w(std::span<const double> times, int n, const SimplexRegion& region = {});

} // namespace bmhull
