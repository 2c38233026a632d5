#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "bmhull/geometry.hpp"
#include "bmhull/hull.hpp"
#include "bmhull/paths.hpp"

namespace bmhull {

using Point2 = std::array<double, 2>;

/// Planar wedge {tip + t (cos x, sin x) : t >= 0, |x - axis_angle| <= half_angle}.
class Wedge2D
{
  public:
    Wedge2D(Point2 tip, double axis_angle, double half_angle);

    const Point2& tip() const { return tip_; }
    double axis_angle() const { return axis_; }
    double half_angle() const { return beta_; }
    bool convex() const { return beta_ <= kHalfPi; }
    bool is_half_plane() const { return beta_ == kHalfPi; }

    /// Inward unit normals of the two edges, the edge at axis + half-angle first.
    const std::array<Point2, 2>& inner_normals() const { return normals_; }

    /// Signed distances of p to the two edge lines, positive on the wedge
    /// side. For a half-plane the two coincide.
    std::array<double, 2> edge_distances(Point2 p) const;

    bool contains(Point2 p, double tol = 0.0) const;

    static constexpr double kHalfPi = 1.57079632679489661923;

  private:
    Point2 tip_;
    double axis_;
    double beta_;
    std::array<Point2, 2> normals_;
};

/// arccos of the clamped inner product of two unit vectors.
double angle(std::span<const double> n_r, std::span<const double> n_s);

/// Geometry of two facet hyperplanes: the ridge L = intersection of the
/// hyperplanes, and the picture in the plane spanned by the two normals.
struct WedgePair
{
    Vec n_r, n_s;
    double theta = 0.0;
    Vec ridge_point;                 // point of L closest to the origin
    std::vector<Vec> ridge_basis;    // orthonormal directions of L
    std::array<Vec, 2> plane_basis;  // orthonormal basis of span{n_r, n_s}; first is n_r
    Point2 projected_tip{};          // L seen in plane coordinates
    Point2 pn_r{}, pn_s{};           // normals in plane coordinates
    double offset_r = 0.0, offset_s = 0.0;
    double enlargement = 0.0;        // phi(alpha)^2 / sqrt(alpha)
    double gamma = 0.0;              // gamma_ak(alpha, kappa), 0 if kappa not in (0, pi)

    int dim() const { return static_cast<int>(n_r.size()); }

    /// Plane coordinates of x.
    Point2 project(std::span<const double> x) const;

    /// Distance from x to L.
    double distance_to_ridge(std::span<const double> x) const;

    /// Projected wedge {<y, n_r> <= offset_r, <y, n_s> <= offset_s}.
    bool in_wedge(Point2 y, double tol = 0.0) const;

    /// Same with both offsets increased by the enlargement.
    bool in_enlarged_wedge(Point2 y, double tol = 0.0) const;
};

/// Angular tolerance below which two facet hyperplanes count as parallel.
inline constexpr double kAngleEps = 1e-9;

WedgePair pair_geometry(const FacetGeometry& f_r, const FacetGeometry& f_s, double alpha, double kappa);

/// Largest distance from a vertex of either facet to L.
double ridge_distance(const FacetGeometry& f_r, const FacetGeometry& f_s, const WedgePair& pair);

/// theta(r,s) >= theta_min and ridge_distance <= gamma, both inclusive.
bool check_discordant(const FacetGeometry& f_r, const FacetGeometry& f_s, double alpha, double gamma,
                      double theta_min);

/// 4 / (sin(kappa/2) sin(kappa/4) sin(kappa/8)), kappa in (0, pi).
double lemma3_constant(double kappa);

/// Intersection of two half-spaces {<x - apex, u_i> >= 0} in R^d.
struct AmbientWedge
{
    Vec apex;
    Vec u1, u2; // inward unit normals

    bool contains(std::span<const double> x, double tol) const;
    /// Angle between the inward normals; the wedge opening is pi minus it.
    double normal_angle() const;
};

struct DiscordantWitness
{
    int facet_i = -1;
    int facet_j = -1;
    double angle = 0.0;
    double tip_distance = 0.0;
};

/// Distance, inside the plane of the pair, from the projected tip to the
/// projection of the facet (a segment on the facet's line).
double projected_tip_distance(const FacetGeometry& f, const WedgePair& pair, bool is_r);

/// Exhaustive search over facet pairs of p for angle >= kappa/16 and
/// projected tip distance <= lemma3_constant(kappa) * s. Candidates are
/// ranked by decreasing angle, then increasing tip distance.
DiscordantWitness find_discordant(const Polytope& p, const AmbientWedge& w, double kappa, double s);

/// Recomputes angle and tip distance of a witness from the raw facets.
DiscordantWitness reverify_witness(const Polytope& p, const DiscordantWitness& w);

/// Inputs of the special-index search.
struct SpecialIndexInput
{
    std::vector<double> t;  // 2n + 2 times, t_0 = 0, t_{2n+1} = 1
    std::vector<Point2> pb; // projected path values at those times
    Point2 w0{};
    double alpha = 0.0;
    double M = 1.0;
    int n = 2;
};

/// True iff index j satisfies
///   t_{j+1} - t_j >= alpha^{1/(10n)} max(min(|pb_j - w0|, |pb_{j+1} - w0|)^2, 1/alpha).
bool special_condition(const SpecialIndexInput& in, std::size_t j);

/// Validates the hypotheses (times, increment bound, a point within
/// M phi^2/sqrt(alpha) of w0) and returns the smallest qualifying index.
/// Throws PreconditionError naming the failed hypothesis ("times",
/// "increment", "near-point").
std::optional<std::size_t> special_index(const SpecialIndexInput& in);

/// Index-by-index scan of special_condition without hypothesis checks.
std::optional<std::size_t> special_index_scan(const SpecialIndexInput& in);

/// For every grid time in [t_a, t_b]: <B(t), n_r> <= r1_value + enl and
/// <B(t), n_s> <= s1_value + enl, where enl = enlargement(alpha).
bool check_events_H(const PathSample& path, double t_a, double t_b, const WedgePair& pair, double r1_value,
                    double s1_value, double alpha);

/// Relaxed facet event on a grid: every grid point x satisfies
/// <x, normal> <= offset + enlargement(alpha).
bool check_E_tilde(const PathSample& path, const FacetGeometry& f, double alpha);

} // namespace bmhull
