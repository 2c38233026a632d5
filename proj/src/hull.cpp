#include "bmhull/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "bmhull/errors.hpp"
#include "bmhull/integrals.hpp"

namespace bmhull {

namespace {

// Affine rank of pts by greedy Gram-Schmidt on differences from pts[0].
int affine_rank(const PointSet& pts, double tol)
{
    if (pts.size() == 0)
        return -1;
    std::vector<Vec> diffs;
    for (std::size_t i = 1; i < pts.size(); ++i)
        diffs.push_back(sub(pts[i], pts[0]));
    return static_cast<int>(orthonormalize(diffs, tol).size());
}

Vec unit(Vec v)
{
    const double len = norm(v);
    for (double& x : v)
        x /= len;
    return v;
}

struct Work
{
    std::vector<int> verts;
    Vec normal;
    double offset;
    bool alive = true;
};

Work make_facet(const PointSet& pts, std::vector<int> verts, std::span<const double> inside)
{
    std::sort(verts.begin(), verts.end());
    const PointSet sel = pts.select(verts);
    Vec n = hyperplane_normal(sel);
    const double len = norm(n);
    if (!(len > 0.0))
        throw DegeneracyError(affine_rank(sel, 0.0), "build_hull: degenerate facet");
    for (double& x : n)
        x /= len;
    double off = dot(n, sel[0]);
    if (dot(n, inside) > off) {
        for (double& x : n)
            x = -x;
        off = -off;
    }
    return {std::move(verts), std::move(n), off};
}

} // namespace

Polytope::Polytope(PointSet points, std::vector<Facet> facets, double eps)
    : points_(std::move(points)), facets_(std::move(facets)), eps_(eps)
{
    std::set<int> v;
    for (const Facet& f : facets_)
        v.insert(f.vertex_indices.begin(), f.vertex_indices.end());
    vertices_.assign(v.begin(), v.end());
}

FacetGeometry Polytope::facet_geometry(std::size_t f) const
{
    const Facet& fc = facets_.at(f);
    return {points_.select(fc.vertex_indices), fc.normal, fc.offset};
}

bool Polytope::contains(std::span<const double> x, double tol) const
{
    for (const Facet& f : facets_)
        if (dot(f.normal, x) - f.offset > tol)
            return false;
    return true;
}

double Polytope::distance_to(std::span<const double> x) const
{
    if (contains(x, 0.0))
        return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const Facet& f : facets_)
        best = std::min(best, distance_to_simplex(x, points_.select(f.vertex_indices)));
    return best;
}

std::size_t Polytope::ridge_count() const
{
    std::set<std::vector<int>> ridges;
    for (const Facet& f : facets_)
        for (std::size_t skip = 0; skip < f.vertex_indices.size(); ++skip) {
            std::vector<int> r;
            for (std::size_t k = 0; k < f.vertex_indices.size(); ++k)
                if (k != skip)
                    r.push_back(f.vertex_indices[k]);
            ridges.insert(std::move(r));
        }
    return ridges.size();
}

Polytope build_hull(const PointSet& points, HullOptions opts)
{
    const int d = points.dim();
    if (d < 2 || d > 4)
        throw ArgumentError("build_hull: dimension must be 2, 3 or 4");
    const std::size_t n = points.size();
    const double eps = opts.eps >= 0.0 ? opts.eps : kGeomRelTol * points.diameter();

    if (n == 0)
        throw DegeneracyError(-1, "build_hull: no points");

    // Initial simplex: lowest point in the first coordinate, then repeatedly
    // the point farthest from the affine span of those chosen so far.
    std::vector<int> simplex;
    {
        int first = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (points[i][0] < points[static_cast<std::size_t>(first)][0])
                first = static_cast<int>(i);
        simplex.push_back(first);
    }
    while (static_cast<int>(simplex.size()) < d + 1) {
        const PointSet span_pts = points.select(simplex);
        double best = -1.0;
        int arg = -1;
        for (std::size_t i = 0; i < n; ++i) {
            const double dist = simplex.size() == 1 ? distance(points[i], span_pts[0])
                                                    : distance_to_affine_span(points[i], span_pts);
            if (dist > best) {
                best = dist;
                arg = static_cast<int>(i);
            }
        }
        if (!(best > eps)) {
            const int rank = static_cast<int>(simplex.size()) - 1;
            throw DegeneracyError(rank, "build_hull: input has affine rank " + std::to_string(rank) +
                                            " < " + std::to_string(d));
        }
        simplex.push_back(arg);
    }

    Vec centroid(static_cast<std::size_t>(d), 0.0);
    for (int v : simplex)
        for (int k = 0; k < d; ++k)
            centroid[k] += points[static_cast<std::size_t>(v)][k] / (d + 1);

    std::vector<Work> facets;
    for (int skip = 0; skip <= d; ++skip) {
        std::vector<int> verts;
        for (int k = 0; k <= d; ++k)
            if (k != skip)
                verts.push_back(simplex[k]);
        facets.push_back(make_facet(points, std::move(verts), centroid));
    }

    std::vector<char> used(n, 0);
    for (int v : simplex)
        used[static_cast<std::size_t>(v)] = 1;

    std::map<std::vector<int>, int> ridge_hits;
    std::vector<std::size_t> visible;
    for (std::size_t p = 0; p < n; ++p) {
        if (used[p])
            continue;
        const auto x = points[p];
        visible.clear();
        for (std::size_t f = 0; f < facets.size(); ++f)
            if (facets[f].alive && dot(facets[f].normal, x) - facets[f].offset > eps)
                visible.push_back(f);
        if (visible.empty())
            continue;

        ridge_hits.clear();
        for (std::size_t f : visible) {
            const auto& vs = facets[f].verts;
            for (int skip = 0; skip < d; ++skip) {
                std::vector<int> r;
                for (int k = 0; k < d; ++k)
                    if (k != skip)
                        r.push_back(vs[k]);
                ++ridge_hits[r];
            }
            facets[f].alive = false;
        }
        for (const auto& [ridge, hits] : ridge_hits) {
            if (hits != 1)
                continue;
            std::vector<int> verts = ridge;
            verts.push_back(static_cast<int>(p));
            facets.push_back(make_facet(points, std::move(verts), centroid));
        }

        // Compact occasionally so the visibility scan stays proportional to
        // the live facet count.
        if (facets.size() > 64 && std::count_if(facets.begin(), facets.end(),
                                                [](const Work& w) { return w.alive; }) * 2 <
                                      static_cast<long>(facets.size()))
            facets.erase(std::remove_if(facets.begin(), facets.end(), [](const Work& w) { return !w.alive; }),
                         facets.end());
    }

    std::vector<Facet> out;
    for (Work& w : facets)
        if (w.alive)
            out.push_back({std::move(w.verts), std::move(w.normal), w.offset});
    std::sort(out.begin(), out.end(),
              [](const Facet& a, const Facet& b) { return a.vertex_indices < b.vertex_indices; });
    return Polytope(points, std::move(out), eps);
}

std::vector<std::vector<int>> enumerate_facets_bruteforce(const PointSet& points, double eps)
{
    const int d = points.dim();
    const int n = static_cast<int>(points.size());
    std::vector<std::vector<int>> out;
    if (n < d)
        return out;
    std::vector<int> idx(static_cast<std::size_t>(d));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        const PointSet sel = points.select(idx);
        Vec nrm = hyperplane_normal(sel);
        if (norm(nrm) > 0.0) {
            nrm = unit(std::move(nrm));
            const double off = dot(nrm, sel[0]);
            bool pos = false, neg = false;
            for (int i = 0; i < n; ++i) {
                const double s = dot(nrm, points[static_cast<std::size_t>(i)]) - off;
                pos |= s > eps;
                neg |= s < -eps;
            }
            if (!(pos && neg))
                out.push_back(idx);
        }
        int k = d - 1;
        while (k >= 0 && idx[k] == n - d + k)
            --k;
        if (k < 0)
            break;
        ++idx[k];
        for (int j = k + 1; j < d; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return out;
}

Vec oriented_normal(const PointSet& points, std::span<const double> reference)
{
    const int d = points.dim();
    if (static_cast<int>(points.size()) != d || static_cast<int>(reference.size()) != d)
        throw ArgumentError("oriented_normal: need dim points and a reference of matching dimension");
    const double scale = points.diameter();
    Vec n = hyperplane_normal(points);
    const double len = norm(n);
    if (!(len > 0.0) || !(len > std::pow(1e-12 * scale, d - 1)) || scale == 0.0)
        throw DegeneracyError(affine_rank(points, kGeomRelTol * scale), "oriented_normal: affinely dependent points");
    for (double& x : n)
        x /= len;
    const double tol = kGeomRelTol * (scale + norm(reference));
    const double side = dot(n, reference);
    bool flip = side < 0.0;
    if (std::abs(side) <= tol) {
        flip = false;
        for (double x : n)
            if (std::abs(x) > kGeomRelTol) {
                flip = x < 0.0;
                break;
            }
    }
    if (flip)
        for (double& x : n)
            x = -x;
    return n;
}

FacetGeometry facet_from_points(const PointSet& points)
{
    Vec n = oriented_normal(points, points[0]);
    const double off = dot(n, points[0]);
    return {points, std::move(n), off};
}

bool event_E(const PointSet& facet_points, const PointSet& others, double eps)
{
    const int d = facet_points.dim();
    if (static_cast<int>(facet_points.size()) != d || others.dim() != d)
        throw ArgumentError("event_E: dimension mismatch");
    const double scale = std::max(facet_points.diameter(), others.diameter());
    Vec n = hyperplane_normal(facet_points);
    const double len = norm(n);
    if (!(len > 0.0) || scale == 0.0)
        throw DegeneracyError(affine_rank(facet_points, kGeomRelTol * scale), "event_E: degenerate facet");
    for (double& x : n)
        x /= len;
    if (eps < 0.0)
        eps = kGeomRelTol * scale;
    const double off = dot(n, facet_points[0]);
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < others.size(); ++i) {
        const double s = dot(n, others[i]) - off;
        pos |= s > eps;
        neg |= s < -eps;
        if (pos && neg)
            return false;
    }
    return true;
}

std::size_t count_q(const Polytope& hull, std::span<const double> times, const SimplexRegion& region)
{
    if (times.size() != hull.points().size())
        throw ArgumentError("count_q: one time per hull input point required");
    if (!region)
        return hull.facets().size();
    std::size_t count = 0;
    std::vector<double> t;
    for (const Facet& f : hull.facets()) {
        t.clear();
        for (int v : f.vertex_indices)
            t.push_back(times[static_cast<std::size_t>(v)]);
        std::sort(t.begin(), t.end());
        if (region(t))
            ++count;
    }
    return count;
}

std::size_t count_w(std::span<const double> times, int n, const SimplexRegion& region)
{
    if (n <= 0)
        throw ArgumentError("count_w: n must be positive");
    const int m = static_cast<int>(times.size());
    if (m < n)
        return 0;
    if (!region)
        return static_cast<std::size_t>(std::llround(binomial(m, n)));
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> t(static_cast<std::size_t>(n));
    std::size_t count = 0;
    while (true) {
        for (int k = 0; k < n; ++k)
            t[k] = times[static_cast<std::size_t>(idx[k])];
        if (region(t))
            ++count;
        int k = n - 1;
        while (k >= 0 && idx[k] == m - n + k)
            --k;
        if (k < 0)
            break;
        ++idx[k];
        for (int j = k + 1; j < n; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return count;
}

} // namespace bmhull
