#include "bmhull/wedge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bmhull/errors.hpp"
#include "bmhull/integrals.hpp"

namespace bmhull {

namespace {

double dot2(Point2 a, Point2 b) { return a[0] * b[0] + a[1] * b[1]; }
double dist2(Point2 a, Point2 b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

void require_unit(std::span<const double> v, const char* who)
{
    if (std::abs(norm(v) - 1.0) > 1e-6)
        throw ArgumentError(std::string(who) + ": expected a unit vector");
}

} // namespace

Wedge2D::Wedge2D(Point2 tip, double axis_angle, double half_angle) : tip_(tip), axis_(axis_angle), beta_(half_angle)
{
    if (!(half_angle > 0.0 && half_angle <= std::numbers::pi))
        throw ArgumentError("Wedge2D: half-angle must lie in (0, pi]");
    if (!std::isfinite(axis_angle) || !std::isfinite(tip[0]) || !std::isfinite(tip[1]))
        throw ArgumentError("Wedge2D: non-finite parameters");
    const double sb = std::sin(beta_), cb = std::cos(beta_);
    const double ca = std::cos(axis_), sa = std::sin(axis_);
    // (sin b, -cos b) and (sin b, cos b) rotated by the axis angle.
    normals_[0] = {ca * sb + sa * cb, sa * sb - ca * cb};
    normals_[1] = {ca * sb - sa * cb, sa * sb + ca * cb};
    if (beta_ == kHalfPi)
        normals_[1] = normals_[0] = {ca, sa};
}

std::array<double, 2> Wedge2D::edge_distances(Point2 p) const
{
    const Point2 v{p[0] - tip_[0], p[1] - tip_[1]};
    return {dot2(v, normals_[0]), dot2(v, normals_[1])};
}

bool Wedge2D::contains(Point2 p, double tol) const
{
    if (beta_ == std::numbers::pi)
        return true;
    const auto d = edge_distances(p);
    return convex() ? std::min(d[0], d[1]) >= -tol : std::max(d[0], d[1]) >= -tol;
}

double angle(std::span<const double> n_r, std::span<const double> n_s)
{
    if (n_r.size() != n_s.size())
        throw ArgumentError("angle: dimension mismatch");
    require_unit(n_r, "angle");
    require_unit(n_s, "angle");
    return std::acos(std::clamp(dot(n_r, n_s), -1.0, 1.0));
}

Point2 WedgePair::project(std::span<const double> x) const { return {dot(x, plane_basis[0]), dot(x, plane_basis[1])}; }

double WedgePair::distance_to_ridge(std::span<const double> x) const { return dist2(project(x), projected_tip); }

bool WedgePair::in_wedge(Point2 y, double tol) const
{
    return dot2(y, pn_r) <= offset_r + tol && dot2(y, pn_s) <= offset_s + tol;
}

bool WedgePair::in_enlarged_wedge(Point2 y, double tol) const { return in_wedge(y, enlargement + tol); }

WedgePair pair_geometry(const FacetGeometry& f_r, const FacetGeometry& f_s, double alpha, double kappa)
{
    const int d = f_r.dim();
    if (f_s.dim() != d || static_cast<int>(f_r.normal.size()) != d || static_cast<int>(f_s.normal.size()) != d)
        throw ArgumentError("pair_geometry: dimension mismatch");
    WedgePair w;
    w.n_r = f_r.normal;
    w.n_s = f_s.normal;
    w.theta = angle(w.n_r, w.n_s);
    if (w.theta <= kAngleEps || w.theta >= std::numbers::pi - kAngleEps)
        throw DegeneracyError(d - 1, "pair_geometry: facet hyperplanes are parallel");
    w.offset_r = f_r.offset;
    w.offset_s = f_s.offset;

    // x0 = c1 n_r + c2 n_s with <x0, n_r> = o_r, <x0, n_s> = o_s.
    const double c = dot(w.n_r, w.n_s);
    const double det = 1.0 - c * c;
    const double c1 = (w.offset_r - c * w.offset_s) / det;
    const double c2 = (w.offset_s - c * w.offset_r) / det;
    w.ridge_point.resize(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k)
        w.ridge_point[k] = c1 * w.n_r[k] + c2 * w.n_s[k];

    Vec e2(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k)
        e2[k] = w.n_s[k] - c * w.n_r[k];
    const double len = norm(e2);
    for (double& x : e2)
        x /= len;
    w.plane_basis = {w.n_r, e2};
    w.ridge_basis = orthogonal_complement({w.n_r, e2}, d, 1e-12);

    w.projected_tip = w.project(w.ridge_point);
    w.pn_r = {1.0, 0.0};
    w.pn_s = {c, std::sqrt(det)};
    w.enlargement = enlargement(alpha);
    w.gamma = (kappa > 0.0 && kappa < std::numbers::pi) ? gamma_ak(alpha, kappa) : 0.0;
    return w;
}

double ridge_distance(const FacetGeometry& f_r, const FacetGeometry& f_s, const WedgePair& pair)
{
    double best = 0.0;
    for (const FacetGeometry* f : {&f_r, &f_s})
        for (std::size_t i = 0; i < f->vertices.size(); ++i)
            best = std::max(best, pair.distance_to_ridge(f->vertices[i]));
    return best;
}

bool check_discordant(const FacetGeometry& f_r, const FacetGeometry& f_s, double alpha, double gamma,
                      double theta_min)
{
    const double theta = angle(f_r.normal, f_s.normal);
    if (theta < theta_min)
        return false;
    if (theta <= kAngleEps || theta >= std::numbers::pi - kAngleEps)
        return false;
    const WedgePair pair = pair_geometry(f_r, f_s, alpha, 0.0);
    return ridge_distance(f_r, f_s, pair) <= gamma;
}

double lemma3_constant(double kappa)
{
    if (!(kappa > 0.0 && kappa < std::numbers::pi))
        throw ArgumentError("lemma3_constant: kappa must lie in (0, pi)");
    return 4.0 / (std::sin(kappa / 2.0) * std::sin(kappa / 4.0) * std::sin(kappa / 8.0));
}

bool AmbientWedge::contains(std::span<const double> x, double tol) const
{
    const Vec v = sub(x, apex);
    return dot(v, u1) >= -tol && dot(v, u2) >= -tol;
}

double AmbientWedge::normal_angle() const { return std::acos(std::clamp(dot(u1, u2), -1.0, 1.0)); }

double projected_tip_distance(const FacetGeometry& f, const WedgePair& pair, bool is_r)
{
    // The facet projects into its line <y, pn> = offset; parametrize that
    // line from the tip along its direction and take the covered interval.
    const Point2 pn = is_r ? pair.pn_r : pair.pn_s;
    const Point2 dir{-pn[1], pn[0]};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    double off_line = 0.0;
    for (std::size_t i = 0; i < f.vertices.size(); ++i) {
        const Point2 y = pair.project(f.vertices[i]);
        const Point2 v{y[0] - pair.projected_tip[0], y[1] - pair.projected_tip[1]};
        const double s = dot2(v, dir);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        off_line = std::max(off_line, std::abs(dot2(v, pn)));
    }
    const double along = (lo <= 0.0 && 0.0 <= hi) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
    return std::hypot(along, off_line);
}

namespace {

DiscordantWitness measure_pair(const Polytope& p, int i, int j)
{
    const FacetGeometry fi = p.facet_geometry(static_cast<std::size_t>(i));
    const FacetGeometry fj = p.facet_geometry(static_cast<std::size_t>(j));
    DiscordantWitness w;
    w.facet_i = i;
    w.facet_j = j;
    w.angle = angle(fi.normal, fj.normal);
    if (w.angle <= kAngleEps || w.angle >= std::numbers::pi - kAngleEps) {
        w.tip_distance = std::numeric_limits<double>::infinity();
        return w;
    }
    const WedgePair pair = pair_geometry(fi, fj, 2.0, 0.0);
    w.tip_distance = std::min(projected_tip_distance(fi, pair, true), projected_tip_distance(fj, pair, false));
    return w;
}

double distance_to_polytope(const Polytope& p, std::span<const double> x)
{
    if (p.contains(x, p.eps()))
        return 0.0;
    return p.distance_to(x);
}

} // namespace

DiscordantWitness find_discordant(const Polytope& p, const AmbientWedge& w, double kappa, double s)
{
    if (!(kappa > 0.0 && kappa < std::numbers::pi))
        throw ArgumentError("find_discordant: kappa must lie in (0, pi)");
    if (!(s >= 0.0))
        throw ArgumentError("find_discordant: s must be nonnegative");
    const int d = p.dim();
    if (static_cast<int>(w.apex.size()) != d || static_cast<int>(w.u1.size()) != d ||
        static_cast<int>(w.u2.size()) != d)
        throw ArgumentError("find_discordant: wedge dimension mismatch");
    require_unit(w.u1, "find_discordant");
    require_unit(w.u2, "find_discordant");
    if (w.normal_angle() < kappa - 1e-9)
        throw ArgumentError("find_discordant: wedge opening exceeds pi - kappa");
    for (int v : p.vertex_indices())
        if (!w.contains(p.points()[static_cast<std::size_t>(v)], p.eps()))
            throw ArgumentError("find_discordant: polytope is not inside the wedge");
    if (distance_to_polytope(p, w.apex) > s + p.eps())
        throw ArgumentError("find_discordant: polytope is farther than s from the wedge tip");

    const double min_angle = kappa / 16.0;
    const double max_tip = lemma3_constant(kappa) * s;
    const int nf = static_cast<int>(p.facets().size());
    std::optional<DiscordantWitness> best;
    for (int i = 0; i < nf; ++i)
        for (int j = i + 1; j < nf; ++j) {
            const double a = angle(p.facets()[i].normal, p.facets()[j].normal);
            if (a < min_angle || a >= std::numbers::pi - kAngleEps)
                continue;
            if (best && a < best->angle)
                continue;
            const DiscordantWitness cand = measure_pair(p, i, j);
            if (!(cand.tip_distance <= max_tip))
                continue;
            if (!best || cand.angle > best->angle ||
                (cand.angle == best->angle && cand.tip_distance < best->tip_distance))
                best = cand;
        }
    if (!best)
        throw LemmaViolation("find_discordant: no facet pair with angle >= kappa/16 near the tip");
    return *best;
}

DiscordantWitness reverify_witness(const Polytope& p, const DiscordantWitness& w)
{
    return measure_pair(p, w.facet_i, w.facet_j);
}

bool special_condition(const SpecialIndexInput& in, std::size_t j)
{
    const double gap = in.t[j + 1] - in.t[j];
    const double m = std::min(dist2(in.pb[j], in.w0), dist2(in.pb[j + 1], in.w0));
    const double rhs = std::pow(in.alpha, 1.0 / (10.0 * in.n)) * std::max(m * m, 1.0 / in.alpha);
    return gap >= rhs;
}

std::optional<std::size_t> special_index_scan(const SpecialIndexInput& in)
{
    for (std::size_t j = 0; j + 1 < in.t.size(); ++j)
        if (special_condition(in, j))
            return j;
    return std::nullopt;
}

std::optional<std::size_t> special_index(const SpecialIndexInput& in)
{
    if (!(in.alpha > 1.0))
        throw ArgumentError("special_index: alpha must exceed 1");
    if (in.n < 1)
        throw ArgumentError("special_index: n must be positive");
    const std::size_t m = static_cast<std::size_t>(2 * in.n + 2);
    if (in.t.size() != m || in.pb.size() != m)
        throw PreconditionError("times", "special_index: expected 2n+2 times and projected points");
    if (in.t.front() != 0.0 || in.t.back() != 1.0)
        throw PreconditionError("times", "special_index: times must start at 0 and end at 1");
    for (std::size_t i = 1; i < m; ++i)
        if (!(in.t[i] > in.t[i - 1]))
            throw PreconditionError("times", "special_index: times must be strictly increasing");

    const double ph = phi(in.alpha);
    const double tail = std::pow(in.alpha, -2.0 * in.n - 1.0);
    for (std::size_t i = 0; i + 1 < m; ++i)
        if (dist2(in.pb[i + 1], in.pb[i]) > ph * std::sqrt(in.t[i + 1] - in.t[i]) + tail)
            throw PreconditionError("increment", "special_index: |b_{i+1} - b_i| exceeds phi sqrt(gap) + tail at i = " +
                                                      std::to_string(i));
    const double radius = in.M * ph * ph / std::sqrt(in.alpha);
    bool near = false;
    for (const Point2& b : in.pb)
        near |= dist2(b, in.w0) < radius;
    if (!near)
        throw PreconditionError("near-point", "special_index: no projected point within M phi^2/sqrt(alpha) of w0");

    return special_index_scan(in);
}

bool check_events_H(const PathSample& path, double t_a, double t_b, const WedgePair& pair, double r1_value,
                    double s1_value, double alpha)
{
    if (!(t_a <= t_b))
        throw ArgumentError("check_events_H: invalid interval");
    if (path.grid.front() > t_a || path.grid.back() < t_b)
        throw ArgumentError("check_events_H: grid does not cover the interval");
    if (path.dim() != pair.dim())
        throw ArgumentError("check_events_H: dimension mismatch");
    const double enl = enlargement(alpha);
    const auto [lo, hi] = path.grid.range(t_a, t_b);
    for (std::size_t k = lo; k < hi; ++k) {
        const auto x = path.at(k);
        if (dot(x, pair.n_r) > r1_value + enl || dot(x, pair.n_s) > s1_value + enl)
            return false;
    }
    return true;
}

bool check_E_tilde(const PathSample& path, const FacetGeometry& f, double alpha)
{
    if (path.dim() != f.dim())
        throw ArgumentError("check_E_tilde: dimension mismatch");
    const double bound = f.offset + enlargement(alpha);
    for (std::size_t k = 0; k < path.size(); ++k)
        if (dot(path.at(k), f.normal) > bound)
            return false;
    return true;
}

} // namespace bmhull
