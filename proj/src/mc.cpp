#include "bmhull/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bmhull/errors.hpp"
#include "bmhull/hull.hpp"
#include "bmhull/integrals.hpp"
#include "bmhull/paths.hpp"
#include "bmhull/rain.hpp"

namespace bmhull {

namespace {

double crossing_survival(double d0, double d1, double dt)
{
    if (d0 <= 0.0 || d1 <= 0.0)
        return 0.0;
    const double z = 2.0 * d0 * d1 / dt;
    // exp(-40) is below half an ulp of 1, so the factor is exactly 1.
    return z > 40.0 ? 1.0 : -std::expm1(-z);
}

// Weight of one planar step from p0 to p1 of duration dt.
double step_weight(const Wedge2D& w, Point2 p0, Point2 p1, double dt)
{
    if (!w.convex())
        return w.contains(p1) ? 1.0 : 0.0;
    const auto a = w.edge_distances(p0);
    const auto b = w.edge_distances(p1);
    if (w.is_half_plane())
        return crossing_survival(a[0], b[0], dt);
    return crossing_survival(a[0], b[0], dt) * crossing_survival(a[1], b[1], dt);
}

double dot2(Point2 a, Point2 b) { return a[0] * b[0] + a[1] * b[1]; }

} // namespace

Estimate stay_prob_wedge(const Wedge2D& wedge, Point2 start, double horizon, const EstimatorConfig& config)
{
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ArgumentError("stay_prob_wedge: horizon must be positive");
    if (!wedge.contains(start))
        throw ArgumentError("stay_prob_wedge: start is outside the wedge");
    config.validate();
    const int steps = config.grid_points_per_unit_time;
    const double dt = horizon / steps;
    const double sd = std::sqrt(dt);
    return run_replicas(config, tag_of("stay_prob_wedge"), false, [&](std::uint64_t, RandomStream& rng) {
        Point2 p = start;
        double weight = 1.0;
        for (int k = 0; k < steps && weight > 0.0; ++k) {
            const Point2 q{p[0] + sd * rng.gaussian(), p[1] + sd * rng.gaussian()};
            weight *= step_weight(wedge, p, q, dt);
            p = q;
        }
        return weight;
    });
}

ExponentFit fit_exit_exponent(double half_angle, const EstimatorConfig& config, ExponentFitOptions opts)
{
    if (!(half_angle > 0.0 && half_angle <= std::numbers::pi / 2))
        throw ArgumentError("fit_exit_exponent: half-angle must lie in (0, pi/2]");
    if (opts.points < 4)
        throw ArgumentError("fit_exit_exponent: at least 4 support points are needed");
    if (!(opts.x_min > 0.0 && opts.x_max > opts.x_min))
        throw ArgumentError("fit_exit_exponent: invalid x range");
    const Wedge2D wedge({0.0, 0.0}, 0.0, half_angle);
    ExponentFit fit;
    std::vector<double> lx, ly;
    for (int k = 0; k < opts.points; ++k) {
        const double x = opts.x_min * std::pow(opts.x_max / opts.x_min, static_cast<double>(k) / (opts.points - 1));
        const Estimate e = stay_prob_wedge(wedge, {x, 0.0}, 1.0, config);
        fit.x.push_back(x);
        fit.estimates.push_back(e);
        if (e.mean > 0.0) {
            lx.push_back(std::log(x));
            ly.push_back(std::log(e.mean));
        }
    }
    if (lx.size() < 4)
        throw ArgumentError("fit_exit_exponent: fewer than 4 support points with positive estimates");
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i] / n;
        my += ly[i] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    fit.exponent = slope;
    fit.intercept = my - slope * mx;
    return fit;
}

Estimate bridge_stay_prob(const Wedge2D& wedge, Point2 a, Point2 b, const EstimatorConfig& config)
{
    if (!wedge.contains(a))
        throw ArgumentError("bridge_stay_prob: start is outside the wedge");
    config.validate();
    const int steps = config.grid_points_per_unit_time;
    const double dt = 1.0 / steps;
    return run_replicas(config, tag_of("bridge_stay_prob"), false, [&](std::uint64_t, RandomStream& rng) {
        if (!wedge.contains(b))
            return 0.0;
        Point2 p = a;
        double weight = 1.0;
        for (int k = 1; k <= steps && weight > 0.0; ++k) {
            Point2 q = b;
            if (k < steps) {
                // Step of the bridge conditioned on the current point.
                const double rest = 1.0 - (k - 1) * dt;
                const double w = dt / rest;
                const double sd = std::sqrt(dt * (rest - dt) / rest);
                q = {p[0] + w * (b[0] - p[0]) + sd * rng.gaussian(), p[1] + w * (b[1] - p[1]) + sd * rng.gaussian()};
            }
            weight *= step_weight(wedge, p, q, dt);
            p = q;
        }
        return weight;
    });
}

double bridge_bound(double alpha, double eps, double theta, double r, double gap)
{
    if (!(alpha > 1.0) || !(gap > 0.0))
        throw ArgumentError("bridge_bound: need alpha > 1 and a positive gap");
    return std::pow(alpha, eps) * std::pow(std::max(1.0 / alpha, r / std::sqrt(gap)), 1.0 + theta / 20.0);
}

const char* to_string(HCase c)
{
    switch (c) {
    case HCase::interior:
        return "interior";
    case HCase::edge:
        return "edge";
    case HCase::interior_special:
        return "interior-special";
    case HCase::edge_special:
        return "edge-special";
    }
    return "?";
}

HGeometry HGeometry::canonical(double theta)
{
    if (!(theta >= 0.0 && theta < std::numbers::pi))
        throw ArgumentError("HGeometry: theta must lie in [0, pi)");
    const double beta = (std::numbers::pi - theta) / 2.0;
    HGeometry g;
    g.pn_r = {-std::sin(beta), -std::cos(beta)};
    g.pn_s = {-std::sin(beta), std::cos(beta)};
    return g;
}

double HGeometry::theta() const { return std::acos(std::clamp(dot2(pn_r, pn_s), -1.0, 1.0)); }

double conditional_H_bound(HCase c, const HGeometry& g, double alpha)
{
    if (!(alpha > 1.0))
        throw ArgumentError("conditional_H_bound: alpha must exceed 1");
    const double gap = g.s2 - g.s1;
    const bool edge = c == HCase::edge || c == HCase::edge_special;
    const bool special = c == HCase::interior_special || c == HCase::edge_special;
    double rhs = std::pow(alpha, g.eps) / (edge ? std::sqrt(gap * alpha) : gap * alpha);
    if (special)
        rhs *= std::pow(alpha, -g.theta() / (800.0 * g.n));
    return rhs;
}

namespace {

bool on_wedge_boundary(const HGeometry& g, Point2 d)
{
    const Point2 v{d[0] - g.tip[0], d[1] - g.tip[1]};
    const double m = std::max(dot2(v, g.pn_r), dot2(v, g.pn_s));
    return std::abs(m) <= 1e-9 * (1.0 + std::hypot(v[0], v[1]));
}

void check_H_preconditions(HCase c, const HGeometry& g, double alpha)
{
    if (!(g.s1 >= 0.0 && g.s1 < g.s2 && g.s2 <= 1.0))
        throw ArgumentError("conditional_H_prob: need 0 <= s1 < s2 <= 1");
    if (g.n < 1)
        throw ArgumentError("conditional_H_prob: n must be positive");
    const bool edge = c == HCase::edge || c == HCase::edge_special;
    const bool b1 = on_wedge_boundary(g, g.d1), b2 = on_wedge_boundary(g, g.d2);
    if (!edge && !(b1 && b2))
        throw PreconditionError("disttowedge", "conditional_H_prob: both endpoints must lie on the wedge boundary");
    if (edge && !(b1 || b2))
        throw PreconditionError("disttowedge", "conditional_H_prob: one endpoint must lie on the wedge boundary");
    if (c == HCase::interior_special || c == HCase::edge_special) {
        const double m = std::min(std::hypot(g.d1[0] - g.tip[0], g.d1[1] - g.tip[1]),
                                  std::hypot(g.d2[0] - g.tip[0], g.d2[1] - g.tip[1]));
        if (!(g.s2 - g.s1 >= std::pow(alpha, 1.0 / (10.0 * g.n)) * std::max(m * m, 1.0 / alpha)))
            throw PreconditionError("condj", "conditional_H_prob: s2 - s1 is below alpha^{1/(10n)} max(dist^2, 1/alpha)");
    }
}

} // namespace

BoundCheck conditional_H_prob(HCase c, const HGeometry& g, double alpha, const EstimatorConfig& config)
{
    check_H_preconditions(c, g, alpha);
    config.validate();
    const double enl = enlargement(alpha);
    const bool single = dot2(g.pn_r, g.pn_s) >= 1.0 - 1e-15;
    const TimeGrid grid = TimeGrid::uniform(g.s1, g.s2, config.grid_points_per_unit_time);
    const BridgeSpec spec{{g.d1[0], g.d1[1]}, {g.d2[0], g.d2[1]}, g.s1, g.s2};

    auto slack = [&](std::span<const double> y, Point2 pn) {
        return enl - ((y[0] - g.tip[0]) * pn[0] + (y[1] - g.tip[1]) * pn[1]);
    };

    BoundCheck out;
    out.estimate = run_replicas(config, tag_of("conditional_H_prob"), false, [&](std::uint64_t, RandomStream& rng) {
        const PathSample path = sample_bridge(spec, 2, grid, rng);
        double weight = 1.0;
        for (std::size_t k = 0; k + 1 < path.size() && weight > 0.0; ++k) {
            const double dt = grid[k + 1] - grid[k];
            const auto y0 = path.at(k), y1 = path.at(k + 1);
            weight *= crossing_survival(slack(y0, g.pn_r), slack(y1, g.pn_r), dt);
            if (!single)
                weight *= crossing_survival(slack(y0, g.pn_s), slack(y1, g.pn_s), dt);
        }
        if (weight > 0.0 && !check_Y(path, alpha, g.s1, g.s2, g.n))
            weight = 0.0;
        return weight;
    });
    out.bound = conditional_H_bound(c, g, alpha);
    out.margin = out.bound - out.estimate.mean;
    return out;
}

Estimate prob_R_complement(double alpha, int n_dim, const EstimatorConfig& config)
{
    if (!(alpha > 1.0))
        throw ArgumentError("prob_R_complement: alpha must exceed 1");
    if (n_dim < 1)
        throw ArgumentError("prob_R_complement: dimension must be positive");
    config.validate();
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, config.grid_points_per_unit_time);
    return run_replicas(config, tag_of("prob_R_complement"), true, [&](std::uint64_t, RandomStream& rng) {
        const Rain rain = generate_rain(alpha, rng);
        const RainLevel lv = level(rain, alpha);
        const PathSample path = sample_brownian(n_dim, grid, rng);
        return check_R(lv, path, alpha, 0.0, 1.0, n_dim) ? 0.0 : 1.0;
    });
}

namespace {

// Facets of the hull of the path at the level times, split by whether they
// touch the fixed times 0 and 1.
std::pair<double, double> facet_counts(const RainLevel& lv, int dim, RandomStream& rng)
{
    const PathSample path = sample_brownian(dim, lv.grid(), rng);
    try {
        const Polytope hull = build_hull(path.points);
        const int last = static_cast<int>(path.size()) - 1;
        double rain_only = 0.0;
        for (const Facet& f : hull.facets()) {
            const bool fixed = std::any_of(f.vertex_indices.begin(), f.vertex_indices.end(),
                                           [&](int v) { return v == 0 || v == last; });
            if (!fixed)
                rain_only += 1.0;
        }
        return {rain_only, static_cast<double>(hull.facets().size())};
    } catch (const DegeneracyError&) {
        return {0.0, 0.0};
    }
}

} // namespace

CampbellResult campbell_check(double alpha, int n_dim, const EstimatorConfig& config)
{
    if (!(alpha >= 1.0))
        throw ArgumentError("campbell_check: alpha must be at least 1");
    if (n_dim < 2 || n_dim > 4)
        throw ArgumentError("campbell_check: dimension must be 2, 3 or 4");
    config.validate();
    CampbellResult res;
    res.lhs = run_replicas(config, tag_of("campbell_lhs"), false, [&](std::uint64_t, RandomStream& rng) {
        const RainLevel lv = level(generate_rain(alpha, rng), alpha);
        return facet_counts(lv, n_dim, rng).first;
    });
    res.all_facets = run_replicas(config, tag_of("campbell_lhs"), false, [&](std::uint64_t, RandomStream& rng) {
        const RainLevel lv = level(generate_rain(alpha, rng), alpha);
        return facet_counts(lv, n_dim, rng).second;
    });

    double simplex_factor = 1.0; // alpha^n / n!
    for (int k = 1; k <= n_dim; ++k)
        simplex_factor *= alpha / k;
    const Estimate freq = run_replicas(config, tag_of("campbell_rhs"), true, [&](std::uint64_t, RandomStream& rng) {
        std::vector<double> r(static_cast<std::size_t>(n_dim));
        for (double& x : r)
            x = rng.uniform();
        std::sort(r.begin(), r.end());
        const RainLevel lv = level(generate_rain(alpha, rng), alpha);
        const TimeGrid grid = TimeGrid::merge(lv.grid(), r);
        if (grid.size() != lv.times.size() + r.size())
            return 0.0; // r hit a level time: probability zero
        const PathSample path = sample_brownian(n_dim, grid, rng);
        PointSet facet(n_dim), others(n_dim);
        for (double t : r)
            facet.push_back(path.at_time(t));
        for (double t : lv.times)
            others.push_back(path.at_time(t));
        try {
            return event_E(facet, others, -1.0) ? 1.0 : 0.0;
        } catch (const DegeneracyError&) {
            return 0.0;
        }
    });
    res.rhs = scaled(freq, simplex_factor);
    return res;
}

namespace {

struct MergedTimes
{
    std::vector<double> t; // sorted union of r and s
    TimeGrid grid;
};

MergedTimes merged_grid(const std::vector<double>& r, const std::vector<double>& s, int per_unit)
{
    const std::size_t n = r.size();
    if (n < 2 || n > 4 || s.size() != n)
        throw ArgumentError("discordant_prob: r and s must have the same length n in {2,3,4}");
    for (const auto* v : {&r, &s})
        for (std::size_t i = 0; i < n; ++i) {
            if (!((*v)[i] > 0.0 && (*v)[i] < 1.0))
                throw ArgumentError("discordant_prob: times must lie in (0,1)");
            if (i > 0 && !((*v)[i] > (*v)[i - 1]))
                throw ArgumentError("discordant_prob: times must be strictly increasing");
        }
    std::vector<double> t(r);
    t.insert(t.end(), s.begin(), s.end());
    std::sort(t.begin(), t.end());
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1]))
            throw ArgumentError("discordant_prob: r and s must not share a time");
    TimeGrid grid = TimeGrid::merge(TimeGrid::uniform(0.0, 1.0, per_unit), t);
    return {std::move(t), std::move(grid)};
}

FacetGeometry facet_at(const PathSample& path, const std::vector<double>& times)
{
    PointSet pts(path.dim());
    for (double t : times)
        pts.push_back(path.at_time(t));
    return facet_from_points(pts);
}

} // namespace

DiscordantResult discordant_prob(const std::vector<double>& r, const std::vector<double>& s, double alpha,
                                 double kappa, const EstimatorConfig& config)
{
    if (!(alpha > 1.0))
        throw ArgumentError("discordant_prob: alpha must exceed 1");
    if (!(kappa > 0.0 && kappa < std::numbers::pi))
        throw ArgumentError("discordant_prob: kappa must lie in (0, pi)");
    config.validate();
    const MergedTimes m = merged_grid(r, s, config.grid_points_per_unit_time);
    const int n = static_cast<int>(r.size());
    const double gamma = gamma_ak(alpha, kappa);

    // One pass per event keeps both estimates on identical replicas.
    auto kernel = [&](bool with_c) {
        return [&, with_c](std::uint64_t, RandomStream& rng) {
            const PathSample path = sample_brownian(n, m.grid, rng);
            FacetGeometry fr, fs;
            try {
                fr = facet_at(path, r);
                fs = facet_at(path, s);
            } catch (const DegeneracyError&) {
                return 0.0;
            }
            if (!check_E_tilde(path, fr, alpha) || !check_E_tilde(path, fs, alpha))
                return 0.0;
            if (!with_c)
                return 1.0;
            return check_discordant(fr, fs, alpha, gamma, kappa / 16.0) ? 1.0 : 0.0;
        };
    };
    DiscordantResult res;
    res.estimate = run_replicas(config, tag_of("discordant_prob"), true, kernel(true));
    res.tilde_only = run_replicas(config, tag_of("discordant_prob"), true, kernel(false));
    res.bound = rhs_bound(m.t, alpha, kappa, n);
    return res;
}

Estimate tilde_events_product_form(const std::vector<double>& r, const std::vector<double>& s, double alpha,
                                   const EstimatorConfig& config, int inner)
{
    if (!(alpha > 1.0))
        throw ArgumentError("tilde_events_product_form: alpha must exceed 1");
    if (inner < 1)
        throw ArgumentError("tilde_events_product_form: inner must be positive");
    config.validate();
    const MergedTimes m = merged_grid(r, s, config.grid_points_per_unit_time);
    const int n = static_cast<int>(r.size());
    const double enl = enlargement(alpha);

    // Pinned times t_1..t_{2n} and t_{2n+1} = 1 (t_0 = 0 with b_0 = 0).
    std::vector<double> pins(m.t);
    pins.push_back(1.0);
    std::vector<double> knots{0.0};
    knots.insert(knots.end(), pins.begin(), pins.end());
    const TimeGrid pin_grid(knots);
    std::vector<TimeGrid> pieces;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const auto [lo, hi] = m.grid.range(knots[i], knots[i + 1]);
        pieces.emplace_back(std::vector<double>(m.grid.times().begin() + static_cast<std::ptrdiff_t>(lo),
                                                m.grid.times().begin() + static_cast<std::ptrdiff_t>(hi)));
    }

    return run_replicas(config, tag_of("tilde_events_product_form"), false, [&](std::uint64_t, RandomStream& rng) {
        const PathSample pinned = sample_brownian(n, pin_grid, rng);
        FacetGeometry fr, fs;
        try {
            fr = facet_at(pinned, r);
            fs = facet_at(pinned, s);
        } catch (const DegeneracyError&) {
            return 0.0;
        }
        const double lim_r = fr.offset + enl, lim_s = fs.offset + enl;
        double product = 1.0;
        for (std::size_t i = 0; i < pieces.size() && product > 0.0; ++i) {
            const auto a = pinned.at(i), b = pinned.at(i + 1);
            const BridgeSpec spec{Vec(a.begin(), a.end()), Vec(b.begin(), b.end()), knots[i], knots[i + 1]};
            int hits = 0;
            for (int k = 0; k < inner; ++k) {
                const PathSample piece = sample_bridge(spec, n, pieces[i], rng);
                bool ok = true;
                for (std::size_t q = 0; q < piece.size() && ok; ++q)
                    ok = dot(piece.at(q), fr.normal) <= lim_r && dot(piece.at(q), fs.normal) <= lim_s;
                hits += ok ? 1 : 0;
            }
            product *= static_cast<double>(hits) / inner;
        }
        return product;
    });
}

} // namespace bmhull
