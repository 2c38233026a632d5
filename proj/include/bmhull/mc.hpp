#pragma once

#include <cstdint>
#include <vector>

#include "bmhull/estimate.hpp"
#include "bmhull/wedge.hpp"

namespace bmhull {

/// Probability that planar Brownian motion started at `start` stays in the
/// wedge up to `horizon`. The horizon is cut into
/// config.grid_points_per_unit_time steps. For convex wedges every step is
/// weighted by the bridge non-crossing factor 1 - exp(-2 d0 d1 / dt) of each
/// edge line (exact for a half-plane); non-convex wedges are monitored at
/// the grid points only.
Estimate stay_prob_wedge(const Wedge2D& wedge, Point2 start, double horizon, const EstimatorConfig& config);

struct ExponentFit
{
    double exponent = 0.0; // fitted log-log slope
    double intercept = 0.0;
    std::vector<double> x; // r / sqrt(t)
    std::vector<Estimate> estimates;
};

struct ExponentFitOptions
{
    double x_min = 0.05;
    double x_max = 0.5;
    int points = 6;
};

/// Least-squares slope of log stay probability against log(r / sqrt(t)) for
/// starts on the bisector at distance r, horizon 1. Spitzer's exponent
/// pi / (2 beta) is the expected value.
ExponentFit fit_exit_exponent(double half_angle, const EstimatorConfig& config, ExponentFitOptions opts = {});

/// Probability that a planar Brownian bridge from a (time 0) to b (time 1)
/// stays in the wedge; same per-step weighting as stay_prob_wedge.
Estimate bridge_stay_prob(const Wedge2D& wedge, Point2 a, Point2 b, const EstimatorConfig& config);

/// alpha^eps * max(1/alpha, r / sqrt(s2 - s1))^{1 + theta/20}.
double bridge_bound(double alpha, double eps, double theta, double r, double gap = 1.0);

enum class HCase
{
    interior,
    edge,
    interior_special,
    edge_special
};

const char* to_string(HCase c);

/// One interval [s1, s2] of the conditioned path in the plane of the two
/// normals: W = {<y - tip, pn_k> <= 0}, W' = {<y - tip, pn_k> <= enlargement}.
struct HGeometry
{
    Point2 tip{};
    Point2 pn_r{1.0, 0.0};
    Point2 pn_s{0.0, 1.0};
    double s1 = 0.0;
    double s2 = 1.0;
    Point2 d1{};
    Point2 d2{};
    int n = 2;
    double eps = 0.2;

    /// Wedge with tip at the origin, inner angle theta between the normals,
    /// normals symmetric about the negative x axis.
    static HGeometry canonical(double theta);

    double theta() const;
};

struct BoundCheck
{
    Estimate estimate;
    double bound = 0.0;
    double margin = 0.0; // bound - mean
    /// mean <= bound + 4 standard errors
    bool consistent() const { return estimate.mean <= bound + 4.0 * estimate.std_error; }
};

/// Right-hand side of the matching interval bound:
/// interior alpha^eps / ((s2-s1) alpha), edge alpha^eps / sqrt((s2-s1) alpha),
/// special variants times alpha^{-theta/(800 n)}.
double conditional_H_bound(HCase c, const HGeometry& g, double alpha);

/// Bridge estimate of P(H ∩ Y_alpha[s1,s2] | endpoints) for the projected
/// path, with the per-edge crossing weights on W'. Y_alpha is checked on the
/// projected path, which can only make the event larger. Throws
/// PreconditionError ("disttowedge", "condj") when the endpoint conditions of
/// the case fail.
BoundCheck conditional_H_prob(HCase c, const HGeometry& g, double alpha, const EstimatorConfig& config);

/// Failure frequency of check_R over [0,1] for a dim-dimensional path and a
/// rain level at alpha.
Estimate prob_R_complement(double alpha, int n_dim, const EstimatorConfig& config);

struct CampbellResult
{
    /// Mean number of facets of K_alpha whose vertices are all rain points.
    Estimate lhs;
    /// alpha^2 / 2 times the frequency of E_alpha(r) for uniform r in Delta_2.
    Estimate rhs;
    /// Mean number of all facets of K_alpha, including those through B(0), B(1).
    Estimate all_facets;
};

CampbellResult campbell_check(double alpha, int n_dim, const EstimatorConfig& config);

struct DiscordantResult
{
    Estimate estimate;   // P(tilde E(r) ∩ tilde E(s) ∩ C_{alpha,kappa})
    Estimate tilde_only; // P(tilde E(r) ∩ tilde E(s)), same replicas
    double bound = 0.0;  // rhs_bound on the merged times
};

/// Path on the uniform grid merged with r and s; all events monitored at
/// grid points.
DiscordantResult discordant_prob(const std::vector<double>& r, const std::vector<double>& s, double alpha,
                                 double kappa, const EstimatorConfig& config);

/// P(tilde E(r) ∩ tilde E(s)) rebuilt from its conditional product form:
/// draws B at the merged times, then estimates each P(H_i | S) from
/// `inner` bridges and multiplies. Same grid as discordant_prob.
Estimate tilde_events_product_form(const std::vector<double>& r, const std::vector<double>& s, double alpha,
                                   const EstimatorConfig& config, int inner);

} // namespace bmhull
