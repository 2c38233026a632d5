#include "bmhull/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "bmhull/errors.hpp"
#include "bmhull/hull.hpp"
#include "bmhull/integrals.hpp"
#include "bmhull/mc.hpp"
#include "bmhull/rain.hpp"
#include "bmhull/serialize.hpp"
#include "bmhull/wedge.hpp"

namespace bmhull {

namespace {

EstimatorConfig config_for(const SuiteOptions& o, std::uint64_t default_replicas)
{
    EstimatorConfig c;
    c.replicas = o.replicas.value_or(default_replicas);
    c.master_seed = o.seed;
    c.grid_points_per_unit_time = o.grid;
    c.confidence_level = o.confidence;
    c.workers = o.workers;
    return c;
}

std::string describe(const Estimate& e)
{
    std::ostringstream os;
    os << "mean=" << format_double(e.mean) << " se=" << format_double(e.std_error) << " ci=["
       << format_double(e.ci_low) << "," << format_double(e.ci_high) << "] N=" << e.replicas;
    return os.str();
}

CriterionResult within_se(const std::string& suite, const std::string& name, const Estimate& e, double target,
                          double k)
{
    CriterionResult r{suite, name, e.mean, target, k * e.std_error - std::abs(e.mean - target), false, describe(e)};
    r.pass = r.margin >= 0.0;
    return r;
}

Vec random_unit(int d, RandomStream& rng)
{
    Vec v(static_cast<std::size_t>(d));
    double n = 0.0;
    do {
        for (double& x : v)
            x = rng.gaussian();
        n = norm(v);
    } while (n < 1e-12);
    for (double& x : v)
        x /= n;
    return v;
}

// Runs body(i) for i in [0, count) in parallel; results land by index.
template <class T, class F>
std::vector<T> for_instances(std::size_t count, int workers, F&& body)
{
    std::vector<T> out(count);
    const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers > 0 ? workers : omp_max_threads_or_one())
    for (long i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = body(static_cast<std::uint64_t>(i));
    return out;
}

} // namespace

std::vector<CriterionResult> suite_spitzer(const SuiteOptions& opts)
{
    const EstimatorConfig c = config_for(opts, 100000);
    std::vector<CriterionResult> out;
    const Wedge2D half({0.0, 0.0}, 0.0, std::numbers::pi / 2);

    const Estimate hp = stay_prob_wedge(half, {1.0, 0.0}, 1.0, c);
    out.push_back(within_se("spitzer", "half_plane_stay_r1", hp, 2.0 * normal_cdf(1.0) - 1.0, 3.0));

    const std::pair<const char*, double> betas[] = {
        {"exit_exponent_pi_2", std::numbers::pi / 2},
        {"exit_exponent_pi_4", std::numbers::pi / 4},
        {"exit_exponent_3pi_8", 3 * std::numbers::pi / 8},
    };
    for (const auto& [name, beta] : betas) {
        const ExponentFit f = fit_exit_exponent(beta, c);
        const double target = std::numbers::pi / (2.0 * beta);
        std::ostringstream os;
        os << "x=[" << format_double(f.x.front()) << "," << format_double(f.x.back()) << "] points=" << f.x.size()
           << " N=" << c.replicas;
        CriterionResult r{"spitzer", name, f.exponent, target, 0.1 * target - std::abs(f.exponent - target), false,
                          os.str()};
        r.pass = r.margin >= 0.0;
        out.push_back(r);
    }

    const Estimate br = bridge_stay_prob(half, {1.0, 0.0}, {1.0, 0.0}, c);
    out.push_back(within_se("spitzer", "bridge_half_plane_r1", br, 1.0 - std::exp(-2.0), 3.0));
    return out;
}

std::vector<CriterionResult> suite_campbell(const SuiteOptions& opts)
{
    const EstimatorConfig c = config_for(opts, 100000);
    std::vector<CriterionResult> out;
    for (double alpha : {10.0, 20.0}) {
        const CampbellResult r = campbell_check(alpha, 2, c);
        // Distance between the intervals; nonnegative when they overlap.
        const double gap = std::max(r.lhs.ci_low - r.rhs.ci_high, r.rhs.ci_low - r.lhs.ci_high);
        CriterionResult cr{"campbell", "campbell_overlap_alpha_" + format_double(alpha), r.lhs.mean, r.rhs.mean, -gap,
                           r.lhs.overlaps(r.rhs), "lhs " + describe(r.lhs) + "; rhs " + describe(r.rhs)};
        out.push_back(cr);
    }
    return out;
}

std::vector<CriterionResult> suite_lemma8(const SuiteOptions& opts)
{
    std::vector<CriterionResult> out;
    for (double a : {std::exp(-1.0), std::exp(-2.0)})
        for (int n : {1, 2}) {
            const int res = n == 1 ? 512 : 64;
            const double q = integral_Za_quadrature(a, n, res);
            const double exact = integral_Za_bound(a, n);
            const double rel = std::abs(q - exact) / exact;
            std::ostringstream name;
            name << "quadrature_a_e-" << std::lround(-std::log(a)) << "_n" << n;
            out.push_back({"lemma8", name.str(), q, exact, 1e-2 - rel, rel <= 1e-2,
                           "resolution=" + std::to_string(res) + " rel_err=" + format_double(rel)});
        }

    const EstimatorConfig c = config_for(opts, 100000);
    const Estimate single = measure_single_constraint(0.1, 2, c);
    out.push_back(within_se("lemma8", "single_constraint_a_0.1", single, 0.1, 3.0));

    const Estimate comp = measure_Za_complement(0.01, 2, c);
    const double bound = Za_complement_union_bound(0.01, 2);
    out.push_back({"lemma8", "Za_complement_union_bound_a_0.01", comp.ci_high, bound, bound - comp.ci_high,
                   comp.ci_high <= bound, describe(comp)});
    return out;
}

namespace {

struct Lemma3Outcome
{
    bool certified = false;
    bool violation = false;
    bool argument_error = false;
    double kappa = 0.0;
    double angle = 0.0;
    double tip_ratio = 0.0; // tip_distance / (M_kappa s)
};

Lemma3Outcome lemma3_instance(std::uint64_t seed, std::uint64_t i)
{
    constexpr double kappas[] = {0.3, 0.8, 1.5};
    Lemma3Outcome out;
    out.kappa = kappas[i % 3];
    RandomStream rng(seed, stream_id(tag_of("lemma3_instance"), i));
    const int d = 3;

    // Frame: e1 is the wedge bisector, e2 completes the cross-section plane.
    const Vec g1 = random_unit(d, rng), g2 = random_unit(d, rng), g3 = random_unit(d, rng);
    const std::vector<Vec> frame = orthonormalize({g1, g2, g3}, 1e-6);
    if (frame.size() < 3)
        return out;
    const double psi = out.kappa + rng.uniform() * (std::numbers::pi - 0.1 - out.kappa);
    const double h = (std::numbers::pi - psi) / 2.0; // half-opening
    AmbientWedge w;
    w.apex = Vec{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    w.u1.assign(3, 0.0);
    w.u2.assign(3, 0.0);
    for (int k = 0; k < d; ++k) {
        w.u1[k] = std::sin(h) * frame[0][k] - std::cos(h) * frame[1][k];
        w.u2[k] = std::sin(h) * frame[0][k] + std::cos(h) * frame[1][k];
    }

    const int m = 8 + static_cast<int>(i % 13);
    const bool near_tip = i % 2 == 0;
    PointSet pts(d);
    for (int p = 0; p < m; ++p) {
        const double phi_angle = (2.0 * rng.uniform() - 1.0) * h * 0.999;
        double rho = 0.05 + rng.uniform();
        if (near_tip && p == 0)
            rho = 1e-3;
        const double z = rng.gaussian();
        Vec x(w.apex);
        for (int k = 0; k < d; ++k)
            x[k] += rho * (std::cos(phi_angle) * frame[0][k] + std::sin(phi_angle) * frame[1][k]) + z * frame[2][k];
        pts.push_back(x);
    }
    try {
        const Polytope P = build_hull(pts);
        const double s = P.distance_to(w.apex) * (1.0 + 1e-12) + 1e-15;
        const DiscordantWitness wit = find_discordant(P, w, out.kappa, s);
        const DiscordantWitness again = reverify_witness(P, wit);
        const double limit = lemma3_constant(out.kappa) * s;
        out.angle = again.angle;
        out.tip_ratio = again.tip_distance / limit;
        out.certified = std::abs(again.angle - wit.angle) <= 1e-12 &&
                        std::abs(again.tip_distance - wit.tip_distance) <= 1e-9 * (1.0 + wit.tip_distance) &&
                        again.angle >= out.kappa / 16.0 && again.tip_distance <= limit;
    } catch (const LemmaViolation&) {
        out.violation = true;
    } catch (const ArgumentError&) {
        out.argument_error = true;
    } catch (const DegeneracyError&) {
        out.argument_error = true;
    }
    return out;
}

} // namespace

std::vector<CriterionResult> suite_lemma3(const SuiteOptions& opts)
{
    const std::size_t count = opts.replicas.value_or(1000);
    const auto res = for_instances<Lemma3Outcome>(count, opts.workers,
                                                  [&](std::uint64_t i) { return lemma3_instance(opts.seed, i); });
    std::size_t certified = 0, violations = 0, arg_errors = 0;
    double worst_ratio = 0.0;
    for (const auto& r : res) {
        certified += r.certified;
        violations += r.violation;
        arg_errors += r.argument_error;
        worst_ratio = std::max(worst_ratio, r.tip_ratio);
    }
    std::ostringstream os;
    os << "instances=" << count << " certified=" << certified << " lemma_violations=" << violations
       << " argument_errors=" << arg_errors << " max tip_distance/(M s)=" << format_double(worst_ratio);
    return {{"lemma3", "discordant_witness_all_instances", static_cast<double>(certified), static_cast<double>(count),
             static_cast<double>(certified) - static_cast<double>(count), certified == count && violations == 0,
             os.str()}};
}

namespace {

struct Lemma4Outcome
{
    bool valid = false;   // returned j re-verifies
    bool agrees = false;  // matches the independent scan
    bool hypothesis_failed = false;
};

SpecialIndexInput lemma4_instance(std::uint64_t seed, std::uint64_t i, double alpha, int n, double M)
{
    RandomStream rng(seed, stream_id(tag_of("lemma4_instance"), i));
    SpecialIndexInput in;
    in.alpha = alpha;
    in.n = n;
    in.M = M;
    const int inner = 2 * n;
    std::vector<double> t(static_cast<std::size_t>(inner));
    for (double& x : t)
        x = rng.uniform();
    std::sort(t.begin(), t.end());
    in.t.push_back(0.0);
    in.t.insert(in.t.end(), t.begin(), t.end());
    in.t.push_back(1.0);
    // b_0 = 0 and Brownian values at the remaining times.
    Point2 b{0.0, 0.0};
    in.pb.push_back(b);
    for (std::size_t k = 1; k < in.t.size(); ++k) {
        const double sd = std::sqrt(in.t[k] - in.t[k - 1]);
        b = {b[0] + sd * rng.gaussian(), b[1] + sd * rng.gaussian()};
        in.pb.push_back(b);
    }
    // w0 uniform in the open disk of radius M phi^2/sqrt(alpha) about a
    // uniformly chosen b_{j0}.
    const std::size_t j0 = static_cast<std::size_t>(rng.uniform() * static_cast<double>(in.pb.size()));
    const double radius = M * enlargement(alpha);
    const double rr = radius * std::sqrt(rng.uniform()) * (1.0 - 1e-12);
    const double ang = 2.0 * std::numbers::pi * rng.uniform();
    in.w0 = {in.pb[j0][0] + rr * std::cos(ang), in.pb[j0][1] + rr * std::sin(ang)};
    return in;
}

std::vector<Lemma4Outcome> run_lemma4(const SuiteOptions& opts, std::size_t count, double alpha)
{
    return for_instances<Lemma4Outcome>(count, opts.workers, [&](std::uint64_t i) {
        Lemma4Outcome o;
        const SpecialIndexInput in = lemma4_instance(opts.seed, i, alpha, 2, 1.0);
        try {
            const auto j = special_index(in);
            const auto scan = special_index_scan(in);
            o.agrees = j == scan;
            o.valid = j.has_value() && special_condition(in, *j);
        } catch (const PreconditionError&) {
            o.hypothesis_failed = true;
        }
        return o;
    });
}

} // namespace

std::vector<CriterionResult> suite_lemma4(const SuiteOptions& opts)
{
    const std::size_t count = opts.replicas.value_or(10000);
    std::vector<CriterionResult> out;
    for (double alpha : {1e6, 1e12}) {
        const auto res = run_lemma4(opts, count, alpha);
        std::size_t valid = 0, agree = 0, hyp = 0;
        for (const auto& r : res) {
            valid += r.valid;
            agree += r.agrees;
            hyp += r.hypothesis_failed;
        }
        std::ostringstream os;
        os << "alpha=" << format_double(alpha) << " instances=" << count << " valid_j=" << valid
           << " scan_agreement=" << agree << " hypothesis_failures=" << hyp;
        const std::string suffix = alpha == 1e6 ? "alpha_1e6" : "alpha_1e12";
        out.push_back({"lemma4", "special_index_valid_" + suffix, static_cast<double>(valid),
                       static_cast<double>(count), static_cast<double>(valid) - static_cast<double>(count),
                       valid == count && hyp == 0, os.str()});
        out.push_back({"lemma4", "special_index_scan_agreement_" + suffix, static_cast<double>(agree),
                       static_cast<double>(count), static_cast<double>(agree) - static_cast<double>(count),
                       agree == count && hyp == 0, os.str()});
    }
    return out;
}

namespace {

struct HullOutcome
{
    bool contained = true;
    bool unit = true;
    bool euler = true;
    bool matches_bruteforce = true;
    bool built = false;
};

HullOutcome hull_instance(std::uint64_t seed, std::uint64_t i)
{
    HullOutcome o;
    RandomStream rng(seed, stream_id(tag_of("hull_instance"), i));
    const int d = 2 + static_cast<int>(i % 3);
    const int n = 10 + static_cast<int>((i * 7) % 91);
    std::vector<double> coords(static_cast<std::size_t>(n * d));
    for (double& x : coords)
        x = rng.gaussian();
    const PointSet pts(d, std::move(coords));
    const Polytope P = build_hull(pts);
    o.built = true;
    for (std::size_t k = 0; k < pts.size(); ++k)
        o.contained = o.contained && P.contains(pts[k], P.eps());
    for (const Facet& f : P.facets())
        o.unit = o.unit && std::abs(norm(f.normal) - 1.0) <= 1e-12;
    if (d == 3) {
        const long V = static_cast<long>(P.vertex_indices().size());
        const long E = static_cast<long>(P.ridge_count());
        const long F = static_cast<long>(P.facets().size());
        o.euler = V - E + F == 2;
    }
    if (n <= 30) {
        std::set<std::vector<int>> a, b;
        for (const Facet& f : P.facets())
            a.insert(f.vertex_indices);
        for (auto& f : enumerate_facets_bruteforce(pts, P.eps()))
            b.insert(f);
        o.matches_bruteforce = a == b;
    }
    return o;
}

struct MonotoneOutcome
{
    bool checked = false;
    bool nested = true;
};

MonotoneOutcome monotone_instance(std::uint64_t seed, std::uint64_t i)
{
    MonotoneOutcome o;
    RandomStream rng(seed, stream_id(tag_of("hull_monotone"), i));
    const int d = 2 + static_cast<int>(i % 3);
    const double a1 = 8.0 + 20.0 * rng.uniform();
    const double a2 = a1 * (1.2 + 2.0 * rng.uniform());
    const Rain rain = generate_rain(a2, rng);
    const RainLevel lo = level(rain, a1), hi = level(rain, a2);
    const PathSample path = sample_brownian(d, hi.grid(), rng);
    PointSet small(d);
    for (double t : lo.times)
        small.push_back(path.at_time(t));
    try {
        const Polytope K1 = build_hull(small);
        const Polytope K2 = build_hull(path.points);
        o.checked = true;
        for (int v : K1.vertex_indices())
            o.nested = o.nested && K2.contains(small[static_cast<std::size_t>(v)], K2.eps());
    } catch (const DegeneracyError&) {
    }
    return o;
}

} // namespace

std::vector<CriterionResult> suite_hull(const SuiteOptions& opts)
{
    const std::size_t count = opts.replicas.value_or(1000);
    const auto res = for_instances<HullOutcome>(count, opts.workers,
                                                [&](std::uint64_t i) { return hull_instance(opts.seed, i); });
    std::size_t good = 0, brute_bad = 0, euler_bad = 0;
    for (const auto& r : res) {
        good += r.built && r.contained && r.unit && r.euler && r.matches_bruteforce;
        brute_bad += !r.matches_bruteforce;
        euler_bad += !r.euler;
    }
    std::ostringstream os;
    os << "hulls=" << count << " (d=2,3,4) passing=" << good << " euler_failures=" << euler_bad
       << " bruteforce_mismatches=" << brute_bad;
    std::vector<CriterionResult> out;
    out.push_back({"hull", "hull_invariants", static_cast<double>(good), static_cast<double>(count),
                   static_cast<double>(good) - static_cast<double>(count), good == count, os.str()});

    const std::size_t pairs = std::max<std::size_t>(count / 5, 1);
    const auto mono = for_instances<MonotoneOutcome>(pairs, opts.workers,
                                                     [&](std::uint64_t i) { return monotone_instance(opts.seed, i); });
    std::size_t checked = 0, nested = 0;
    for (const auto& m : mono) {
        checked += m.checked;
        nested += m.checked && m.nested;
    }
    std::ostringstream ms;
    ms << "coupled pairs=" << pairs << " checked=" << checked << " nested=" << nested;
    out.push_back({"hull", "coupled_rain_monotonicity", static_cast<double>(nested), static_cast<double>(checked),
                   static_cast<double>(nested) - static_cast<double>(checked), checked > 0 && nested == checked,
                   ms.str()});
    return out;
}

std::vector<CriterionResult> suite_bounds(const SuiteOptions& opts)
{
    const EstimatorConfig c = config_for(opts, 10000);
    std::vector<CriterionResult> out;

    // Interval bounds at alpha = 1e12: interior eps 0.8, edge eps 0.4; pinned
    // endpoints on the wedge edges at distance 0.3 from the tip (0.1 for the
    // special cases), free endpoint 0.5 along the bisector.
    const double alpha = 1e12;
    for (double gap : {0.25, 0.5})
        for (double theta : {0.5, 1.0}) {
            const double beta = (std::numbers::pi - theta) / 2.0;
            const Point2 er{std::cos(beta), -std::sin(beta)}, es{std::cos(beta), std::sin(beta)};
            for (HCase hc : {HCase::interior, HCase::edge, HCase::interior_special, HCase::edge_special}) {
                HGeometry g = HGeometry::canonical(theta);
                const bool edge = hc == HCase::edge || hc == HCase::edge_special;
                const bool special = hc == HCase::interior_special || hc == HCase::edge_special;
                const double near = special ? 0.1 : 0.3;
                g.eps = edge ? 0.4 : 0.8;
                g.s1 = edge ? 0.0 : 0.25;
                g.s2 = g.s1 + gap;
                g.d1 = edge ? Point2{0.5, 0.0} : Point2{near * er[0], near * er[1]};
                g.d2 = {(edge ? near : 0.3) * es[0], (edge ? near : 0.3) * es[1]};
                const BoundCheck b = conditional_H_prob(hc, g, alpha, c);
                std::ostringstream name;
                name << "prop6_" << to_string(hc) << "_gap" << format_double(gap) << "_theta" << format_double(theta);
                const double margin = b.bound + 4.0 * b.estimate.std_error - b.estimate.mean;
                out.push_back({"bounds", name.str(), b.estimate.mean, b.bound, margin, b.consistent(),
                               describe(b.estimate) + " eps=" + format_double(g.eps)});
            }
        }

    std::vector<Estimate> pr;
    const double alphas[] = {20.0, 50.0, 100.0};
    for (double a : alphas)
        pr.push_back(prob_R_complement(a, 2, c));
    bool trend = true;
    double worst = std::numeric_limits<double>::infinity();
    std::ostringstream ps;
    for (std::size_t k = 0; k < pr.size(); ++k) {
        ps << "alpha=" << format_double(alphas[k]) << ": " << describe(pr[k]) << "; ";
        if (k > 0) {
            const bool ok = pr[k].mean <= pr[k - 1].mean || pr[k].overlaps(pr[k - 1]);
            trend = trend && ok;
            worst = std::min(worst, pr[k - 1].ci_high - pr[k].ci_low);
        }
    }
    out.push_back({"bounds", "prob_R_complement_nonincreasing", pr.back().mean, pr.front().mean, worst, trend,
                   ps.str()});

    bool decreasing = true;
    std::ostringstream fs;
    double prev = std::numeric_limits<double>::infinity();
    double worst_step = std::numeric_limits<double>::infinity();
    for (double a : {1e3, 1e6, 1e9, 1e12}) {
        const double v = final_assembly(a, 1.0, 2);
        fs << "alpha=" << format_double(a) << ": " << format_double(v) << "; ";
        decreasing = decreasing && v < prev;
        if (std::isfinite(prev))
            worst_step = std::min(worst_step, prev - v);
        prev = v;
    }
    out.push_back({"bounds", "final_assembly_strictly_decreasing", prev, final_assembly(1e3, 1.0, 2), worst_step,
                   decreasing, fs.str()});
    return out;
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"spitzer", "campbell", "lemma8", "lemma3", "lemma4", "bounds", "hull"};
    return names;
}

std::vector<CriterionResult> run_suite(const std::string& name, const SuiteOptions& opts)
{
    if (name == "spitzer")
        return suite_spitzer(opts);
    if (name == "campbell")
        return suite_campbell(opts);
    if (name == "lemma8")
        return suite_lemma8(opts);
    if (name == "lemma3")
        return suite_lemma3(opts);
    if (name == "lemma4")
        return suite_lemma4(opts);
    if (name == "bounds")
        return suite_bounds(opts);
    if (name == "hull")
        return suite_hull(opts);
    throw ArgumentError("unknown suite '" + name + "'");
}

} // namespace bmhull
