#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "bmhull/errors.hpp"
#include "bmhull/estimate.hpp"
#include "bmhull/integrals.hpp"
#include "bmhull/mc.hpp"

using namespace bmhull;

namespace {

constexpr double kPi = std::numbers::pi;

EstimatorConfig cfg(std::uint64_t n, std::uint64_t seed = 5)
{
    EstimatorConfig c;
    c.replicas = n;
    c.master_seed = seed;
    return c;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_CASE("summarize: exact one-sided bounds at 0 and N successes")
{
    const EstimatorConfig c = cfg(1000);
    const Estimate none = summarize(0.0, 0.0, 1000, true, c);
    CHECK(none.ci_low == 0.0);
    CHECK(none.ci_high == doctest::Approx(1.0 - std::pow(0.01, 1e-3)));
    const Estimate all = summarize(1000.0, 1000.0, 1000, true, c);
    CHECK(all.ci_high == 1.0);
    CHECK(all.ci_low == doctest::Approx(std::pow(0.01, 1e-3)));
    // 10^5 replicas with no successes: upper bound about 4.6e-5.
    CHECK(summarize(0.0, 0.0, 100000, true, c).ci_high == doctest::Approx(4.6e-5).epsilon(1e-2));
    CHECK(normal_quantile_two_sided(0.95) == doctest::Approx(1.959964));
}

TEST_CASE("interval calibration over meta-trials")
{
    int covered = 0;
    for (std::uint64_t trial = 0; trial < 500; ++trial) {
        EstimatorConfig c = cfg(400, 1000 + trial);
        c.confidence_level = 0.9;
        const Estimate e = run_replicas(c, tag_of("t_calibration"), true,
                                        [](std::uint64_t, RandomStream& rng) { return rng.uniform() < 0.3 ? 1.0 : 0.0; });
        covered += e.covers(0.3);
    }
    // Binomial(500, 0.9) has standard deviation about 6.7.
    CHECK(covered >= 430);
    CHECK(covered <= 470);
}

TEST_CASE("results do not depend on the worker count")
{
    auto kernel = [](std::uint64_t, RandomStream& rng) { return rng.gaussian() + rng.uniform(); };
    EstimatorConfig c = cfg(1000);
    c.workers = 1;
    const Estimate one = run_replicas(c, tag_of("t_workers"), false, kernel);
    c.workers = 4;
    const Estimate four = run_replicas(c, tag_of("t_workers"), false, kernel);
    c.execution = Execution::serial;
    const Estimate serial = run_replicas(c, tag_of("t_workers"), false, kernel);
    CHECK(same_bits(one.mean, four.mean));
    CHECK(same_bits(one.std_error, four.std_error));
    CHECK(same_bits(one.mean, serial.mean));

    EstimatorConfig s = cfg(3000);
    s.workers = 1;
    const Estimate a = stay_prob_wedge(Wedge2D({0, 0}, 0.0, kPi / 2), {1, 0}, 1.0, s);
    s.workers = 3;
    const Estimate b = stay_prob_wedge(Wedge2D({0, 0}, 0.0, kPi / 2), {1, 0}, 1.0, s);
    CHECK(same_bits(a.mean, b.mean));
}

TEST_CASE("exceptions in replicas propagate")
{
    CHECK_THROWS_AS(run_replicas(cfg(500), tag_of("t_throw"), false,
                                 [](std::uint64_t i, RandomStream&) -> double {
                                     if (i == 321)
                                         throw ArgumentError("boom");
                                     return 0.0;
                                 }),
                    ArgumentError);
}

TEST_CASE("half-plane stay probability")
{
    const Wedge2D half({0, 0}, 0.0, kPi / 2);
    const Estimate e = stay_prob_wedge(half, {1, 0}, 1.0, cfg(20000));
    CHECK(std::abs(e.mean - (2.0 * normal_cdf(1.0) - 1.0)) <= 3.0 * e.std_error);
    CHECK(stay_prob_wedge(half, {1, 0}, 1e-6, cfg(2000)).mean >= 0.999);
    CHECK_THROWS_AS(stay_prob_wedge(half, {-1, 0}, 1.0, cfg(10)), ArgumentError);
}

TEST_CASE("bridge non-crossing")
{
    const Wedge2D half({0, 0}, 0.0, kPi / 2);
    const Estimate e = bridge_stay_prob(half, {1, 0}, {1, 0}, cfg(20000));
    CHECK(std::abs(e.mean - (1.0 - std::exp(-2.0))) <= 3.0 * e.std_error);
    const Wedge2D quarter({0, 0}, kPi / 4, kPi / 4);
    CHECK(bridge_stay_prob(quarter, {10, 10}, {10, 10}, cfg(5000)).mean >= 0.999);
}

TEST_CASE("bound formulas")
{
    CHECK(bridge_bound(1e4, 0.1, 1.0, 0.5, 1.0) == doctest::Approx(std::pow(1e4, 0.1) * std::pow(0.5, 1.05)));
    CHECK(bridge_bound(1e4, 0.1, 1.0, 0.0, 1.0) == doctest::Approx(std::pow(1e4, 0.1) * std::pow(1e-4, 1.05)));
    HGeometry g = HGeometry::canonical(1.0);
    CHECK(g.theta() == doctest::Approx(1.0));
    g.s1 = 0.2;
    g.s2 = 0.7;
    g.eps = 0.3;
    const double alpha = 1e8;
    CHECK(conditional_H_bound(HCase::interior, g, alpha) == doctest::Approx(std::pow(alpha, 0.3) / (0.5 * alpha)));
    CHECK(conditional_H_bound(HCase::edge, g, alpha) == doctest::Approx(std::pow(alpha, 0.3) / std::sqrt(0.5 * alpha)));
    CHECK(conditional_H_bound(HCase::edge_special, g, alpha) ==
          doctest::Approx(conditional_H_bound(HCase::edge, g, alpha) * std::pow(alpha, -1.0 / 1600.0)));
}

TEST_CASE("interval preconditions")
{
    HGeometry g = HGeometry::canonical(1.0);
    g.s1 = 0.0;
    g.s2 = 0.5;
    g.d1 = {0.5, 0.0};
    g.d2 = {0.5, 0.1};
    auto hyp = [&](HCase c) {
        try {
            conditional_H_prob(c, g, 1e12, cfg(10));
        } catch (const PreconditionError& e) {
            return e.hypothesis();
        }
        return std::string("none");
    };
    CHECK(hyp(HCase::interior) == "disttowedge");
    CHECK(hyp(HCase::edge) == "disttowedge");
    // Endpoint on an edge far from the tip: the special gap condition fails.
    const double beta = (kPi - 1.0) / 2.0;
    g.d1 = {3.0 * std::cos(beta), -3.0 * std::sin(beta)};
    g.d2 = {0.5, 0.0};
    g.s2 = 0.01;
    CHECK(hyp(HCase::edge_special) == "condj");
}

TEST_CASE("P(R^C) is a valid probability")
{
    const Estimate e = prob_R_complement(10.0, 2, cfg(2000));
    CHECK(e.mean >= 0.0);
    CHECK(e.mean <= 1.0);
    CHECK(e.ci_low <= e.mean);
    CHECK(e.mean <= e.ci_high);
}

TEST_CASE("Campbell: rain-only facets never exceed all facets")
{
    const CampbellResult r = campbell_check(6.0, 2, cfg(4000));
    CHECK(r.lhs.mean <= r.all_facets.mean);
    CHECK(r.lhs.overlaps(r.rhs));
}

TEST_CASE("discordant event is a sub-event of the relaxed facet events")
{
    const std::vector<double> r{0.2, 0.6}, s{0.4, 0.8};
    const DiscordantResult d = discordant_prob(r, s, 100.0, 1.0, cfg(2000));
    CHECK(d.estimate.mean <= d.tilde_only.mean);
    CHECK(d.estimate.successes <= d.tilde_only.successes);
    CHECK(d.bound > 0.0);
    CHECK_THROWS_AS(discordant_prob(r, {0.2, 0.9}, 100.0, 1.0, cfg(10)), ArgumentError);
}

TEST_CASE("relaxed facet events: direct and conditional product form agree")
{
    const std::vector<double> r{0.2, 0.6}, s{0.4, 0.8};
    const double alpha = std::exp(20.0);
    EstimatorConfig c = cfg(4000);
    c.grid_points_per_unit_time = 256;
    const DiscordantResult d = discordant_prob(r, s, alpha, 1.0, c);
    const Estimate p = tilde_events_product_form(r, s, alpha, c, 40);
    CHECK(std::abs(d.tilde_only.mean - p.mean) <= 4.0 * std::hypot(d.tilde_only.std_error, p.std_error));
}
