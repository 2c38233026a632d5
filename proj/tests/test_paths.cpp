#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bmhull/errors.hpp"
#include "bmhull/estimate.hpp"
#include "bmhull/paths.hpp"

using namespace bmhull;

namespace {

EstimatorConfig cfg(std::uint64_t n, std::uint64_t seed = 11)
{
    EstimatorConfig c;
    c.replicas = n;
    c.master_seed = seed;
    return c;
}

bool within(const Estimate& e, double target, double k = 3.0) { return std::abs(e.mean - target) <= k * e.std_error; }

PathSample random_path(int dim, int points, std::uint64_t seed)
{
    RandomStream rng(seed, 3);
    return sample_brownian(dim, TimeGrid::uniform(0.0, 1.0, points), rng);
}

} // namespace

TEST_CASE("grid {0} gives the origin")
{
    RandomStream rng(1, 1);
    const PathSample p = sample_brownian(2, TimeGrid({0.0}), rng);
    REQUIRE(p.size() == 1);
    CHECK(p.at(0)[0] == 0.0);
    CHECK(p.at(0)[1] == 0.0);
}

TEST_CASE("E|B(1)|^2 = d")
{
    const Estimate e = run_replicas(cfg(100000), tag_of("t_second_moment"), false, [](std::uint64_t, RandomStream& rng) {
        const PathSample p = sample_brownian(3, TimeGrid({0.0, 1.0}), rng);
        double s = 0.0;
        for (double x : p.at(1))
            s += x * x;
        return s;
    });
    CHECK(within(e, 3.0));
}

TEST_CASE("Cov(B(1/4), B(1)) = 1/4")
{
    const Estimate e = run_replicas(cfg(100000), tag_of("t_cov"), false, [](std::uint64_t, RandomStream& rng) {
        const PathSample p = sample_brownian(1, TimeGrid({0.0, 0.25, 1.0}), rng);
        return p.at(1)[0] * p.at(2)[0];
    });
    CHECK(within(e, 0.25));
}

TEST_CASE("bridge endpoints are pinned exactly")
{
    RandomStream rng(5, 5);
    const BridgeSpec spec{{0.3, -1.2}, {2.0, 0.5}, 0.2, 0.7};
    const PathSample p = sample_bridge(spec, 2, TimeGrid({0.2, 0.7}), rng);
    CHECK(p.at(0)[0] == 0.3);
    CHECK(p.at(0)[1] == -1.2);
    CHECK(p.at(1)[0] == 2.0);
    CHECK(p.at(1)[1] == 0.5);
    const PathSample q = sample_bridge(spec, 2, TimeGrid::uniform(0.2, 0.7, 100), rng);
    CHECK(q.at(q.size() - 1)[0] == 2.0);
}

TEST_CASE("bridge variance t(1-t), and agreement with B(t) - t B(1)")
{
    const Estimate mid = run_replicas(cfg(100000), tag_of("t_bridge_var"), false, [](std::uint64_t, RandomStream& rng) {
        const PathSample p = sample_bridge({{0.0}, {0.0}, 0.0, 1.0}, 1, TimeGrid({0.0, 0.5, 1.0}), rng);
        return p.at(1)[0] * p.at(1)[0];
    });
    CHECK(within(mid, 0.25));

    // Independent construction from an unconditioned path.
    const Estimate sub = run_replicas(cfg(100000), tag_of("t_bridge_sub"), false, [](std::uint64_t, RandomStream& rng) {
        const PathSample p = sample_brownian(1, TimeGrid({0.0, 0.3, 1.0}), rng);
        const double x = p.at(1)[0] - 0.3 * p.at(2)[0];
        return x * x;
    });
    const Estimate via = run_replicas(cfg(100000), tag_of("t_bridge_via"), false, [](std::uint64_t, RandomStream& rng) {
        const PathSample p = sample_bridge({{0.0}, {0.0}, 0.0, 1.0}, 1, TimeGrid::uniform(0.0, 1.0, 10), rng);
        const double x = p.at_time(p.grid[3])[0];
        return x * x;
    });
    CHECK(within(sub, 0.21));
    CHECK(within(via, 0.21));
    CHECK(std::abs(sub.mean - via.mean) <= 3.0 * std::hypot(sub.std_error, via.std_error));
}

TEST_CASE("bridge rejects a grid that misses the endpoints")
{
    RandomStream rng(1, 1);
    CHECK_THROWS_AS(sample_bridge({{0.0}, {0.0}, 0.0, 1.0}, 1, TimeGrid({0.0, 0.5}), rng), ArgumentError);
}

TEST_CASE("modulus examples")
{
    RandomStream rng(1, 1);
    const PathSample one = sample_brownian(2, TimeGrid({0.0}), rng);
    CHECK(modulus(one, 1.0) == 0.0);
    const PathSample two{TimeGrid({0.0, 1.0}), PointSet(1, {0.0, 1.7})};
    CHECK(modulus(two, 1.0) == doctest::Approx(1.7).epsilon(1e-15));
    CHECK(modulus(two, 0.5) == 0.0);
}

TEST_CASE("check_Y examples")
{
    const PathSample flat{TimeGrid::uniform(0.0, 1.0, 50), PointSet(2, std::vector<double>(102, 0.3))};
    CHECK(check_Y(flat, 10.0, 0.0, 1.0, 2));
    const PathSample jump{TimeGrid({0.0, 0.5, 0.5 + 1e-6, 1.0}), PointSet(1, {0.0, 0.0, 10.0, 10.0})};
    CHECK_FALSE(check_Y(jump, 10.0, 0.0, 1.0, 2));
    CHECK_FALSE(check_Y_reference(jump, 10.0, 0.0, 1.0, 2));
    // Outside [a, b] the jump is not seen.
    CHECK(check_Y(jump, 10.0, 0.6, 1.0, 2));
}

TEST_CASE("parallel kernels agree with the all-pairs references")
{
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const int dim = 1 + static_cast<int>(seed % 3);
        const PathSample p = random_path(dim, 64 + static_cast<int>(seed * 13 % 200), seed);
        for (double delta : {1e-4, 0.01, 0.1, 0.5, 1.0})
            CHECK(modulus(p, delta) == modulus_reference(p, delta));
        for (double alpha : {2.0, 5.0, 20.0, 100.0})
            for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{0.2, 0.6}})
                CHECK(check_Y(p, alpha, a, b, 2) == check_Y_reference(p, alpha, a, b, 2));
    }
}
