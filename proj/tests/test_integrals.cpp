#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bmhull/errors.hpp"
#include "bmhull/estimate.hpp"
#include "bmhull/integrals.hpp"

using namespace bmhull;

namespace {

EstimatorConfig cfg(std::uint64_t n)
{
    EstimatorConfig c;
    c.replicas = n;
    c.master_seed = 21;
    return c;
}

// Log-domain evaluation of the time-dependent term, written independently.
double log_second_term(const std::vector<double>& t, double alpha, double kappa, int n)
{
    double s = (-2.0 * n - kappa / (16000.0 * n)) * std::log(alpha) - 0.5 * std::log(t.front()) -
               0.5 * std::log1p(-t.back());
    for (std::size_t i = 1; i < t.size(); ++i)
        s -= std::log(t[i] - t[i - 1]);
    return s;
}

} // namespace

TEST_CASE("phi and enlargement")
{
    CHECK(phi(std::exp(4.0)) == doctest::Approx(std::exp(2.0)));
    CHECK(enlargement(std::exp(4.0)) == doctest::Approx(std::exp(2.0)));
    CHECK_THROWS_AS(phi(1.0), ArgumentError);
}

TEST_CASE("closed form of the Z_a integral")
{
    CHECK(integral_Za_bound(std::exp(-1.0), 1) == doctest::Approx(1.0));
    CHECK(integral_Za_bound(std::exp(-2.0), 1) == doctest::Approx(4.0));
    CHECK(integral_Za_bound(std::exp(-1.0), 2) == doctest::Approx(1.0));
    CHECK(integral_Za_bound(std::exp(-2.0), 2) == doctest::Approx(16.0));
}

TEST_CASE("quadrature examples")
{
    CHECK(std::abs(integral_Za_quadrature(std::exp(-1.0), 1, 512) - 1.0) <= 1e-3);
    CHECK(std::abs(integral_Za_quadrature(std::exp(-2.0), 1, 512) - 4.0) <= 1e-2);
    CHECK_THROWS_AS(integral_Za_quadrature(0.1, 3, 64), ArgumentError);
    CHECK_THROWS_AS(integral_Za_quadrature(0.1, 1, 16), ArgumentError);
}

TEST_CASE("parallel quadrature equals the serial reference bit for bit")
{
    for (int n : {1, 2})
        for (int res : {32, 48, 64})
            CHECK(integral_Za_quadrature(0.05, n, res) == integral_Za_quadrature_reference(0.05, n, res));
}

TEST_CASE("doubling the resolution at least halves the error")
{
    for (int n : {1, 2})
        for (double a : {std::exp(-1.0), std::exp(-2.0), 0.01}) {
            const double exact = integral_Za_bound(a, n);
            const double e1 = std::abs(integral_Za_quadrature(a, n, 32) - exact);
            const double e2 = std::abs(integral_Za_quadrature(a, n, 64) - exact);
            CHECK(e2 <= 0.5 * e1);
        }
}

TEST_CASE("measure of the Z_a complement")
{
    const Estimate tiny = measure_Za_complement(1e-8, 2, cfg(20000));
    CHECK(tiny.covers(0.0));
    for (int n : {1, 2})
        for (double a : {0.01, 0.05}) {
            const Estimate e = measure_Za_complement(a, n, cfg(50000));
            // All 2n+1 spacings of 2n uniforms exceed a with probability (1-(2n+1)a)^{2n}.
            const double exact = 1.0 - std::pow(1.0 - (2.0 * n + 1.0) * a, 2.0 * n);
            CHECK(std::abs(e.mean - exact) <= 3.0 * e.std_error);
            CHECK(exact <= Za_complement_union_bound(a, n));
            CHECK(e.mean <= Za_complement_union_bound(a, n) + 3.0 * e.std_error);
        }
}

TEST_CASE("single constraint has measure a")
{
    for (double a : {0.05, 0.3}) {
        const Estimate e = measure_single_constraint(a, 2, cfg(100000));
        CHECK(std::abs(e.mean - a) <= 3.0 * e.std_error);
    }
}

TEST_CASE("rhs_bound: log-domain evaluation, reversal symmetry, monotone in kappa")
{
    RandomStream rng(2, 2);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 3;
        std::vector<double> t(static_cast<std::size_t>(2 * n));
        for (double& x : t)
            x = rng.uniform();
        std::sort(t.begin(), t.end());
        const double alpha = std::exp(1.0 + 10.0 * rng.uniform()), kappa = 3.0 * rng.uniform() + 0.01;
        const double direct = rhs_bound_second_term(t, alpha, kappa, n);
        CHECK(std::log(direct) == doctest::Approx(log_second_term(t, alpha, kappa, n)).epsilon(1e-10));
        CHECK(rhs_bound(t, alpha, kappa, n) == doctest::Approx(std::pow(alpha, -2.0 * n - 1.0) + direct));

        std::vector<double> rev;
        for (auto it = t.rbegin(); it != t.rend(); ++it)
            rev.push_back(1.0 - *it);
        CHECK(rhs_bound_second_term(rev, alpha, kappa, n) == doctest::Approx(direct).epsilon(1e-10));
        CHECK(rhs_bound_second_term(t, alpha, kappa + 0.5, n) < direct);
    }
    CHECK_THROWS_AS(rhs_bound(std::vector<double>{0.5, 0.5}, 10.0, 1.0, 1), ArgumentError);
    CHECK_THROWS_AS(rhs_bound(std::vector<double>{0.0, 0.5}, 10.0, 1.0, 1), ArgumentError);
    CHECK_THROWS_AS(rhs_bound(std::vector<double>{0.2, 0.5, 0.7}, 10.0, 1.0, 1), ArgumentError);
}

TEST_CASE("final assembly: direct and log forms agree")
{
    for (double alpha : {1e3, 1e6, 1e9, 1e12, 1e40})
        for (double kappa : {0.5, 1.0, 3.0})
            CHECK(std::log(final_assembly(alpha, kappa, 2)) ==
                  doctest::Approx(final_assembly_log(std::log(alpha), kappa, 2)).epsilon(1e-12));
    CHECK(binomial(4, 2) == 6.0);
    CHECK(binomial(10, 3) == 120.0);
    CHECK(binomial(3, 5) == 0.0);
}

TEST_CASE("final assembly tends to 0 once the polylog factor is beaten")
{
    // d/dL of the middle term's log is -1/32000 + 4/L: decreasing for L > 128000.
    double prev = final_assembly_log(2e5, 1.0, 2);
    for (double L : {4e5, 8e5, 1.6e6, 1e7}) {
        const double v = final_assembly_log(L, 1.0, 2);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < std::log(1e-2));
    // Below that scale the polylog factor dominates.
    CHECK(final_assembly_log(std::log(1e40), 1.0, 2) > std::log(1e-2));
}
