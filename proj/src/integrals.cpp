#include "bmhull/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bmhull/errors.hpp"
#include "bmhull/estimate.hpp"
#include "bmhull/wedge.hpp"

namespace bmhull {

double phi(double alpha)
{
    if (!(alpha > 1.0))
        throw ArgumentError("phi: alpha must exceed 1");
    return std::exp(std::sqrt(std::log(alpha)));
}

double enlargement(double alpha)
{
    const double p = phi(alpha);
    return p * p / std::sqrt(alpha);
}

double gamma_ak(double alpha, double kappa) { return lemma3_constant(kappa) * enlargement(alpha); }

ZaRegion::ZaRegion(double a_, int n_) : a(a_), n(n_)
{
    if (!(a > 0.0 && a < std::exp(-1.0)))
        throw ArgumentError("ZaRegion: a must lie in (0, 1/e)");
    if (n < 1)
        throw ArgumentError("ZaRegion: n must be positive");
}

bool ZaRegion::contains(std::span<const double> t) const
{
    if (t.size() != static_cast<std::size_t>(2 * n))
        throw ArgumentError("ZaRegion: expected 2n times");
    if (t.front() < a || 1.0 - t.back() < a)
        return false;
    for (std::size_t j = 1; j < t.size(); ++j)
        if (t[j] - t[j - 1] < a)
            return false;
    return true;
}

namespace {

void check_a(double a)
{
    if (!(a > 0.0 && a <= std::exp(-1.0) * (1.0 + 1e-15)))
        throw ArgumentError("expected 0 < a <= 1/e");
}

void check_quadrature(double a, int n, int resolution)
{
    check_a(a);
    if (n < 1 || n > 2)
        throw ArgumentError("integral_Za_quadrature: n must be 1 or 2");
    if (resolution < 32)
        throw ArgumentError("integral_Za_quadrature: resolution must be at least 32");
}

// Midpoint weights h / y_k on [a, 1].
std::vector<double> weights(double a, int resolution)
{
    const double h = (1.0 - a) / resolution;
    std::vector<double> w(static_cast<std::size_t>(resolution));
    for (int k = 0; k < resolution; ++k)
        w[k] = h / (a + (k + 0.5) * h);
    return w;
}

double slab(const std::vector<double>& w, int axes)
{
    // Sum over the inner 2n - 1 axes; every tensor node is visited.
    double s = 0.0;
    const std::size_t r = w.size();
    switch (axes) {
    case 1:
        for (std::size_t i = 0; i < r; ++i)
            s += w[i];
        break;
    case 3:
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                const double wij = w[i] * w[j];
                for (std::size_t k = 0; k < r; ++k)
                    s += wij * w[k];
            }
        break;
    default:
        throw ArgumentError("integral_Za_quadrature: unsupported dimension");
    }
    return s;
}

} // namespace

double integral_Za_bound(double a, int n)
{
    check_a(a);
    if (n < 1)
        throw ArgumentError("integral_Za_bound: n must be positive");
    return std::pow(std::abs(std::log(a)), 2 * n);
}

double integral_Za_quadrature(double a, int n, int resolution)
{
    check_quadrature(a, n, resolution);
    const auto w = weights(a, resolution);
    std::vector<double> part(w.size());
    const long r = static_cast<long>(w.size());
    const int axes = 2 * n - 1;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < r; ++i)
        part[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] * slab(w, axes);
    return std::accumulate(part.begin(), part.end(), 0.0);
}

double integral_Za_quadrature_reference(double a, int n, int resolution)
{
    check_quadrature(a, n, resolution);
    const auto w = weights(a, resolution);
    double total = 0.0;
    for (double x : w)
        total += x * slab(w, 2 * n - 1);
    return total;
}

Estimate measure_Za_complement(double a, int n, const EstimatorConfig& config)
{
    const ZaRegion region(a, n);
    return run_replicas(config, tag_of("measure_Za_complement"), true, [&](std::uint64_t, RandomStream& rng) {
        std::vector<double> t(static_cast<std::size_t>(2 * n));
        for (double& x : t)
            x = rng.uniform();
        // r and s are each n sorted uniforms; their merge is the sorted union.
        std::sort(t.begin(), t.end());
        return region.contains(t) ? 0.0 : 1.0;
    });
}

double Za_complement_union_bound(double a, int n)
{
    double fact = 1.0;
    for (int k = 2; k <= 2 * n; ++k)
        fact *= k;
    return (2 * n + 1) * a * fact;
}

Estimate measure_single_constraint(double a, int n, const EstimatorConfig& config)
{
    if (!(a >= 0.0 && a <= 1.0))
        throw ArgumentError("measure_single_constraint: a must lie in [0,1]");
    if (n < 1)
        throw ArgumentError("measure_single_constraint: n must be positive");
    return run_replicas(config, tag_of("measure_single_constraint"), true, [&](std::uint64_t, RandomStream& rng) {
        double x1 = 0.0;
        for (int k = 0; k < 2 * n; ++k) {
            const double u = rng.uniform();
            if (k == 0)
                x1 = u;
        }
        return x1 <= a ? 1.0 : 0.0;
    });
}

namespace {

void check_times(std::span<const double> t, double alpha, int n)
{
    if (n < 1)
        throw ArgumentError("rhs_bound: n must be positive");
    if (t.size() != static_cast<std::size_t>(2 * n))
        throw ArgumentError("rhs_bound: expected 2n times");
    if (!(alpha > 1.0))
        throw ArgumentError("rhs_bound: alpha must exceed 1");
    if (!(t.front() > 0.0) || !(t.back() < 1.0))
        throw ArgumentError("rhs_bound: times must lie strictly inside (0,1)");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1]))
            throw ArgumentError("rhs_bound: times must be strictly increasing");
}

} // namespace

double rhs_bound_second_term(std::span<const double> t, double alpha, double kappa, int n)
{
    check_times(t, alpha, n);
    double prod = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i)
        prod /= t[i] - t[i - 1];
    return std::pow(alpha, -2.0 * n - kappa / (16000.0 * n)) / std::sqrt(t.front() * (1.0 - t.back())) * prod;
}

double rhs_bound(std::span<const double> t, double alpha, double kappa, int n)
{
    return std::pow(alpha, -2.0 * n - 1.0) + rhs_bound_second_term(t, alpha, kappa, n);
}

double binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return std::round(r);
}

double final_assembly(double alpha, double kappa, int n)
{
    if (!(alpha > 1.0))
        throw ArgumentError("final_assembly: alpha must exceed 1");
    if (n < 1)
        throw ArgumentError("final_assembly: n must be positive");
    const double a = std::pow(alpha, -2.0 * n - 1.0);
    if (!(a < std::exp(-1.0)) || a == 0.0)
        return std::exp(final_assembly_log(std::log(alpha), kappa, n));
    return 1.0 / alpha + std::pow(alpha, -kappa / (16000.0 * n)) * integral_Za_bound(a, n) * binomial(2 * n, n) +
           std::pow(alpha, 2.0 * n) * (2 * n + 1) * a;
}

double final_assembly_log(double log_alpha, double kappa, int n)
{
    if (!(log_alpha > 0.0))
        throw ArgumentError("final_assembly_log: log alpha must be positive");
    if (n < 1)
        throw ArgumentError("final_assembly_log: n must be positive");
    const double l1 = -log_alpha;
    const double l2 = -kappa / (16000.0 * n) * log_alpha + 2.0 * n * std::log((2.0 * n + 1.0) * log_alpha) +
                      std::log(binomial(2 * n, n));
    const double l3 = std::log(2.0 * n + 1.0) - log_alpha;
    const double m = std::max({l1, l2, l3});
    return m + std::log(std::exp(l1 - m) + std::exp(l2 - m) + std::exp(l3 - m));
}

} // namespace bmhull
