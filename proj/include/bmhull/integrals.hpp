#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bmhull {

struct EstimatorConfig;
struct Estimate;

/// exp(sqrt(log alpha)), the sub-polynomial scale used throughout. alpha > 1.
double phi(double alpha);

/// phi(alpha)^2 / sqrt(alpha): the edge offset of the enlarged wedge and the
/// slack in the relaxed facet events.
double enlargement(double alpha);

/// M_kappa * phi(alpha)^2 / sqrt(alpha), with M_kappa = lemma3_constant(kappa).
double gamma_ak(double alpha, double kappa);

/// Region of merged time tuples whose first point, last gap to 1 and every
/// consecutive gap are at least `a`.
struct ZaRegion
{
    double a;
    int n;

    ZaRegion(double a, int n);
    /// `t` holds 2n increasing times in (0,1).
    bool contains(std::span<const double> t) const;
};

/// |log a|^{2n}: the integral of prod 1/y_j over [a,1]^{2n}.
double integral_Za_bound(double a, int n);

/// Tensor-product composite midpoint rule for the same integral with
/// `resolution` cells per axis. n <= 2, resolution >= 32.
double integral_Za_quadrature(double a, int n, int resolution);

/// Serial reference of integral_Za_quadrature (same nodes, same summation
/// order per outer slab).
double integral_Za_quadrature_reference(double a, int n, int resolution);

/// Monte Carlo fraction of (r, s) uniform on Delta_n x Delta_n whose merged
/// times fall outside Z_a. Bernoulli estimate.
Estimate measure_Za_complement(double a, int n, const EstimatorConfig& config);

/// Union bound on that fraction: (2n+1) * a * (2n)!, i.e. the per-constraint
/// measure a over Delta_{2n} renormalized by vol(Delta_{2n}) = 1/(2n)!.
double Za_complement_union_bound(double a, int n);

/// Fraction of uniform points of [0,1]^{2n} with x_1 <= a (expected: a).
Estimate measure_single_constraint(double a, int n, const EstimatorConfig& config);

/// alpha^{-2n-1} + alpha^{-2n-kappa/(16000n)} / sqrt(t_1 (1-t_{2n}))
///   * prod_{i=2}^{2n} 1/(t_i - t_{i-1}).
/// `t` must be strictly increasing inside (0,1) and have 2n entries.
double rhs_bound(std::span<const double> t, double alpha, double kappa, int n);

/// Second (time-dependent) term of rhs_bound alone.
double rhs_bound_second_term(std::span<const double> t, double alpha, double kappa, int n);

/// Closed-form surrogate of the assembled bound
///   alpha^{-1} + alpha^{-kappa/(16000n)} |log a|^{2n} binom(2n,n)
///   + alpha^{2n} (2n+1) a,  a = alpha^{-2n-1}.
double final_assembly(double alpha, double kappa, int n = 2);

/// Same quantity with alpha given through log(alpha), for alpha beyond the
/// double range. Returns the natural log of the bound.
double final_assembly_log(double log_alpha, double kappa, int n = 2);

double binomial(int n, int k);

} // namespace bmhull
