#include "bmhull/estimate.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bmhull/errors.hpp"

namespace bmhull {

void EstimatorConfig::validate() const
{
    if (replicas < 1)
        throw ArgumentError("EstimatorConfig: replicas must be positive");
    if (grid_points_per_unit_time < 2)
        throw ArgumentError("EstimatorConfig: grid resolution must be at least 2");
    if (!(confidence_level > 0.0 && confidence_level < 1.0))
        throw ArgumentError("EstimatorConfig: confidence level must lie in (0,1)");
    if (workers < 0)
        throw ArgumentError("EstimatorConfig: workers must be nonnegative");
}

int omp_max_threads_or_one()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

double normal_quantile_two_sided(double level)
{
    const boost::math::normal_distribution<double> nd;
    return boost::math::quantile(nd, 0.5 + level / 2.0);
}

double normal_cdf(double x)
{
    const boost::math::normal_distribution<double> nd;
    return boost::math::cdf(nd, x);
}

Estimate summarize(double sum, double sum_sq, std::uint64_t n, bool indicator, const EstimatorConfig& config)
{
    Estimate e;
    e.config = config;
    e.replicas = n;
    e.indicator = indicator;
    const double nd = static_cast<double>(n);
    e.mean = sum / nd;
    const double var = n > 1 ? std::max(0.0, (sum_sq - nd * e.mean * e.mean) / (nd - 1.0)) : 0.0;
    e.std_error = std::sqrt(var / nd);
    if (indicator) {
        e.successes = static_cast<std::uint64_t>(std::llround(sum));
        const double tail = 1.0 - config.confidence_level;
        if (e.successes == 0) {
            e.mean = 0.0;
            e.ci_low = 0.0;
            e.ci_high = 1.0 - std::pow(tail, 1.0 / nd);
            return e;
        }
        if (e.successes == n) {
            e.mean = 1.0;
            e.ci_low = std::pow(tail, 1.0 / nd);
            e.ci_high = 1.0;
            return e;
        }
    }
    const double z = normal_quantile_two_sided(config.confidence_level);
    e.ci_low = e.mean - z * e.std_error;
    e.ci_high = e.mean + z * e.std_error;
    if (indicator) {
        e.ci_low = std::max(0.0, e.ci_low);
        e.ci_high = std::min(1.0, e.ci_high);
    }
    return e;
}

Estimate scaled(const Estimate& e, double factor)
{
    if (!(factor > 0.0))
        throw ArgumentError("scaled: factor must be positive");
    Estimate out = e;
    out.mean *= factor;
    out.std_error *= factor;
    out.ci_low *= factor;
    out.ci_high *= factor;
    out.indicator = false;
    return out;
}

} // namespace bmhull
