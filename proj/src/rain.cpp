#include "bmhull/rain.hpp"

#include <algorithm>
#include <cmath>

#include "bmhull/errors.hpp"
#include "bmhull/integrals.hpp"

namespace bmhull {

Rain generate_rain(double y_cap, RandomStream& rng)
{
    if (!(y_cap > 0.0) || !std::isfinite(y_cap))
        throw ArgumentError("generate_rain: y_cap must be positive and finite");
    // Heights are the arrival times of a unit-rate process; positions are
    // independent uniforms.
    Rain rain;
    rain.y_cap = y_cap;
    double y = rng.exponential();
    while (y <= y_cap) {
        rain.points.push_back({rng.uniform(), y});
        y += rng.exponential();
    }
    return rain;
}

RainLevel level(const Rain& rain, double alpha)
{
    if (!(alpha >= 0.0))
        throw ArgumentError("level: alpha must be nonnegative");
    if (alpha > rain.y_cap)
        throw ArgumentError("level: alpha exceeds the realized height y_cap");
    RainLevel out;
    out.alpha = alpha;
    out.times.push_back(0.0);
    out.times.push_back(1.0);
    for (const RainPoint& p : rain.points) {
        if (p.y > alpha)
            break;
        out.times.push_back(p.x);
    }
    std::sort(out.times.begin(), out.times.end());
    out.times.erase(std::unique(out.times.begin(), out.times.end()), out.times.end());
    return out;
}

bool check_N(const RainLevel& levelset, double alpha, double a, double b)
{
    if (!(alpha > 1.0))
        throw ArgumentError("check_N: alpha must exceed 1");
    if (!(a <= b) || a < 0.0 || b > 1.0)
        throw ArgumentError("check_N: invalid interval");
    const auto& t = levelset.times;
    if (t.empty())
        return false;
    const double h = phi(alpha) / alpha;
    // [a, b] is covered by the union of [t_k - h, t_k + h] iff the first
    // covering interval reaches a, consecutive relevant gaps are at most 2h,
    // and the last one reaches b.
    auto lo = std::lower_bound(t.begin(), t.end(), a - h);
    auto hi = std::upper_bound(t.begin(), t.end(), b + h);
    if (lo == hi)
        return false;
    if (*lo - h > a)
        return false;
    if (*(hi - 1) + h < b)
        return false;
    for (auto it = lo + 1; it != hi; ++it)
        if (*it - *(it - 1) > 2.0 * h)
            return false;
    return true;
}

bool check_R(const RainLevel& levelset, const PathSample& path, double alpha, double a, double b, int n_dim)
{
    return check_N(levelset, alpha, a, b) && check_Y(path, alpha, a, b, n_dim);
}

} // namespace bmhull
