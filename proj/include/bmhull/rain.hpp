#pragma once

#include <vector>

#include "bmhull/paths.hpp"
#include "bmhull/rng.hpp"

namespace bmhull {

struct RainPoint
{
    double x;
    double y;
};

/// Unit-intensity Poisson process on [0,1] x [0, y_cap], stored sorted by y.
struct Rain
{
    std::vector<RainPoint> points;
    double y_cap = 0.0;
};

/// Sorted level set {x : y <= alpha} together with 0 and 1.
struct RainLevel
{
    double alpha = 0.0;
    std::vector<double> times;

    TimeGrid grid() const { return TimeGrid(times); }
};

Rain generate_rain(double y_cap, RandomStream& rng);

RainLevel level(const Rain& rain, double alpha);

/// Every t in [a, b] has a level time within phi(alpha) / alpha.
bool check_N(const RainLevel& levelset, double alpha, double a, double b);

/// check_N and check_Y on [a, b].
bool check_R(const RainLevel& levelset, const PathSample& path, double alpha, double a, double b, int n_dim);

} // namespace bmhull
