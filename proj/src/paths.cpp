#include "bmhull/paths.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bmhull/errors.hpp"

namespace bmhull {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times))
{
    if (times_.empty())
        throw ArgumentError("TimeGrid: empty grid");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        const double t = times_[i];
        if (!(t >= 0.0 && t <= 1.0))
            throw ArgumentError("TimeGrid: time " + std::to_string(t) + " outside [0,1]");
        if (i > 0 && !(t > times_[i - 1]))
            throw ArgumentError("TimeGrid: times must be strictly increasing");
    }
}

TimeGrid TimeGrid::uniform(double t0, double t1, int per_unit)
{
    if (per_unit < 1)
        throw ArgumentError("TimeGrid::uniform: per_unit must be >= 1");
    if (!(t1 > t0))
        throw ArgumentError("TimeGrid::uniform: need t0 < t1");
    const auto cells = std::max<long>(1, static_cast<long>(std::ceil((t1 - t0) * per_unit - 1e-9)));
    std::vector<double> t(static_cast<std::size_t>(cells) + 1);
    const double h = (t1 - t0) / static_cast<double>(cells);
    for (long k = 0; k < cells; ++k)
        t[static_cast<std::size_t>(k)] = t0 + static_cast<double>(k) * h;
    t.back() = t1;
    return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::merge(const TimeGrid& a, std::span<const double> extra)
{
    std::vector<double> t(a.times_);
    t.insert(t.end(), extra.begin(), extra.end());
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return TimeGrid(std::move(t));
}

std::size_t TimeGrid::index_of(double t) const
{
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it == times_.end() || *it != t)
        throw ArgumentError("TimeGrid: time " + std::to_string(t) + " is not a grid point");
    return static_cast<std::size_t>(it - times_.begin());
}

std::pair<std::size_t, std::size_t> TimeGrid::range(double a, double b) const
{
    auto lo = std::lower_bound(times_.begin(), times_.end(), a);
    auto hi = std::upper_bound(times_.begin(), times_.end(), b);
    return {static_cast<std::size_t>(lo - times_.begin()), static_cast<std::size_t>(hi - times_.begin())};
}

PathSample sample_brownian(int dim, const TimeGrid& grid, RandomStream& rng)
{
    if (dim <= 0)
        throw ArgumentError("sample_brownian: dim must be positive");
    std::vector<double> coords(grid.size() * static_cast<std::size_t>(dim));
    std::vector<double> cur(static_cast<std::size_t>(dim), 0.0);
    double prev_t = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double dt = grid[k] - prev_t;
        if (dt > 0.0) {
            const double sd = std::sqrt(dt);
            for (int c = 0; c < dim; ++c)
                cur[c] += sd * rng.gaussian();
        }
        std::copy(cur.begin(), cur.end(), coords.begin() + static_cast<std::ptrdiff_t>(k * dim));
        prev_t = grid[k];
    }
    return {grid, PointSet(dim, std::move(coords))};
}

PathSample sample_bridge(const BridgeSpec& spec, int dim, const TimeGrid& grid, RandomStream& rng)
{
    if (dim <= 0)
        throw ArgumentError("sample_bridge: dim must be positive");
    if (!(spec.s1 < spec.s2))
        throw ArgumentError("sample_bridge: need s1 < s2");
    if (static_cast<int>(spec.a.size()) != dim || static_cast<int>(spec.b.size()) != dim)
        throw ArgumentError("sample_bridge: endpoint dimension mismatch");
    for (double x : spec.a)
        if (!std::isfinite(x))
            throw ArgumentError("sample_bridge: endpoint not finite");
    for (double x : spec.b)
        if (!std::isfinite(x))
            throw ArgumentError("sample_bridge: endpoint not finite");
    if (grid.front() != spec.s1 || grid.back() != spec.s2)
        throw ArgumentError("sample_bridge: grid must start at s1 and end at s2");

    const std::size_t m = grid.size();
    std::vector<double> coords(m * static_cast<std::size_t>(dim));
    std::copy(spec.a.begin(), spec.a.end(), coords.begin());
    std::vector<double> cur(spec.a);
    for (std::size_t k = 1; k + 1 < m; ++k) {
        const double tp = grid[k - 1];
        const double t = grid[k];
        const double rest = spec.s2 - tp;
        const double w = (t - tp) / rest;
        const double sd = std::sqrt((t - tp) * (spec.s2 - t) / rest);
        for (int c = 0; c < dim; ++c)
            cur[c] += w * (spec.b[c] - cur[c]) + sd * rng.gaussian();
        std::copy(cur.begin(), cur.end(), coords.begin() + static_cast<std::ptrdiff_t>(k * dim));
    }
    if (m > 1)
        std::copy(spec.b.begin(), spec.b.end(), coords.begin() + static_cast<std::ptrdiff_t>((m - 1) * dim));
    return {grid, PointSet(dim, std::move(coords))};
}

} // namespace bmhull
