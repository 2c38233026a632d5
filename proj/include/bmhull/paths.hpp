#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bmhull/geometry.hpp"
#include "bmhull/rng.hpp"

namespace bmhull {

/// Nonempty, strictly increasing evaluation times inside [0, 1].
class TimeGrid
{
  public:
    explicit TimeGrid(std::vector<double> times);

    /// Evenly spaced grid on [t0, t1] with ceil((t1 - t0) * per_unit) cells.
    static TimeGrid uniform(double t0, double t1, int per_unit);

    /// Sorted union of two grids (exact duplicates collapsed).
    static TimeGrid merge(const TimeGrid& a, std::span<const double> extra);

    const std::vector<double>& times() const { return times_; }
    std::size_t size() const { return times_.size(); }
    double operator[](std::size_t i) const { return times_[i]; }
    double front() const { return times_.front(); }
    double back() const { return times_.back(); }

    /// Index of `t` in the grid; throws if absent.
    std::size_t index_of(double t) const;

    /// Half-open index range [first, last) of grid times inside [a, b].
    std::pair<std::size_t, std::size_t> range(double a, double b) const;

  private:
    std::vector<double> times_;
};

/// A path realized on a grid: points[k] is the value at grid[k].
struct PathSample
{
    TimeGrid grid;
    PointSet points;

    int dim() const { return points.dim(); }
    std::size_t size() const { return grid.size(); }
    std::span<const double> at(std::size_t k) const { return points[k]; }
    /// Value at a time that must be on the grid.
    std::span<const double> at_time(double t) const { return points[grid.index_of(t)]; }
};

/// Endpoint data of a Brownian bridge X(s1) = a, X(s2) = b.
struct BridgeSpec
{
    Vec a;
    Vec b;
    double s1 = 0.0;
    double s2 = 1.0;
};

/// Standard Brownian motion started at B(0) = 0 evaluated on `grid`.
PathSample sample_brownian(int dim, const TimeGrid& grid, RandomStream& rng);

/// Brownian bridge on `grid`, which must start at s1 and end at s2. Built by
/// sequential Gaussian conditioning; endpoints are exact.
PathSample sample_bridge(const BridgeSpec& spec, int dim, const TimeGrid& grid, RandomStream& rng);

/// Grid modulus of continuity: max |B(t_j) - B(t_i)| over grid pairs with
/// |t_j - t_i| <= delta. Block-pruned, OpenMP-parallel over i.
double modulus(const PathSample& path, double delta);

/// Serial all-pairs version of `modulus`.
double modulus_reference(const PathSample& path, double delta);

/// Grid version of the path-regularity event: every pair of grid times
/// t_i < t_j in [a, b] satisfies
///   |B(t_j) - B(t_i)| <= sqrt(t_j - t_i) phi(alpha) + alpha^{-2 n_dim - 1}.
bool check_Y(const PathSample& path, double alpha, double a, double b, int n_dim);

/// Serial all-pairs version of `check_Y`.
bool check_Y_reference(const PathSample& path, double alpha, double a, double b, int n_dim);

} // namespace bmhull
