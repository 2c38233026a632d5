// Pairwise path functionals. The parallel kernels visit every left index i
// and sweep j > i in fixed blocks; a block is skipped when the farthest
// corner of its bounding box cannot change the answer. The *_reference
// versions enumerate all pairs serially and are what the tests compare to.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "bmhull/errors.hpp"
#include "bmhull/integrals.hpp"
#include "bmhull/paths.hpp"

namespace bmhull {

namespace {

constexpr std::size_t kBlock = 32;

struct BlockBoxes
{
    int dim;
    std::vector<double> lo, hi; // [block][dim]

    BlockBoxes(const PointSet& pts) : dim(pts.dim())
    {
        const std::size_t nb = (pts.size() + kBlock - 1) / kBlock;
        lo.assign(nb * dim, std::numeric_limits<double>::infinity());
        hi.assign(nb * dim, -std::numeric_limits<double>::infinity());
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const std::size_t b = k / kBlock;
            for (int c = 0; c < dim; ++c) {
                lo[b * dim + c] = std::min(lo[b * dim + c], pts[k][c]);
                hi[b * dim + c] = std::max(hi[b * dim + c], pts[k][c]);
            }
        }
    }

    // Largest distance from x to any point of block b's box.
    double farthest(std::size_t b, std::span<const double> x) const
    {
        double s = 0.0;
        for (int c = 0; c < dim; ++c) {
            const double d = std::max(std::abs(x[c] - lo[b * dim + c]), std::abs(x[c] - hi[b * dim + c]));
            s += d * d;
        }
        return std::sqrt(s);
    }
};

double y_threshold(double phi_a, double tail, double gap) { return std::sqrt(gap) * phi_a + tail; }

void check_alpha(double alpha)
{
    if (!(alpha > 1.0))
        throw ArgumentError("check_Y: alpha must exceed 1");
}

} // namespace

double modulus_reference(const PathSample& path, double delta)
{
    if (!(delta > 0.0))
        throw ArgumentError("modulus: delta must be positive");
    const auto& t = path.grid.times();
    double best = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i)
        for (std::size_t j = i + 1; j < path.size() && t[j] - t[i] <= delta; ++j)
            best = std::max(best, distance(path.at(i), path.at(j)));
    return best;
}

double modulus(const PathSample& path, double delta)
{
    if (!(delta > 0.0))
        throw ArgumentError("modulus: delta must be positive");
    const auto& t = path.grid.times();
    const std::size_t n = path.size();
    if (n < 2)
        return 0.0;
    const BlockBoxes boxes(path.points);
    double best = 0.0;
    const auto ni = static_cast<long>(n);

#pragma omp parallel for schedule(dynamic, 64) reduction(max : best)
    for (long ii = 0; ii < ni; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const auto xi = path.at(i);
        double local = best;
        std::size_t j = i + 1;
        while (j < n && t[j] - t[i] <= delta) {
            const std::size_t b = j / kBlock;
            const std::size_t end = std::min(n, (b + 1) * kBlock);
            const bool whole = j == b * kBlock && t[end - 1] - t[i] <= delta;
            if (whole && boxes.farthest(b, xi) <= local) {
                j = end;
                continue;
            }
            for (; j < end && t[j] - t[i] <= delta; ++j)
                local = std::max(local, distance(xi, path.at(j)));
        }
        best = std::max(best, local);
    }
    return best;
}

bool check_Y_reference(const PathSample& path, double alpha, double a, double b, int n_dim)
{
    check_alpha(alpha);
    if (!(a <= b))
        throw ArgumentError("check_Y: invalid interval");
    if (path.grid.front() > a || path.grid.back() < b)
        throw ArgumentError("check_Y: grid does not cover the interval");
    const double ph = phi(alpha);
    const double tail = std::pow(alpha, -2.0 * n_dim - 1.0);
    const auto [lo, hi] = path.grid.range(a, b);
    const auto& t = path.grid.times();
    for (std::size_t i = lo; i < hi; ++i)
        for (std::size_t j = i + 1; j < hi; ++j)
            if (distance(path.at(i), path.at(j)) > y_threshold(ph, tail, t[j] - t[i]))
                return false;
    return true;
}

bool check_Y(const PathSample& path, double alpha, double a, double b, int n_dim)
{
    check_alpha(alpha);
    if (!(a <= b))
        throw ArgumentError("check_Y: invalid interval");
    if (path.grid.front() > a || path.grid.back() < b)
        throw ArgumentError("check_Y: grid does not cover the interval");
    const double ph = phi(alpha);
    const double tail = std::pow(alpha, -2.0 * n_dim - 1.0);
    const auto [lo, hi] = path.grid.range(a, b);
    const auto& t = path.grid.times();
    if (hi - lo < 2)
        return true;
    const BlockBoxes boxes(path.points);
    std::atomic<bool> failed{false};
    const auto first = static_cast<long>(lo), last = static_cast<long>(hi);

#pragma omp parallel for schedule(dynamic, 64)
    for (long ii = first; ii < last; ++ii) {
        if (failed.load(std::memory_order_relaxed))
            continue;
        const auto i = static_cast<std::size_t>(ii);
        const auto xi = path.at(i);
        std::size_t j = i + 1;
        while (j < hi) {
            const std::size_t blk = j / kBlock;
            const std::size_t end = std::min(hi, (blk + 1) * kBlock);
            // Threshold grows with the gap, so the block's first time gives a
            // lower bound for every member.
            if (j == blk * kBlock && end == (blk + 1) * kBlock &&
                boxes.farthest(blk, xi) <= y_threshold(ph, tail, t[j] - t[i])) {
                j = end;
                continue;
            }
            for (; j < end; ++j)
                if (distance(xi, path.at(j)) > y_threshold(ph, tail, t[j] - t[i])) {
                    failed.store(true, std::memory_order_relaxed);
                    break;
                }
            if (failed.load(std::memory_order_relaxed))
                break;
        }
    }
    return !failed.load();
}

} // namespace bmhull
