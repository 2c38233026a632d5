#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace bmhull {

using Vec = std::vector<double>;

/// Points in R^dim stored contiguously, row per point.
class PointSet
{
  public:
    PointSet() = default;
    explicit PointSet(int dim) : dim_(dim) {}
    PointSet(int dim, std::vector<double> coords);

    int dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(dim_); }
    bool empty() const { return coords_.empty(); }

    std::span<const double> operator[](std::size_t i) const
    {
        return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    std::span<double> operator[](std::size_t i)
    {
        return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }

    void push_back(std::span<const double> p);
    const std::vector<double>& coords() const { return coords_; }
    std::vector<double>& coords() { return coords_; }

    /// Subset in the given order.
    PointSet select(std::span<const int> indices) const;

    /// Length of the bounding-box diagonal.
    double diameter() const;

  private:
    int dim_ = 0;
    std::vector<double> coords_;
};

inline double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Vec sub(std::span<const double> a, std::span<const double> b)
{
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

/// Non-normalized normal to the hyperplane through `dim` points of R^dim
/// (generalized cross product of the edge vectors). Zero iff affinely
/// dependent.
Vec hyperplane_normal(const PointSet& pts);

/// Orthonormal basis of span(vectors) by modified Gram-Schmidt; vectors whose
/// residual norm falls below `tol` are dropped.
std::vector<Vec> orthonormalize(const std::vector<Vec>& vectors, double tol);

/// Orthonormal basis of the orthogonal complement of span(vectors) in R^dim.
std::vector<Vec> orthogonal_complement(const std::vector<Vec>& vectors, int dim, double tol);

/// Euclidean distance from `x` to the simplex with the given vertices
/// (any dimension, at most 5 vertices).
double distance_to_simplex(std::span<const double> x, const PointSet& simplex);

/// Euclidean distance from `x` to the affine span of the given points.
double distance_to_affine_span(std::span<const double> x, const PointSet& pts);

} // namespace bmhull
