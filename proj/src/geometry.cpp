#include "bmhull/geometry.hpp"

#include <algorithm>
#include <limits>

#include "bmhull/errors.hpp"

namespace bmhull {

PointSet::PointSet(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords))
{
    if (dim <= 0)
        throw ArgumentError("PointSet: dimension must be positive");
    if (coords_.size() % static_cast<std::size_t>(dim) != 0)
        throw ArgumentError("PointSet: coordinate count is not a multiple of the dimension");
}

void PointSet::push_back(std::span<const double> p)
{
    if (static_cast<int>(p.size()) != dim_)
        throw ArgumentError("PointSet: point dimension mismatch");
    coords_.insert(coords_.end(), p.begin(), p.end());
}

PointSet PointSet::select(std::span<const int> indices) const
{
    PointSet out(dim_);
    out.coords_.reserve(indices.size() * static_cast<std::size_t>(dim_));
    for (int i : indices)
        out.push_back((*this)[static_cast<std::size_t>(i)]);
    return out;
}

double PointSet::diameter() const
{
    if (empty())
        return 0.0;
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < size(); ++i) {
            lo = std::min(lo, (*this)[i][k]);
            hi = std::max(hi, (*this)[i][k]);
        }
        s += (hi - lo) * (hi - lo);
    }
    return std::sqrt(s);
}

namespace {

// Determinant of a small square matrix (row-major, n <= 4) by partial pivoting.
double det(std::vector<double> m, int n)
{
    double d = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c]))
                piv = r;
        if (m[piv * n + c] == 0.0)
            return 0.0;
        if (piv != c) {
            for (int k = 0; k < n; ++k)
                std::swap(m[c * n + k], m[piv * n + k]);
            d = -d;
        }
        d *= m[c * n + c];
        for (int r = c + 1; r < n; ++r) {
            const double f = m[r * n + c] / m[c * n + c];
            for (int k = c; k < n; ++k)
                m[r * n + k] -= f * m[c * n + k];
        }
    }
    return d;
}

} // namespace

Vec hyperplane_normal(const PointSet& pts)
{
    const int d = pts.dim();
    if (static_cast<int>(pts.size()) != d)
        throw ArgumentError("hyperplane_normal: need exactly dim points");
    if (d == 1)
        return {1.0};
    // Edge matrix E is (d-1) x d; normal_k = (-1)^k det(E without column k).
    std::vector<double> edges(static_cast<std::size_t>((d - 1) * d));
    for (int i = 1; i < d; ++i)
        for (int k = 0; k < d; ++k)
            edges[(i - 1) * d + k] = pts[i][k] - pts[0][k];
    Vec n(d);
    const int m = d - 1;
    std::vector<double> minor(static_cast<std::size_t>(m * m));
    for (int k = 0; k < d; ++k) {
        for (int r = 0; r < m; ++r) {
            int cc = 0;
            for (int c = 0; c < d; ++c)
                if (c != k)
                    minor[r * m + cc++] = edges[r * d + c];
        }
        n[k] = ((k % 2 == 0) ? 1.0 : -1.0) * det(minor, m);
    }
    return n;
}

std::vector<Vec> orthonormalize(const std::vector<Vec>& vectors, double tol)
{
    std::vector<Vec> basis;
    for (const Vec& v : vectors) {
        Vec w = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& b : basis) {
                const double c = dot(w, b);
                for (std::size_t i = 0; i < w.size(); ++i)
                    w[i] -= c * b[i];
            }
        const double len = norm(w);
        if (len > tol) {
            for (double& x : w)
                x /= len;
            basis.push_back(std::move(w));
        }
    }
    return basis;
}

std::vector<Vec> orthogonal_complement(const std::vector<Vec>& vectors, int dim, double tol)
{
    std::vector<Vec> all = orthonormalize(vectors, tol);
    const std::size_t r = all.size();
    for (int k = 0; k < dim; ++k) {
        Vec e(dim, 0.0);
        e[k] = 1.0;
        all.push_back(e);
    }
    std::vector<Vec> full = orthonormalize(all, 1e-8);
    return {full.begin() + static_cast<std::ptrdiff_t>(r), full.end()};
}

namespace {

// Closest point of aff(pts) to x: returns barycentric coordinates.
std::vector<double> affine_projection_coords(std::span<const double> x, const PointSet& pts)
{
    const std::size_t k = pts.size();
    std::vector<double> lambda(k, 0.0);
    if (k == 1) {
        lambda[0] = 1.0;
        return lambda;
    }
    // Solve Gram system G c = r for edges e_i = p_i - p_0.
    const std::size_t m = k - 1;
    std::vector<Vec> e(m);
    for (std::size_t i = 0; i < m; ++i)
        e[i] = sub(pts[i + 1], pts[0]);
    const Vec rhs0 = sub(x, pts[0]);
    std::vector<double> g(m * m), r(m);
    for (std::size_t i = 0; i < m; ++i) {
        r[i] = dot(e[i], rhs0);
        for (std::size_t j = 0; j < m; ++j)
            g[i * m + j] = dot(e[i], e[j]);
    }
    // Gaussian elimination with partial pivoting.
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        for (std::size_t q = c + 1; q < m; ++q)
            if (std::abs(g[q * m + c]) > std::abs(g[piv * m + c]))
                piv = q;
        if (std::abs(g[piv * m + c]) < 1e-300)
            return {};
        if (piv != c) {
            for (std::size_t q = 0; q < m; ++q)
                std::swap(g[c * m + q], g[piv * m + q]);
            std::swap(r[c], r[piv]);
        }
        for (std::size_t q = c + 1; q < m; ++q) {
            const double f = g[q * m + c] / g[c * m + c];
            for (std::size_t w = c; w < m; ++w)
                g[q * m + w] -= f * g[c * m + w];
            r[q] -= f * r[c];
        }
    }
    std::vector<double> c(m);
    for (std::size_t i = m; i-- > 0;) {
        double s = r[i];
        for (std::size_t j = i + 1; j < m; ++j)
            s -= g[i * m + j] * c[j];
        c[i] = s / g[i * m + i];
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        lambda[i + 1] = c[i];
        sum += c[i];
    }
    lambda[0] = 1.0 - sum;
    return lambda;
}

double distance_to_combination(std::span<const double> x, const PointSet& pts, const std::vector<double>& lambda)
{
    Vec y(static_cast<std::size_t>(pts.dim()), 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (int k = 0; k < pts.dim(); ++k)
            y[k] += lambda[i] * pts[i][k];
    return distance(x, y);
}

} // namespace

double distance_to_affine_span(std::span<const double> x, const PointSet& pts)
{
    const auto lambda = affine_projection_coords(x, pts);
    if (lambda.empty())
        throw ArgumentError("distance_to_affine_span: affinely dependent points");
    return distance_to_combination(x, pts, lambda);
}

double distance_to_simplex(std::span<const double> x, const PointSet& simplex)
{
    const std::size_t k = simplex.size();
    if (k == 0 || k > 5)
        throw ArgumentError("distance_to_simplex: 1 to 5 vertices supported");
    // The nearest point lies in the relative interior of exactly one face;
    // enumerate all faces and keep projections with nonnegative barycentrics.
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        std::vector<int> idx;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (1u << i))
                idx.push_back(static_cast<int>(i));
        const PointSet face = simplex.select(idx);
        const auto lambda = affine_projection_coords(x, face);
        if (lambda.empty())
            continue;
        if (std::all_of(lambda.begin(), lambda.end(), [](double l) { return l >= -1e-12; }))
            best = std::min(best, distance_to_combination(x, face, lambda));
    }
    return best;
}

} // namespace bmhull
