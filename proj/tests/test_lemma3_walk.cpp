// Cross-section walk oracle for the discordant-pair search in d = 3: start at
// the vertex lowest along the wedge bisector, cut P with the plane through it
// spanned by a facet normal and a wedge normal, and walk the cut polygon for
// a bounded arclength. The facets met on the walk must contain a pair with
// both facets near their common line; the exhaustive search must reach at
// least the same angle.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <tuple>

#include "bmhull/errors.hpp"
#include "bmhull/hull.hpp"
#include "bmhull/wedge.hpp"

using namespace bmhull;

namespace {

constexpr double kPi = std::numbers::pi;

using V3 = std::array<double, 3>;

V3 v3(std::span<const double> x) { return {x[0], x[1], x[2]}; }
V3 operator-(V3 a, V3 b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
V3 operator+(V3 a, V3 b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
V3 operator*(double s, V3 a) { return {s * a[0], s * a[1], s * a[2]}; }
double dot3(V3 a, V3 b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double len(V3 a) { return std::sqrt(dot3(a, a)); }
V3 cross(V3 a, V3 b) { return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}; }

double angle3(V3 a, V3 b) { return std::acos(std::clamp(dot3(a, b) / (len(a) * len(b)), -1.0, 1.0)); }

// Distances from each facet triangle to the line where the two facet planes
// meet.
std::pair<double, double> facet_line_distances(const Polytope& P, int i, int j)
{
    const Facet& a = P.facets()[static_cast<std::size_t>(i)];
    const Facet& b = P.facets()[static_cast<std::size_t>(j)];
    const V3 na = v3(a.normal), nb = v3(b.normal);
    const V3 dir = cross(na, nb);
    const double dd = dot3(dir, dir);
    // Point on both planes: combination of the normals.
    const double c = dot3(na, nb);
    const double det = 1.0 - c * c;
    const double ka = (a.offset - c * b.offset) / det, kb = (b.offset - c * a.offset) / det;
    const V3 p0 = ka * na + kb * nb;
    auto dist_line = [&](V3 x) {
        const V3 w = x - p0;
        return len(cross(w, dir)) / std::sqrt(dd);
    };
    auto facet_min = [&](const Facet& f) {
        std::array<V3, 3> t{};
        for (int k = 0; k < 3; ++k)
            t[k] = v3(P.points()[static_cast<std::size_t>(f.vertex_indices[k])]);
        // The line lies in the facet's plane. If the triangle straddles it the
        // distance is 0; otherwise distance is affine on the triangle and a
        // vertex attains the minimum.
        const V3 nrm = cross(t[1] - t[0], t[2] - t[0]);
        bool pos = false, neg = false;
        for (const V3& x : t) {
            const double side = dot3(cross(dir, x - p0), nrm);
            pos |= side >= 0.0;
            neg |= side <= 0.0;
        }
        if (pos && neg)
            return 0.0;
        return std::min({dist_line(t[0]), dist_line(t[1]), dist_line(t[2])});
    };
    return {facet_min(a), facet_min(b)};
}

// Both facets close to the line: the stronger two-facet form.
double pair_tip_distance(const Polytope& P, int i, int j)
{
    const auto [a, b] = facet_line_distances(P, i, j);
    return std::max(a, b);
}

struct WalkResult
{
    bool found = false;
    double best_angle = 0.0;
};

WalkResult walk_oracle(const Polytope& P, const AmbientWedge& w, double kappa, double s)
{
    const V3 apex = v3(w.apex), u1 = v3(w.u1), u2 = v3(w.u2);
    const V3 h = (1.0 / len(u1 + u2)) * (u1 + u2);
    const int nf = static_cast<int>(P.facets().size());

    // Lowest vertex along h.
    int v = -1;
    double lowest = std::numeric_limits<double>::infinity();
    for (int idx : P.vertex_indices()) {
        const double g = dot3(v3(P.points()[static_cast<std::size_t>(idx)]) - apex, h);
        if (g < lowest) {
            lowest = g;
            v = idx;
        }
    }
    const V3 pv = v3(P.points()[static_cast<std::size_t>(v)]);
    const double s_prime = s / std::sin(kappa / 2.0);
    const double ell = s_prime / std::sin(kappa / 4.0);
    const double mk = lemma3_constant(kappa);

    auto qualifies = [&](int i, int j) {
        const double a = angle3(v3(P.facets()[i].normal), v3(P.facets()[j].normal));
        if (a < kappa / 16.0 || a >= kPi - kAngleEps)
            return -1.0;
        return pair_tip_distance(P, i, j) <= mk * s * (1.0 + 1e-9) + 1e-12 ? a : -1.0;
    };

    WalkResult out;
    auto consider = [&](const std::vector<int>& facets) {
        for (std::size_t x = 0; x < facets.size(); ++x)
            for (std::size_t y = x + 1; y < facets.size(); ++y) {
                if (facets[x] == facets[y])
                    continue;
                const double a = qualifies(facets[x], facets[y]);
                if (a >= 0.0) {
                    out.found = true;
                    out.best_angle = std::max(out.best_angle, a);
                }
            }
    };

    std::vector<int> at_v;
    for (int f = 0; f < nf; ++f) {
        const auto& vi = P.facets()[f].vertex_indices;
        if (std::find(vi.begin(), vi.end(), v) != vi.end())
            at_v.push_back(f);
    }

    for (int F : at_v) {
        const V3 u = -1.0 * v3(P.facets()[F].normal);
        for (V3 ui : {u1, u2}) {
            const double a = angle3(u, ui);
            if (a < kappa / 2.0 - 1e-12 || a > kPi - kappa / 2.0 + 1e-12)
                continue;
            const V3 pn = cross(u, ui);
            if (len(pn) < 1e-12)
                continue;
            const V3 plane_n = (1.0 / len(pn)) * pn;
            const double tol = 1e-12 * (1.0 + len(pv));
            auto sd = [&](int idx) { return dot3(v3(P.points()[static_cast<std::size_t>(idx)]) - pv, plane_n); };

            // Crossing points keyed by vertex or edge.
            using Key = std::tuple<int, int>;
            std::map<Key, V3> pts;
            std::map<Key, std::vector<int>> touching;
            std::map<int, std::pair<Key, Key>> seg;
            for (int f = 0; f < nf; ++f) {
                const auto& vi = P.facets()[f].vertex_indices;
                std::vector<Key> keys;
                for (int k = 0; k < 3; ++k) {
                    const int a0 = vi[k];
                    if (std::abs(sd(a0)) <= tol) {
                        const Key key{a0, -1};
                        if (std::find(keys.begin(), keys.end(), key) == keys.end())
                            keys.push_back(key);
                        pts[key] = v3(P.points()[static_cast<std::size_t>(a0)]);
                    }
                }
                for (int k = 0; k < 3; ++k) {
                    int a0 = vi[k], b0 = vi[(k + 1) % 3];
                    if (a0 > b0)
                        std::swap(a0, b0);
                    const double da = sd(a0), db = sd(b0);
                    if (std::abs(da) <= tol || std::abs(db) <= tol || (da > 0) == (db > 0))
                        continue;
                    const Key key{a0, b0};
                    const double lam = da / (da - db);
                    const V3 pa = v3(P.points()[static_cast<std::size_t>(a0)]);
                    pts[key] = pa + lam * (v3(P.points()[static_cast<std::size_t>(b0)]) - pa);
                    keys.push_back(key);
                }
                if (keys.size() == 2) {
                    seg[f] = {keys[0], keys[1]};
                    touching[keys[0]].push_back(f);
                    touching[keys[1]].push_back(f);
                }
            }
            const Key start{v, -1};
            const auto& first = touching[start];
            if (first.size() != 2) {
                // The cut has empty interior near v: the facets at v already hold the pair.
                consider(at_v);
                continue;
            }
            for (int first_facet : first) {
                std::vector<int> walked{F};
                double travelled = 0.0;
                Key at = start;
                int facet = first_facet;
                for (int guard = 0; guard < 4 * nf && travelled <= ell; ++guard) {
                    walked.push_back(facet);
                    const auto& [k0, k1] = seg[facet];
                    const Key next = k0 == at ? k1 : k0;
                    travelled += len(pts[next] - pts[at]);
                    at = next;
                    if (at == start)
                        break;
                    const auto& t = touching[at];
                    if (t.size() != 2)
                        break;
                    facet = t[0] == facet ? t[1] : t[0];
                }
                consider(walked);
            }
        }
    }
    return out;
}

struct Instance
{
    Polytope P;
    AmbientWedge w;
    double s;
};

Instance make_instance(double kappa, std::uint64_t seed)
{
    RandomStream rng(seed, 99);
    // Random frame, normals at angle exactly kappa.
    std::vector<Vec> g;
    for (int k = 0; k < 3; ++k)
        g.push_back(Vec{rng.gaussian(), rng.gaussian(), rng.gaussian()});
    const auto e = orthonormalize(g, 1e-6);
    const double h = (kPi - kappa) / 2.0;
    AmbientWedge w;
    w.apex = Vec{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    w.u1.assign(3, 0.0);
    w.u2.assign(3, 0.0);
    for (int k = 0; k < 3; ++k) {
        w.u1[k] = std::sin(h) * e[0][k] - std::cos(h) * e[1][k];
        w.u2[k] = std::sin(h) * e[0][k] + std::cos(h) * e[1][k];
    }
    PointSet pts(3);
    const int m = 6 + static_cast<int>(seed % 10);
    for (int p = 0; p < m; ++p) {
        const double a = (2.0 * rng.uniform() - 1.0) * h * 0.995;
        const double rho = p == 0 && seed % 2 == 0 ? 1e-3 : 0.05 + rng.uniform();
        const double z = rng.gaussian();
        Vec x(w.apex);
        for (int k = 0; k < 3; ++k)
            x[k] += rho * (std::cos(a) * e[0][k] + std::sin(a) * e[1][k]) + z * e[2][k];
        pts.push_back(x);
    }
    Polytope P = build_hull(pts);
    const double s = P.distance_to(w.apex) * (1.0 + 1e-12) + 1e-15;
    return {std::move(P), std::move(w), s};
}

} // namespace

TEST_CASE("walk oracle finds a qualifying pair; exhaustive search is at least as good")
{
    int found = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const double kappa = std::array{0.3, 0.8, 1.5}[seed % 3];
        const Instance in = make_instance(kappa, seed);
        const WalkResult walk = walk_oracle(in.P, in.w, kappa, in.s);
        const DiscordantWitness wit = find_discordant(in.P, in.w, kappa, in.s);
        ++total;
        found += walk.found;
        CHECK(walk.found);
        if (walk.found)
            CHECK(wit.angle >= walk.best_angle - 1e-9);
        // The witness bounds the tip distance of one facet of the pair; the
        // recorded value re-derives independently.
        const auto [di, dj] = facet_line_distances(in.P, wit.facet_i, wit.facet_j);
        CHECK(wit.tip_distance == doctest::Approx(std::min(di, dj)).epsilon(1e-6).scale(1.0 + in.s));
        CHECK(std::min(di, dj) <= lemma3_constant(kappa) * in.s * (1.0 + 1e-6) + 1e-9);
    }
    MESSAGE("walk oracle found a pair in " << found << " of " << total << " instances");
}
