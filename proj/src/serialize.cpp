#include "bmhull/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <sstream>

#include "bmhull/errors.hpp"

namespace bmhull {

std::string format_double(double x)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string Metadata::now()
{
    std::time_t t = std::time(nullptr);
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"); sde && *sde)
        t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::ordered_json Metadata::to_json() const
{
    nlohmann::ordered_json j;
    j["version"] = version;
    j["seed"] = seed;
    j["wall_clock"] = wall_clock;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config)
        cfg[k] = v;
    j["config"] = cfg;
    return j;
}

std::string Metadata::to_csv_comments() const
{
    std::ostringstream os;
    os << "# version=" << version << "\n# seed=" << seed << "\n# wall_clock=" << wall_clock << '\n';
    for (const auto& [k, v] : config)
        os << "# config." << k << '=' << v << '\n';
    return os.str();
}

std::string Table::to_csv(const Metadata& meta) const
{
    std::ostringstream os;
    os << meta.to_csv_comments();
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << row[i];
        os << '\n';
    }
    return os.str();
}

namespace {

nlohmann::ordered_json cell_json(const std::string& s)
{
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size())
        return x;
    return s;
}

} // namespace

nlohmann::ordered_json Table::to_json(const Metadata& meta) const
{
    nlohmann::ordered_json j;
    j["metadata"] = meta.to_json();
    j["columns"] = columns;
    nlohmann::ordered_json rs = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < columns.size(); ++i)
            r[columns[i]] = cell_json(row[i]);
        rs.push_back(std::move(r));
    }
    j["rows"] = std::move(rs);
    return j;
}

Table path_table(const PathSample& path)
{
    Table t;
    t.columns.push_back("t");
    for (int c = 1; c <= path.dim(); ++c)
        t.columns.push_back("x_" + std::to_string(c));
    for (std::size_t k = 0; k < path.size(); ++k) {
        std::vector<std::string> row{format_double(path.grid[k])};
        for (double x : path.at(k))
            row.push_back(format_double(x));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table rain_table(const Rain& rain)
{
    Table t;
    t.columns = {"x", "y"};
    for (const RainPoint& p : rain.points)
        t.rows.push_back({format_double(p.x), format_double(p.y)});
    return t;
}

nlohmann::ordered_json level_json(const RainLevel& level)
{
    nlohmann::ordered_json j;
    j["alpha"] = level.alpha;
    j["times"] = level.times;
    return j;
}

nlohmann::ordered_json hull_json(const Polytope& hull)
{
    nlohmann::ordered_json j;
    j["dim"] = hull.dim();
    j["eps"] = hull.eps();
    nlohmann::ordered_json verts = nlohmann::ordered_json::array();
    for (int v : hull.vertex_indices()) {
        const auto p = hull.points()[static_cast<std::size_t>(v)];
        verts.push_back({{"index", v}, {"coords", std::vector<double>(p.begin(), p.end())}});
    }
    j["vertices"] = std::move(verts);
    nlohmann::ordered_json facets = nlohmann::ordered_json::array();
    for (const Facet& f : hull.facets())
        facets.push_back({{"vertices", f.vertex_indices}, {"normal", f.normal}, {"offset", f.offset}});
    j["facets"] = std::move(facets);
    return j;
}

std::string hull_off(const Polytope& hull)
{
    const int d = hull.dim();
    const auto& pts = hull.points();
    std::ostringstream os;
    if (d == 4)
        os << "nOFF\n4\n";
    else
        os << "OFF\n";
    os << pts.size() << ' ' << hull.facets().size() << ' ' << (d == 3 ? hull.ridge_count() : 0) << '\n';
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (int c = 0; c < d; ++c)
            os << (c ? " " : "") << format_double(pts[i][c]);
        if (d == 2)
            os << " 0";
        os << '\n';
    }
    for (const Facet& f : hull.facets()) {
        os << f.vertex_indices.size();
        for (int v : f.vertex_indices)
            os << ' ' << v;
        os << '\n';
    }
    return os.str();
}

nlohmann::ordered_json estimate_json(const Estimate& e)
{
    nlohmann::ordered_json j;
    j["mean"] = e.mean;
    j["std_error"] = e.std_error;
    j["ci_low"] = e.ci_low;
    j["ci_high"] = e.ci_high;
    j["replicas"] = e.replicas;
    if (e.indicator)
        j["successes"] = e.successes;
    j["seed"] = e.config.master_seed;
    j["grid"] = e.config.grid_points_per_unit_time;
    j["confidence"] = e.config.confidence_level;
    return j;
}

nlohmann::ordered_json witness_json(const DiscordantWitness& w)
{
    return {{"facet_i", w.facet_i}, {"facet_j", w.facet_j}, {"angle", w.angle}, {"tip_distance", w.tip_distance}};
}

nlohmann::ordered_json pair_json(const WedgePair& p)
{
    nlohmann::ordered_json j;
    j["n_r"] = p.n_r;
    j["n_s"] = p.n_s;
    j["theta"] = p.theta;
    j["ridge_point"] = p.ridge_point;
    j["ridge_basis"] = p.ridge_basis;
    j["projected_tip"] = std::vector<double>{p.projected_tip[0], p.projected_tip[1]};
    j["enlargement"] = p.enlargement;
    j["gamma"] = p.gamma;
    return j;
}

} // namespace bmhull
