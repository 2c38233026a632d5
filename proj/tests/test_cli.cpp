#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "bmhull/cli.hpp"
#include "bmhull/hull.hpp"
#include "bmhull/serialize.hpp"

using namespace bmhull;
namespace fs = std::filesystem;

namespace {

struct Run
{
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args)
{
    setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("bmhull_test_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
}

} // namespace

TEST_CASE("format_double round-trips")
{
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::numeric_limits<double>::denorm_min()})
    {
        const std::string s = format_double(x);
        double y = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), y);
        CHECK(y == x);
    }
    CHECK(format_double(10.0) == "10");
}

TEST_CASE("tables: CSV header after metadata, JSON numbers")
{
    setenv("SOURCE_DATE_EPOCH", "0", 1);
    Metadata m;
    m.seed = 42;
    m.config = {{"alpha", "10"}};
    m.wall_clock = Metadata::now();
    CHECK(m.wall_clock == "1970-01-01T00:00:00Z");
    Table t;
    t.columns = {"x", "label"};
    t.rows = {{"0.5", "a"}, {"2", "b"}};
    const std::string csv = t.to_csv(m);
    CHECK(csv.find("# seed=42\n") != std::string::npos);
    CHECK(csv.find("# config.alpha=10\n") != std::string::npos);
    CHECK(csv.find("\nx,label\n0.5,a\n2,b\n") != std::string::npos);
    const auto j = t.to_json(m);
    CHECK(j["rows"][0]["x"].get<double>() == 0.5);
    CHECK(j["rows"][1]["label"].get<std::string>() == "b");
    CHECK(j["metadata"]["seed"].get<std::uint64_t>() == 42);
}

TEST_CASE("OFF output")
{
    const Polytope sq = build_hull(PointSet(2, {0, 0, 1, 0, 1, 1, 0, 1}));
    const std::string off = hull_off(sq);
    CHECK(off.rfind("OFF\n4 4 0\n0 0 0\n", 0) == 0);
    const Polytope simplex4 = build_hull(PointSet(4, {0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}));
    CHECK(hull_off(simplex4).rfind("nOFF\n4\n5 5 0\n", 0) == 0);
}

TEST_CASE("simulate: files, nesting, determinism")
{
    const fs::path a = scratch("sim_a"), b = scratch("sim_b");
    const Run r1 = invoke({"simulate", "--dim", "2", "--alpha", "5,10", "--seed", "7", "--out", a.string(), "--workers", "1"});
    const Run r2 = invoke({"simulate", "--dim", "2", "--alpha", "5,10", "--seed", "7", "--out", b.string(), "--workers", "4"});
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    for (const char* f : {"path.csv", "rain.csv", "hull_alpha_5.json", "hull_alpha_10.json"}) {
        CHECK(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    const auto h5 = nlohmann::json::parse(slurp(a / "hull_alpha_5.json"));
    const auto h10 = nlohmann::json::parse(slurp(a / "hull_alpha_10.json"));
    CHECK(h5["metadata"]["seed"].get<int>() == 7);
    const double eps = h10["hull"]["eps"].get<double>();
    for (const auto& v : h5["hull"]["vertices"]) {
        const auto x = v["coords"].get<std::vector<double>>();
        for (const auto& f : h10["hull"]["facets"]) {
            const auto n = f["normal"].get<std::vector<double>>();
            CHECK(n[0] * x[0] + n[1] * x[1] <= f["offset"].get<double>() + eps);
        }
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("simulate at alpha = 0 reports a degenerate segment")
{
    const fs::path d = scratch("sim_zero");
    const Run r = invoke({"simulate", "--alpha", "0", "--out", d.string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("degenerate") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(d / "hull_alpha_0.json"));
    CHECK(j["degenerate"].get<bool>());
    CHECK(j["affine_rank"].get<int>() == 1);
    fs::remove_all(d);
}

TEST_CASE("output directory from the environment")
{
    const fs::path d = scratch("env_out");
    setenv("BMHULL_OUT_DIR", d.string().c_str(), 1);
    const Run r = invoke({"simulate", "--alpha", "3"});
    unsetenv("BMHULL_OUT_DIR");
    CHECK(r.code == 0);
    CHECK(fs::exists(d / "path.csv"));
    fs::remove_all(d);
}

TEST_CASE("verify: exit codes and report")
{
    const Run ok = invoke({"verify", "lemma8"});
    CHECK(ok.code == 0);
    const auto j = nlohmann::json::parse(ok.out);
    CHECK(j["all_pass"].get<bool>());
    CHECK(j["criteria"].size() >= 6);
    const Run bad = invoke({"verify", "nosuch"});
    CHECK(bad.code == cli::kUsage);
    CHECK(bad.err.find("unknown suite") != std::string::npos);
    // A failing criterion gives a nonzero exit.
    CHECK(invoke({"verify", "lemma4", "--replicas", "200"}).code == cli::kCriterionFailed);
}

TEST_CASE("sweep")
{
    const Run empty = invoke({"sweep", "--param", "alpha", "--values", ""});
    CHECK(empty.code == 0);
    const auto header = empty.out.find("param,value");
    REQUIRE(header != std::string::npos);
    CHECK(empty.out.find('\n', header) == empty.out.size() - 1);
    CHECK(std::count(empty.out.begin(), empty.out.end(), '\n') ==
          std::count(empty.out.begin(), empty.out.end(), '#') + 1);

    const Run ints = invoke({"sweep", "--param", "a", "--values", "0.36787944117144233,0.1353352832366127", "--inner",
                          "integral_Za", "--format", "json"});
    REQUIRE(ints.code == 0);
    const auto j = nlohmann::json::parse(ints.out);
    REQUIRE(j["rows"].size() == 2);
    for (const auto& row : j["rows"])
        CHECK(std::abs(row["mean"].get<double>() - row["reference"].get<double>()) <=
              1e-2 * row["reference"].get<double>());

    CHECK(invoke({"sweep", "--param", "bogus", "--values", "1"}).code == cli::kUsage);
    CHECK(invoke({"sweep", "--param", "alpha", "--values", "x"}).code == cli::kUsage);
}

TEST_CASE("config file values are overridden by flags")
{
    const fs::path d = scratch("cfg");
    fs::create_directories(d);
    std::ofstream(d / "run.cfg") << "seed=9\nalpha=5,10\nkappa=0.5\n";
    const Run r = invoke({"--config", (d / "run.cfg").string(), "sweep", "--param", "n", "--values", "1", "--inner",
                       "integral_Za", "--kappa", "0.25", "--a", "0.1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# seed=9\n") != std::string::npos);
    CHECK(r.out.find("# config.alpha=5,10\n") != std::string::npos);
    CHECK(r.out.find("# config.kappa=0.25\n") != std::string::npos);
    fs::remove_all(d);
}

TEST_CASE("invalid flags")
{
    CHECK(invoke({"simulate", "--dim", "0"}).code == cli::kUsage);
    CHECK(invoke({"simulate", "--confidence", "1.5"}).code == cli::kUsage);
    CHECK(invoke({"simulate", "--format", "xml"}).code == cli::kUsage);
    CHECK(invoke({}).code == cli::kUsage);
    CHECK(invoke({"--help"}).code == 0);
}
