#include "bmhull/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "bmhull/errors.hpp"
#include "bmhull/hull.hpp"
#include "bmhull/integrals.hpp"
#include "bmhull/mc.hpp"
#include "bmhull/paths.hpp"
#include "bmhull/rain.hpp"
#include "bmhull/serialize.hpp"
#include "bmhull/verify.hpp"

namespace bmhull::cli {

namespace fs = std::filesystem;

namespace {

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + format_double(v[i]);
    return s;
}

std::vector<std::string> split(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ','))
        if (!cur.empty())
            out.push_back(cur);
    return out;
}

double parse_number(const std::string& s, const std::string& what)
{
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty())
        throw ArgumentError(what + ": not a number: '" + s + "'");
    return x;
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f)
        throw IoError("cannot open " + p.string() + " for writing");
    f << text;
    f.close();
    if (!f)
        throw IoError("write failed: " + p.string());
}

fs::path out_dir(const RunConfig& cfg)
{
    fs::path dir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    return dir;
}

EstimatorConfig estimator(const RunConfig& cfg, std::uint64_t default_replicas)
{
    EstimatorConfig e;
    e.replicas = cfg.replicas.value_or(default_replicas);
    e.master_seed = cfg.seed;
    e.grid_points_per_unit_time = cfg.grid;
    e.confidence_level = cfg.confidence;
    e.workers = cfg.workers;
    e.validate();
    return e;
}

void validate(const RunConfig& cfg)
{
    if (cfg.dim < 1 || cfg.dim > 8)
        throw ArgumentError("--dim must lie in [1, 8]");
    if (cfg.n < 1)
        throw ArgumentError("--n must be positive");
    if (cfg.grid < 1)
        throw ArgumentError("--grid must be positive");
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0))
        throw ArgumentError("--confidence must lie in (0, 1)");
    if (cfg.replicas && *cfg.replicas == 0)
        throw ArgumentError("--replicas must be positive");
    if (cfg.workers < 0)
        throw ArgumentError("--workers must be nonnegative");
    for (double a : cfg.alpha)
        if (!(a >= 0.0) || !std::isfinite(a))
            throw ArgumentError("--alpha values must be finite and nonnegative");
}

Metadata metadata(const RunConfig& cfg)
{
    Metadata m;
    m.seed = cfg.seed;
    m.config = cfg.echo();
    m.wall_clock = Metadata::now();
    return m;
}

std::string with_off_comments(const std::string& off, const Metadata& meta)
{
    // Comments go after the header keyword(s) so readers still see "OFF" first.
    std::size_t pos = off.find('\n') + 1;
    if (off.rfind("nOFF", 0) == 0)
        pos = off.find('\n', pos) + 1;
    return off.substr(0, pos) + meta.to_csv_comments() + off.substr(pos);
}

// ---- simulate --------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.alpha.empty())
        throw ArgumentError("simulate: --alpha needs at least one value");
    const Metadata meta = metadata(cfg);
    const fs::path dir = out_dir(cfg);
    const bool json = cfg.format == "json";
    const std::string ext = json ? ".json" : ".csv";

    const double top = *std::max_element(cfg.alpha.begin(), cfg.alpha.end());
    RandomStream rain_rng(cfg.seed, stream_id(tag_of("simulate_rain"), 0));
    const Rain rain = top > 0.0 ? generate_rain(top, rain_rng) : Rain{{}, 0.0};

    std::vector<double> xs;
    for (const RainPoint& p : rain.points)
        xs.push_back(p.x);
    const TimeGrid grid = TimeGrid::merge(TimeGrid::uniform(0.0, 1.0, cfg.grid), xs);
    RandomStream path_rng(cfg.seed, stream_id(tag_of("simulate_path"), 0));
    const PathSample path = sample_brownian(cfg.dim, grid, path_rng);

    nlohmann::ordered_json summary;
    summary["metadata"] = meta.to_json();
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    auto emit = [&](const std::string& name, const std::string& text) {
        write_file(dir / name, text);
        files.push_back(name);
    };

    const Table pt = path_table(path), rt = rain_table(rain);
    emit("path" + ext, json ? pt.to_json(meta).dump(2) + "\n" : pt.to_csv(meta));
    emit("rain" + ext, json ? rt.to_json(meta).dump(2) + "\n" : rt.to_csv(meta));

    nlohmann::ordered_json hulls = nlohmann::ordered_json::array();
    for (double alpha : cfg.alpha) {
        const RainLevel lv = level(rain, alpha);
        PointSet pts(cfg.dim);
        for (double t : lv.times)
            pts.push_back(path.at_time(t));
        nlohmann::ordered_json doc;
        doc["metadata"] = meta.to_json();
        doc["alpha"] = alpha;
        doc["level"] = level_json(lv);
        nlohmann::ordered_json info{{"alpha", alpha}, {"points", pts.size()}};
        const std::string stem = "hull_alpha_" + format_double(alpha);
        try {
            const Polytope hull = build_hull(pts);
            doc["degenerate"] = false;
            doc["hull"] = hull_json(hull);
            info["degenerate"] = false;
            info["vertices"] = hull.vertex_indices().size();
            info["facets"] = hull.facets().size();
            emit(stem + ".json", doc.dump(2) + "\n");
            if (cfg.dim >= 2 && cfg.dim <= 4)
                emit(stem + ".off", with_off_comments(hull_off(hull), meta));
        } catch (const DegeneracyError& e) {
            doc["degenerate"] = true;
            doc["affine_rank"] = e.rank();
            doc["message"] = e.what();
            info["degenerate"] = true;
            info["affine_rank"] = e.rank();
            err << "alpha=" << format_double(alpha) << ": degenerate hull (affine rank " << e.rank() << " < "
                << cfg.dim << ")\n";
            emit(stem + ".json", doc.dump(2) + "\n");
        }
        hulls.push_back(std::move(info));
    }
    summary["files"] = std::move(files);
    summary["hulls"] = std::move(hulls);
    out << summary.dump(2) << '\n';
    return kOk;
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), cfg.suite) == names.end())
        throw ArgumentError("unknown suite '" + cfg.suite + "'");
    SuiteOptions so;
    so.replicas = cfg.replicas;
    so.seed = cfg.seed;
    so.grid = cfg.grid;
    so.confidence = cfg.confidence;
    so.workers = cfg.workers;
    const auto results = run_suite(cfg.suite, so);
    const bool all = std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
    const Metadata meta = metadata(cfg);

    std::string text;
    if (cfg.format == "csv") {
        Table t;
        t.columns = {"suite", "criterion", "value", "target", "margin", "verdict", "detail"};
        for (const auto& r : results)
            t.rows.push_back({r.suite, r.name, format_double(r.value), format_double(r.target),
                              format_double(r.margin), r.pass ? "PASS" : "FAIL", "\"" + r.detail + "\""});
        text = t.to_csv(meta);
    } else {
        nlohmann::ordered_json j;
        j["metadata"] = meta.to_json();
        j["suite"] = cfg.suite;
        nlohmann::ordered_json cs = nlohmann::ordered_json::array();
        for (const auto& r : results)
            cs.push_back({{"criterion", r.name},
                          {"value", r.value},
                          {"target", r.target},
                          {"margin", r.margin},
                          {"verdict", r.pass ? "PASS" : "FAIL"},
                          {"detail", r.detail}});
        j["criteria"] = std::move(cs);
        j["all_pass"] = all;
        text = j.dump(2) + "\n";
    }
    out << text;
    if (!cfg.out.empty())
        write_file(out_dir(cfg) / ("verify_" + cfg.suite + (cfg.format == "csv" ? ".csv" : ".json")), text);
    return all ? kOk : kCriterionFailed;
}

// ---- sweep -----------------------------------------------------------------

const std::vector<std::string> kSweepParams{"seed", "alpha", "kappa", "dim", "n", "a", "replicas", "grid", "confidence"};
const std::vector<std::string> kEstimands{"prob_R_complement", "integral_Za", "stay_prob", "campbell", "measure_Za"};

void apply(RunConfig& cfg, const std::string& param, const std::string& value)
{
    const double x = parse_number(value, "--values");
    auto integral = [&](const char* name) {
        if (x != std::floor(x))
            throw ArgumentError(std::string("sweep: ") + name + " needs integer values");
        return x;
    };
    if (param == "seed")
        cfg.seed = static_cast<std::uint64_t>(integral("seed"));
    else if (param == "alpha")
        cfg.alpha = {x};
    else if (param == "kappa")
        cfg.kappa = x;
    else if (param == "dim")
        cfg.dim = static_cast<int>(integral("dim"));
    else if (param == "n")
        cfg.n = static_cast<int>(integral("n"));
    else if (param == "a")
        cfg.a = x;
    else if (param == "replicas")
        cfg.replicas = static_cast<std::uint64_t>(integral("replicas"));
    else if (param == "grid")
        cfg.grid = static_cast<int>(integral("grid"));
    else if (param == "confidence")
        cfg.confidence = x;
    validate(cfg);
}

std::vector<std::string> evaluate(const RunConfig& cfg)
{
    const auto cell = [](double v) { return format_double(v); };
    const double alpha = cfg.alpha.empty() ? 0.0 : cfg.alpha.front();
    Estimate e;
    std::string ref, ref_se;
    if (cfg.inner == "prob_R_complement") {
        e = prob_R_complement(alpha, cfg.dim, estimator(cfg, 10000));
    } else if (cfg.inner == "integral_Za") {
        const int res = cfg.n == 1 ? 512 : 64;
        e.mean = e.ci_low = e.ci_high = integral_Za_quadrature(cfg.a, cfg.n, res);
        ref = cell(integral_Za_bound(cfg.a, cfg.n));
    } else if (cfg.inner == "stay_prob") {
        e = stay_prob_wedge(Wedge2D({0.0, 0.0}, 0.0, std::numbers::pi / 2), {1.0, 0.0}, 1.0, estimator(cfg, 100000));
        ref = cell(2.0 * normal_cdf(1.0) - 1.0);
    } else if (cfg.inner == "campbell") {
        const CampbellResult c = campbell_check(alpha, cfg.dim, estimator(cfg, 10000));
        e = c.lhs;
        ref = cell(c.rhs.mean);
        ref_se = cell(c.rhs.std_error);
    } else if (cfg.inner == "measure_Za") {
        e = measure_Za_complement(cfg.a, cfg.n, estimator(cfg, 100000));
        ref = cell(1.0 - std::pow(1.0 - (2.0 * cfg.n + 1.0) * cfg.a, 2.0 * cfg.n));
    }
    return {cell(e.mean), cell(e.std_error), cell(e.ci_low), cell(e.ci_high), ref, ref_se};
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    if (std::find(kSweepParams.begin(), kSweepParams.end(), cfg.param) == kSweepParams.end())
        throw ArgumentError("sweep: unknown parameter '" + cfg.param + "'");
    if (std::find(kEstimands.begin(), kEstimands.end(), cfg.inner) == kEstimands.end())
        throw ArgumentError("sweep: unknown estimand '" + cfg.inner + "'");
    const Metadata meta = metadata(cfg);
    Table t;
    t.columns = {"param", "value", "seed", "alpha", "kappa", "dim", "n", "a", "replicas", "grid", "confidence",
                 "estimand", "mean", "std_error", "ci_low", "ci_high", "reference", "reference_std_error"};
    for (const std::string& v : cfg.values) {
        RunConfig c = cfg;
        apply(c, cfg.param, v);
        std::vector<std::string> row{cfg.param,
                                     v,
                                     std::to_string(c.seed),
                                     c.alpha.empty() ? "" : format_double(c.alpha.front()),
                                     format_double(c.kappa),
                                     std::to_string(c.dim),
                                     std::to_string(c.n),
                                     format_double(c.a),
                                     c.replicas ? std::to_string(*c.replicas) : "default",
                                     std::to_string(c.grid),
                                     format_double(c.confidence),
                                     c.inner};
        for (auto& s : evaluate(c))
            row.push_back(std::move(s));
        t.rows.push_back(std::move(row));
    }
    const std::string text = cfg.format == "json" ? t.to_json(meta).dump(2) + "\n" : t.to_csv(meta);
    out << text;
    if (!cfg.out.empty())
        write_file(out_dir(cfg) / ("sweep_" + cfg.param + (cfg.format == "json" ? ".json" : ".csv")), text);
    return kOk;
}

} // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const
{
    std::vector<std::pair<std::string, std::string>> e{
        {"command", command},
        {"seed", std::to_string(seed)},
        {"alpha", join(alpha)},
        {"kappa", format_double(kappa)},
        {"dim", std::to_string(dim)},
        {"n", std::to_string(n)},
        {"a", format_double(a)},
        {"replicas", replicas ? std::to_string(*replicas) : "default"},
        {"grid", std::to_string(grid)},
        {"confidence", format_double(confidence)},
        {"format", format},
    };
    if (command == "verify")
        e.emplace_back("suite", suite);
    if (command == "sweep") {
        e.emplace_back("param", param);
        std::string vs;
        for (std::size_t i = 0; i < values.size(); ++i)
            vs += (i ? "," : "") + values[i];
        e.emplace_back("values", vs);
        e.emplace_back("inner", inner);
    }
    return e;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    if (const char* env = std::getenv("BMHULL_OUT_DIR"); env && *env)
        cfg.out = env;

    CLI::App app{"Brownian convex hull experiments", "bmhull"};
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", cfg.seed, "master seed");
    app.add_option("--alpha", cfg.alpha, "rain level(s), comma separated")->delimiter(',');
    app.add_option("--kappa", cfg.kappa, "angle parameter");
    app.add_option("--dim", cfg.dim, "path dimension");
    app.add_option("--n", cfg.n, "number of times per facet block");
    app.add_option("--a", cfg.a, "spacing threshold");
    app.add_option("--replicas", cfg.replicas, "Monte Carlo replicas (default depends on the command)");
    app.add_option("--grid", cfg.grid, "grid points per unit time");
    app.add_option("--confidence", cfg.confidence, "confidence level for intervals");
    app.add_option("--out", cfg.out, "output directory (default $BMHULL_OUT_DIR, else .)");
    app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"auto", "csv", "json"}));
    app.add_option("--workers", cfg.workers, "worker threads, 0 for all cores");

    auto* sim = app.add_subcommand("simulate", "one coupled realization: path, rain, hulls per alpha");
    auto* ver = app.add_subcommand("verify", "run an acceptance suite");
    ver->add_option("suite", cfg.suite, "suite name")->required();
    auto* swp = app.add_subcommand("sweep", "evaluate an estimand over a list of parameter values");
    std::string values;
    swp->add_option("--param", cfg.param, "parameter to vary")->required();
    swp->add_option("--values", values, "comma separated values (may be empty)");
    swp->add_option("--inner", cfg.inner, "estimand");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    cfg.values = split(values);

    try {
        validate(cfg);
        if (sim->parsed()) {
            cfg.command = "simulate";
            if (cfg.format == "auto")
                cfg.format = "csv";
            return cmd_simulate(cfg, out, err);
        }
        if (ver->parsed()) {
            cfg.command = "verify";
            if (cfg.format == "auto")
                cfg.format = "json";
            return cmd_verify(cfg, out, err);
        }
        cfg.command = "sweep";
        if (cfg.format == "auto")
            cfg.format = "csv";
        return cmd_sweep(cfg, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

} // namespace bmhull::cli
