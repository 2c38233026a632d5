#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bmhull/estimate.hpp"
#include "bmhull/hull.hpp"
#include "bmhull/paths.hpp"
#include "bmhull/rain.hpp"
#include "bmhull/wedge.hpp"

namespace bmhull {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// Reproducibility header embedded in every output file.
struct Metadata
{
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> config; // ordered echo
    std::string version = kVersion;
    std::string wall_clock; // ISO-8601 UTC

    /// Current UTC time, or SOURCE_DATE_EPOCH when that variable is set.
    static std::string now();

    nlohmann::ordered_json to_json() const;
    /// "# key=value" lines.
    std::string to_csv_comments() const;
};

/// A header plus rows of already formatted cells.
struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv(const Metadata& meta) const;
    /// {"metadata": ..., "columns": [...], "rows": [{column: value}]}; cells
    /// that parse as numbers are emitted as numbers.
    nlohmann::ordered_json to_json(const Metadata& meta) const;
};

Table path_table(const PathSample& path);
Table rain_table(const Rain& rain);
nlohmann::ordered_json level_json(const RainLevel& level);

nlohmann::ordered_json hull_json(const Polytope& hull);
/// OFF for d = 3, 2D input padded with z = 0, nOFF with a dimension line for d = 4.
std::string hull_off(const Polytope& hull);

nlohmann::ordered_json estimate_json(const Estimate& e);
nlohmann::ordered_json witness_json(const DiscordantWitness& w);
nlohmann::ordered_json pair_json(const WedgePair& p);

} // namespace bmhull
