#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bmhull {

/// One checked statement: an observed value against a target or bound.
struct CriterionResult
{
    std::string suite;
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double margin = 0.0; // signed distance to failure; >= 0 passes for bound checks
    bool pass = false;
    std::string detail;
};

struct SuiteOptions
{
    std::optional<std::uint64_t> replicas; // per-suite default when unset
    std::uint64_t seed = 20240611;
    int grid = 1024;
    double confidence = 0.99;
    int workers = 0;
};

std::vector<CriterionResult> suite_spitzer(const SuiteOptions& opts);
std::vector<CriterionResult> suite_campbell(const SuiteOptions& opts);
std::vector<CriterionResult> suite_lemma8(const SuiteOptions& opts);
std::vector<CriterionResult> suite_lemma3(const SuiteOptions& opts);
std::vector<CriterionResult> suite_lemma4(const SuiteOptions& opts);
std::vector<CriterionResult> suite_hull(const SuiteOptions& opts);
std::vector<CriterionResult> suite_bounds(const SuiteOptions& opts);

const std::vector<std::string>& suite_names();

/// Dispatch by name; throws ArgumentError for an unknown suite.
std::vector<CriterionResult> run_suite(const std::string& name, const SuiteOptions& opts);

} // namespace bmhull
