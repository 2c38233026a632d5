#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bmhull::cli {

struct RunConfig
{
    std::string command;
    std::uint64_t seed = 1;
    std::vector<double> alpha{10.0};
    double kappa = 1.0;
    int dim = 2;
    int n = 2;
    double a = 0.1;
    std::optional<std::uint64_t> replicas;
    int grid = 1024;
    double confidence = 0.99;
    std::string format = "auto"; // csv | json | auto
    std::string out;             // output directory
    int workers = 0;

    // verify
    std::string suite;
    // sweep
    std::string param;
    std::vector<std::string> values;
    std::string inner = "prob_R_complement";

    /// Flags that shape results; workers and out are deliberately absent.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

enum ExitCode : int
{
    kOk = 0,
    kCriterionFailed = 1,
    kUsage = 2,
    kIo = 3,
};

/// Full command line without the program name. Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bmhull::cli
