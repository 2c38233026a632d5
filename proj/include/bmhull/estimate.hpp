#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "bmhull/rng.hpp"

namespace bmhull {

enum class Execution
{
    parallel,
    serial
};

struct EstimatorConfig
{
    std::uint64_t replicas = 10000;
    std::uint64_t master_seed = 1;
    int grid_points_per_unit_time = 1024;
    double confidence_level = 0.99;
    int workers = 0; // 0: OpenMP default
    Execution execution = Execution::parallel;

    void validate() const;
};

struct Estimate
{
    double mean = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t replicas = 0;
    bool indicator = false;     // probability estimand from 0/1 samples
    std::uint64_t successes = 0; // meaningful when indicator
    EstimatorConfig config;

    bool covers(double x) const { return ci_low <= x && x <= ci_high; }
    bool overlaps(const Estimate& o) const { return ci_low <= o.ci_high && o.ci_low <= ci_high; }
};

/// Two-sided normal quantile z with P(|Z| <= z) = level.
double normal_quantile_two_sided(double level);

/// Standard normal CDF.
double normal_cdf(double x);

/// Estimate from replica sums. For indicator estimands with no (or only)
/// successes the interval is the exact one-sided binomial bound
/// [0, 1 - (1-level)^{1/N}] (or its mirror); otherwise mean +- z * se,
/// clipped to [0, 1] for indicators.
Estimate summarize(double sum, double sum_sq, std::uint64_t n, bool indicator, const EstimatorConfig& config);

/// Multiply mean, standard error and interval by a positive factor.
Estimate scaled(const Estimate& e, double factor);

/// FNV-1a hash of an estimand name, used as the stream tag.
constexpr std::uint64_t tag_of(std::string_view name)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// omp_get_max_threads(), or 1 without OpenMP.
int omp_max_threads_or_one();

/// Replicas are processed in fixed blocks of this size; per-block sums are
/// reduced in block order, so the result does not depend on the schedule.
inline constexpr std::uint64_t kReplicaBlock = 64;

/// Runs `kernel(replica, rng) -> double` for every replica with stream
/// stream_id(tag, replica) under the config's master seed and returns the
/// summarized estimate. Bit-identical for any worker count.
template <class Kernel>
Estimate run_replicas(const EstimatorConfig& config, std::uint64_t tag, bool indicator, Kernel&& kernel)
{
    config.validate();
    const std::uint64_t n = config.replicas;
    const std::uint64_t nb = (n + kReplicaBlock - 1) / kReplicaBlock;
    std::vector<double> sums(nb, 0.0), sqs(nb, 0.0);
    std::exception_ptr error;
    std::mutex error_mutex;

    auto block = [&](std::uint64_t b) {
        double s = 0.0, q = 0.0;
        const std::uint64_t end = std::min(n, (b + 1) * kReplicaBlock);
        for (std::uint64_t r = b * kReplicaBlock; r < end; ++r) {
            RandomStream rng(config.master_seed, stream_id(tag, r));
            const double v = kernel(r, rng);
            s += v;
            q += v * v;
        }
        sums[b] = s;
        sqs[b] = q;
    };

    if (config.execution == Execution::serial) {
        for (std::uint64_t b = 0; b < nb; ++b)
            block(b);
    } else {
        const long nbl = static_cast<long>(nb);
        const int workers = config.workers;
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers > 0 ? workers : omp_max_threads_or_one())
        for (long b = 0; b < nbl; ++b) {
            try {
                block(static_cast<std::uint64_t>(b));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
        if (error)
            std::rethrow_exception(error);
    }

    double sum = 0.0, sq = 0.0;
    for (std::uint64_t b = 0; b < nb; ++b) {
        sum += sums[b];
        sq += sqs[b];
    }
    return summarize(sum, sq, n, indicator, config);
}

} // namespace bmhull
