#pragma once

#include <cstdint>

#include "stopwalk/lattice.hpp"

namespace stopwalk {

// Counter-based splittable generator (splitmix64). The substream contract is
// part of the output format: path i always consumes the stream seeded by
// substream_seed(seed, i), so results are independent of thread count.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

struct PathOutcome {
    bool absorbed = false;
    Point y;       // boundary point when absorbed, last interior point else
    Int steps = 0;
};

// One walk: i.i.d. categorical draws by inverse CDF until the next point
// leaves the accessible region (that point is the boundary hit).
PathOutcome sample_path(const OutcomeModel& model, const Region& region,
                        SplitMix64& stream, Int max_steps);

enum class EstimatorMethod {
    Auto,        // closed form when the region supports it, else DP
    ClosedForm,  // require a single up/down linear rule
    GeneralDP,   // ratio estimator via a path-count table at region horizon
};

struct StudyConfig {
    OutcomeModel model;
    Region region;
    EstimatorMethod method = EstimatorMethod::Auto;
    long paths = 1;
    std::uint64_t seed = 0;
    Int max_steps = 1000000;
    double non_absorbed_limit = 0.001;  // fraction; exceeding it is an error
    int threads = 0;  // 0 = STOPWALK_THREADS env or hardware concurrency
};

struct CategoryStats {
    double mean = 0.0;
    double sd = 0.0;   // sample standard deviation, divisor n-1
    double mse = 0.0;  // mean squared deviation from the true p_i
};

struct SimulationSummary {
    std::vector<CategoryStats> ml;
    std::vector<CategoryStats> unbiased;
    long n_absorbed = 0;
    long n_failed = 0;
    std::uint64_t seed = 0;
};

SimulationSummary run_study(const StudyConfig& config);

// Per-category mean / sd / mse over a list of estimate vectors.
std::vector<CategoryStats> summarize(
    const std::vector<std::vector<double>>& estimates,
    const std::vector<double>& true_p);

// Resolved worker count: explicit > STOPWALK_THREADS > hardware.
int resolve_thread_count(int requested);

}  // namespace stopwalk
