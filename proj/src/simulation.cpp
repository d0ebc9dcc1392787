#include "stopwalk/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "stopwalk/estimation.hpp"
#include "stopwalk/path_counting.hpp"

namespace stopwalk {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    // Two mixing rounds decorrelate (seed, index) pairs; the mapping is part
    // of the reproducibility contract and must not change.
    SplitMix64 mixer(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
    mixer.next();
    return mixer.next();
}

PathOutcome sample_path(const OutcomeModel& model, const Region& region,
                        SplitMix64& stream, Int max_steps) {
    std::vector<double> cumulative(model.p.size());
    double acc = 0;
    for (std::size_t i = 0; i < model.p.size(); ++i) {
        acc += model.p[i];
        cumulative[i] = acc;
    }
    cumulative.back() = 1.0;  // guard against rounding in the last bucket

    PathOutcome outcome;
    Point x(static_cast<std::size_t>(model.k), 0);
    for (Int step = 0; step < max_steps; ++step) {
        double u = stream.uniform();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        auto i = static_cast<std::size_t>(it - cumulative.begin());
        if (i >= cumulative.size()) i = cumulative.size() - 1;
        ++x[i];
        ++outcome.steps;
        if (!region.accessible_raw(x)) {
            outcome.absorbed = true;
            outcome.y = std::move(x);
            return outcome;
        }
    }
    outcome.absorbed = false;
    outcome.y = std::move(x);
    return outcome;
}

std::vector<CategoryStats> summarize(
    const std::vector<std::vector<double>>& estimates,
    const std::vector<double>& true_p) {
    if (estimates.empty()) fail("EmptyInput", "no estimates to summarize");
    const std::size_t k = true_p.size();
    const auto n = static_cast<double>(estimates.size());

    auto kahan_sum = [&](const std::function<double(const std::vector<double>&)>& term) {
        double sum = 0, carry = 0;
        for (const auto& est : estimates) {
            double value = term(est) - carry;
            double next = sum + value;
            carry = (next - sum) - value;
            sum = next;
        }
        return sum;
    };

    std::vector<CategoryStats> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        double mean = kahan_sum([&](const auto& e) { return e[i]; }) / n;
        double ss = kahan_sum([&](const auto& e) { return (e[i] - mean) * (e[i] - mean); });
        double mse = kahan_sum([&](const auto& e) {
                         return (e[i] - true_p[i]) * (e[i] - true_p[i]);
                     }) / n;
        out[i].mean = mean;
        out[i].sd = estimates.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        out[i].mse = mse;
    }
    return out;
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("STOPWALK_THREADS")) {
        int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

struct LinearPreset {
    Int b = 0;
    int up = -1;
    int down = -1;
};

// A closed form exists when the rule has exactly one +1 and one -1
// coefficient and zeros elsewhere.
std::optional<LinearPreset> closed_form_preset(const Region& region) {
    if (region.kind() != RegionKind::LinearRule) return std::nullopt;
    LinearPreset preset;
    preset.b = region.target();
    for (std::size_t i = 0; i < region.coeffs().size(); ++i) {
        Int a = region.coeffs()[i];
        if (a == 1 && preset.up < 0)
            preset.up = static_cast<int>(i);
        else if (a == -1 && preset.down < 0)
            preset.down = static_cast<int>(i);
        else if (a != 0)
            return std::nullopt;
    }
    if (preset.up < 0 || preset.down < 0 || preset.b < 1) return std::nullopt;
    return preset;
}

}  // namespace

SimulationSummary run_study(const StudyConfig& config) {
    if (config.paths < 1) fail("InvalidConfig", "paths must be >= 1");
    if (config.max_steps < 1) fail("InvalidConfig", "max_steps must be >= 1");
    if (config.model.k != config.region.dimension())
        fail("DimensionMismatch", "model dimension does not match the region");

    auto preset = closed_form_preset(config.region);
    EstimatorMethod method = config.method;
    if (method == EstimatorMethod::Auto)
        method = preset ? EstimatorMethod::ClosedForm : EstimatorMethod::GeneralDP;
    if (method == EstimatorMethod::ClosedForm && !preset)
        fail("MethodMismatch",
             "closed-form estimators need a linear rule with one +1 and one -1 "
             "coefficient");

    std::optional<PathCountTable> table;
    if (method == EstimatorMethod::GeneralDP)
        table = count_paths(config.region, config.region.horizon());

    struct PathResult {
        bool absorbed = false;
        std::vector<double> ml;
        std::vector<double> unbiased;
    };
    std::vector<PathResult> results(static_cast<std::size_t>(config.paths));

    auto simulate_range = [&](long begin, long end) {
        for (long idx = begin; idx < end; ++idx) {
            SplitMix64 stream(substream_seed(config.seed, static_cast<std::uint64_t>(idx)));
            auto outcome = sample_path(config.model, config.region, stream,
                                       config.max_steps);
            auto& slot = results[static_cast<std::size_t>(idx)];
            slot.absorbed = outcome.absorbed;
            if (!outcome.absorbed) continue;

            for (const auto& q : ml_estimate(outcome.y))
                slot.ml.push_back(q.get_d());
            std::vector<Rational> unbiased =
                method == EstimatorMethod::ClosedForm
                    ? closed_form_linear(outcome.y, preset->b, preset->up, preset->down)
                    : unbiased_estimate(*table, outcome.y);
            for (const auto& q : unbiased) slot.unbiased.push_back(q.get_d());
        }
    };

    int workers = std::min<long>(resolve_thread_count(config.threads), config.paths);
    if (workers <= 1) {
        simulate_range(0, config.paths);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        long chunk = (config.paths + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            long begin = w * chunk;
            long end = std::min(config.paths, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                try {
                    simulate_range(begin, end);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    SimulationSummary summary;
    summary.seed = config.seed;
    std::vector<std::vector<double>> ml_list, unbiased_list;
    for (const auto& r : results) {
        if (!r.absorbed) {
            ++summary.n_failed;
            continue;
        }
        ++summary.n_absorbed;
        ml_list.push_back(r.ml);
        unbiased_list.push_back(r.unbiased);
    }
    double failed_fraction =
        static_cast<double>(summary.n_failed) / static_cast<double>(config.paths);
    if (failed_fraction > config.non_absorbed_limit)
        fail("TooManyNonAbsorbed",
             "non-absorbed fraction " + std::to_string(failed_fraction) +
                 " exceeds the configured limit; the region may not be closed "
                 "under this model or max_steps is too small");
    if (summary.n_absorbed == 0)
        fail("TooManyNonAbsorbed", "no path was absorbed");

    summary.ml = summarize(ml_list, config.model.p);
    summary.unbiased = summarize(unbiased_list, config.model.p);
    return summary;
}

}  // namespace stopwalk
