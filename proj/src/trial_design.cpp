#include "stopwalk/trial_design.hpp"

#include <map>

namespace stopwalk {

namespace {

Natural multinomial3(Int n, Int a, Int b, Int c) {
    if (a < 0 || b < 0 || c < 0 || a + b + c != n) return Natural(0);
    Natural result;
    mpz_fac_ui(result.get_mpz_t(), static_cast<unsigned long>(n));
    for (Int part : {a, b, c}) {
        Natural f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(part));
        mpz_divexact(result.get_mpz_t(), result.get_mpz_t(), f.get_mpz_t());
    }
    return result;
}

using StateWeights = std::map<std::pair<Int, Int>, Natural>;

// Reachable (r, e) states at each decision stage, given which states
// continue. predicate(s, r, e) decides continuation at stage s.
std::vector<std::set<std::pair<Int, Int>>> reachable_states(
    const TrialDesign& design,
    const std::function<bool(int, Int, Int)>& continues) {
    std::vector<std::set<std::pair<Int, Int>>> per_stage;
    std::set<std::pair<Int, Int>> sources{{0, 0}};
    for (int s = 1; s <= design.stage_count(); ++s) {
        Int n = design.stage(s).n;
        std::set<std::pair<Int, Int>> states;
        for (const auto& [r0, e0] : sources)
            for (Int dr = 0; dr <= n; ++dr)
                for (Int de = 0; de + dr <= n; ++de)
                    states.insert({r0 + dr, e0 + de});
        per_stage.push_back(states);
        sources.clear();
        for (const auto& [r, e] : states)
            if (continues(s, r, e)) sources.insert({r, e});
    }
    return per_stage;
}

}  // namespace

TrialDesign::TrialDesign(std::vector<TrialStage> stages) : stages_(std::move(stages)) {
    if (stages_.empty()) fail("InvalidDesign", "a design needs at least one stage");
    cumulative_.push_back(0);
    for (auto& stage : stages_) {
        if (stage.n < 1) fail("InvalidDesign", "stage sizes must be >= 1");
        cumulative_.push_back(cumulative_.back() + stage.n);
    }
    stages_.back().final_stage = true;
    for (std::size_t i = 0; i + 1 < stages_.size(); ++i)
        if (stages_[i].final_stage)
            fail("InvalidDesign", "only the last stage may carry the final rule");
}

int TrialDesign::stage_at(Int j) const {
    for (int s = 1; s <= stage_count(); ++s)
        if (cumulative_[static_cast<std::size_t>(s)] == j) return s;
    return 0;
}

std::vector<std::string> TrialDesign::validate() const {
    std::vector<std::string> notes;
    const int K = stage_count();
    for (int s = 1; s < K; ++s) {
        const auto& stage = this->stage(s);
        if (!stage.ineffective)
            fail("InvalidDesign",
                 "interior stage " + std::to_string(s) + " needs an ineffective rule");
        if (!(stage.ineffective->r_max < stage.promising.r_min))
            fail("InvalidDesign", "need r_max < r_min at stage " + std::to_string(s));
        if (!(stage.promising.e_max < stage.ineffective->e_min))
            fail("InvalidDesign", "need e_max < e_min at stage " + std::to_string(s));
    }

    // The stop rules must be disjoint on every reachable decision state;
    // Continue is the complement, so disjointness gives a partition.
    auto reachable = reachable_states(*this, [&](int s, Int r, Int e) {
        TrialState state{cumulative(s), r, e};
        return trial_decision(*this, state) == TrialDecision::Continue;
    });
    for (int s = 1; s < K; ++s) {
        const auto& stage = this->stage(s);
        bool any_continue = false;
        for (const auto& [r, e] : reachable[static_cast<std::size_t>(s - 1)]) {
            bool promising = r >= stage.promising.r_min && e <= stage.promising.e_max;
            bool ineffective = r <= stage.ineffective->r_max && e >= stage.ineffective->e_min;
            if (promising && ineffective)
                fail("OverlappingRules",
                     "stage " + std::to_string(s) + " state (r=" + std::to_string(r) +
                         ",e=" + std::to_string(e) + ") is both promising and ineffective");
            if (!promising && !ineffective) any_continue = true;
        }
        if (!any_continue)
            notes.push_back("stage " + std::to_string(s + 1) +
                            " is unreachable: every stage-" + std::to_string(s) +
                            " state stops the trial");
    }
    return notes;
}

TrialDecision trial_decision(const TrialDesign& design, const TrialState& state) {
    int s = design.stage_at(state.j);
    if (s == 0)
        fail("NotDecisionStage",
             "j=" + std::to_string(state.j) + " is not a stage boundary");
    const auto& stage = design.stage(s);
    bool promising = state.r >= stage.promising.r_min && state.e <= stage.promising.e_max;
    if (stage.final_stage) return promising ? TrialDecision::Promising : TrialDecision::Ineffective;
    if (!stage.ineffective)
        fail("InvalidDesign", "interior stage " + std::to_string(s) + " lacks an ineffective rule");
    if (promising) return TrialDecision::Promising;
    if (state.r <= stage.ineffective->r_max && state.e >= stage.ineffective->e_min)
        return TrialDecision::Ineffective;
    return TrialDecision::Continue;
}

std::vector<std::set<std::pair<Int, Int>>> continuation_regions(
    const TrialDesign& design) {
    auto reachable = reachable_states(design, [&](int s, Int r, Int e) {
        TrialState state{design.cumulative(s), r, e};
        return trial_decision(design, state) == TrialDecision::Continue;
    });
    std::vector<std::set<std::pair<Int, Int>>> out;
    for (int s = 1; s <= design.stage_count(); ++s) {
        std::set<std::pair<Int, Int>> continuation;
        if (s < design.stage_count())
            for (const auto& [r, e] : reachable[static_cast<std::size_t>(s - 1)]) {
                TrialState state{design.cumulative(s), r, e};
                if (trial_decision(design, state) == TrialDecision::Continue)
                    continuation.insert({r, e});
            }
        out.push_back(std::move(continuation));  // stage K is always empty
    }
    return out;
}

Region trial_region(std::shared_ptr<const TrialDesign> design) {
    auto rule = [design](const Point& x) {
        Int j = x[0] + x[1] + x[2];
        if (j >= design->total_patients()) return false;
        int s = design->stage_at(j);
        if (s == 0) return true;  // between decision points the trial continues
        TrialState state{j, x[0], x[2]};
        return trial_decision(*design, state) == TrialDecision::Continue;
    };
    std::string description = "trial(K=" + std::to_string(design->stage_count()) + ")";
    return Region::predicate(3, design->total_patients(), std::move(rule),
                             std::shared_ptr<const void>(design), std::move(description));
}

TrialEstimate trial_unbiased_estimate(const TrialDesign& design,
                                      const TrialState& terminal, int stage) {
    if (stage < 1 || stage > design.stage_count())
        fail("NotStopState", "stage out of range");
    if (terminal.j != design.cumulative(stage))
        fail("NotStopState", "terminal order does not match the stage size");
    if (trial_decision(design, terminal) == TrialDecision::Continue)
        fail("NotStopState", "terminal state continues the trial");

    auto continuation = continuation_regions(design);

    // Stage-wise DP. `init` seeds stage-1 weights; later stages accumulate
    // multinomial transition counts through continuation states only.
    auto run_dp = [&](const std::function<Natural(Int, Int)>& init) {
        StateWeights weights;
        Int n1 = design.stage(1).n;
        for (Int r = 0; r <= n1; ++r)
            for (Int e = 0; r + e <= n1; ++e) {
                Natural w = init(r, e);
                if (w != 0) weights[{r, e}] = std::move(w);
            }
        for (int s = 2; s <= stage; ++s) {
            const auto& cont = continuation[static_cast<std::size_t>(s - 2)];
            Int n = design.stage(s).n;
            StateWeights next;
            for (const auto& [state, w] : weights) {
                if (!cont.count(state)) continue;
                for (Int dr = 0; dr <= n; ++dr)
                    for (Int de = 0; dr + de <= n; ++de)
                        next[{state.first + dr, state.second + de}] +=
                            w * multinomial3(n, dr, n - dr - de, de);
            }
            weights = std::move(next);
        }
        auto it = weights.find({terminal.r, terminal.e});
        return it == weights.end() ? Natural(0) : it->second;
    };

    Int n1 = design.stage(1).n;
    Natural den = run_dp([&](Int r, Int e) { return multinomial3(n1, r, n1 - r - e, e); });
    if (den == 0) fail("NotStopState", "terminal state is unreachable");
    Natural num_response =
        run_dp([&](Int r, Int e) { return multinomial3(n1 - 1, r - 1, n1 - r - e, e); });
    Natural num_progression =
        run_dp([&](Int r, Int e) { return multinomial3(n1 - 1, r, n1 - r - e, e - 1); });

    TrialEstimate estimate;
    estimate.p_response = Rational(num_response, den);
    estimate.p_response.canonicalize();
    estimate.p_progression = Rational(num_progression, den);
    estimate.p_progression.canonicalize();
    estimate.p_nonresponse = Rational(1) - estimate.p_response - estimate.p_progression;
    return estimate;
}

}  // namespace stopwalk
