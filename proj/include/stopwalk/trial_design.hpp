#pragma once

#include <memory>
#include <set>
#include <utility>

#include "stopwalk/lattice.hpp"

namespace stopwalk {

// Multistage phase II multinomial design. Categories are fixed:
// 1 = responder, 2 = non-responder, 3 = early progression.
struct PromisingRule {
    Int r_min = 0;  // stop promising iff r >= r_min and e <= e_max
    Int e_max = 0;
};

struct IneffectiveRule {
    Int r_max = 0;  // stop ineffective iff r <= r_max and e >= e_min
    Int e_min = 0;
};

struct TrialStage {
    Int n = 0;  // patients enrolled this stage
    PromisingRule promising;
    std::optional<IneffectiveRule> ineffective;  // absent at the final stage
    bool final_stage = false;  // final: promising rule, else ineffective
};

class TrialDesign {
public:
    explicit TrialDesign(std::vector<TrialStage> stages);

    int stage_count() const { return static_cast<int>(stages_.size()); }
    const TrialStage& stage(int s) const { return stages_.at(s - 1); }  // 1-based
    Int cumulative(int s) const { return cumulative_.at(s); }           // N_s
    Int total_patients() const { return cumulative_.back(); }

    // Stage index with N_s == j, or 0 if j is not a decision point.
    int stage_at(Int j) const;

    // Throws on invalid designs; notes carry non-fatal observations such as
    // unreachable stages.
    std::vector<std::string> validate() const;

private:
    std::vector<TrialStage> stages_;
    std::vector<Int> cumulative_;  // cumulative_[s] = N_s, cumulative_[0] = 0
};

enum class TrialDecision { Promising, Ineffective, Continue };

struct TrialState {
    Int j = 0;  // patients seen
    Int r = 0;  // responders
    Int e = 0;  // early progressions
};

// Decision at a stage boundary (state.j must equal some N_s).
TrialDecision trial_decision(const TrialDesign& design, const TrialState& state);

// Reachable continuation states (r, e) per decision stage s = 1..K-1;
// the stage-K set is always empty.
std::vector<std::set<std::pair<Int, Int>>> continuation_regions(
    const TrialDesign& design);

// The design embedded as a k = 3 accessible region over points (r, y, e).
Region trial_region(std::shared_ptr<const TrialDesign> design);

struct TrialEstimate {
    Rational p_response;     // p-hat_1
    Rational p_nonresponse;  // p-hat_2 = 1 - p-hat_1 - p-hat_3
    Rational p_progression;  // p-hat_3
};

// Nested-sum estimators evaluated by stage-wise DP over continuation states.
// `stage` is the stage S at which the terminal state was observed.
TrialEstimate trial_unbiased_estimate(const TrialDesign& design,
                                      const TrialState& terminal, int stage);

}  // namespace stopwalk
