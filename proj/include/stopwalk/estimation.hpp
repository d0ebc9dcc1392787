#pragma once

#include "stopwalk/path_counting.hpp"

namespace stopwalk {

// A process observed to first boundary crossing; y is the sufficient
// statistic, N its order.
struct StopObservation {
    Point y;
    Int n = 0;
};

// The unbiased estimator: p-hat_i = k*_i(y) / k(y), exact.
std::vector<Rational> unbiased_estimate(const PathCountTable& table,
                                        const Point& y);

// Sample proportions y_i / N.
std::vector<Rational> ml_estimate(const Point& y);

// Closed form for single-level linear walks (one +1 category, one -1, rest
// null): ((b-1)/b) y_up/(N-1), ((b+1)/b) y_down/(N-1), y_i/(N-1) elsewhere.
// N = 1 is routed through the zero-length-path convention (indicator at up).
std::vector<Rational> closed_form_linear(const Point& y, Int b, int up_index,
                                         int down_index);

// 2D-lattice walk (k = 4, up = category 1, down = category 3).
std::vector<Rational> closed_form_lattice2d(const Point& y, Int b);

// Null-step walk (k = 3, up = category 1, down = category 3).
std::vector<Rational> closed_form_nullstep(const Point& y, Int b);

struct UnbiasednessCheck {
    std::vector<Rational> p;
    int category = 0;
    Rational expected;  // sum over boundary of p-hat_i(y) P(y)
    bool holds = false;
};

struct UnbiasednessReport {
    bool all_hold = false;
    Int horizon = 0;
    std::vector<UnbiasednessCheck> checks;
};

// Exact verification that E[p-hat_i] = p_i on a grid of rational models.
// Requires the region to be ClosedExact at the horizon (else
// NotClosedAtHorizon).
UnbiasednessReport verify_unbiasedness(
    const Region& region, Int horizon,
    const std::vector<std::vector<Rational>>& p_grid);

}  // namespace stopwalk
