#pragma once

#include <map>

#include "stopwalk/lattice.hpp"

namespace stopwalk {

// Exact path counts per lattice point: k(x) paths from the origin through R,
// and k*_i(x) paths whose first step was category i. Boundary points carry
// counts but no outgoing paths.
class PathCountTable {
public:
    struct Entry {
        Natural total;                   // k(x)
        std::vector<Natural> from_unit;  // k*_1(x)..k*_k(x)
        bool is_boundary = false;
        Int order = 0;
    };

    const Entry* find(const Point& x) const;

    // Entry for a boundary point; throws NotBoundary / UnknownPoint.
    const Entry& boundary_entry(const Point& y) const;

    const std::map<Point, Entry>& entries() const { return entries_; }
    Int horizon() const { return horizon_; }
    int dimension() const { return k_; }

private:
    friend PathCountTable count_paths(const Region&, Int);
    std::map<Point, Entry> entries_;
    Int horizon_ = 0;
    int k_ = 0;
};

PathCountTable count_paths(const Region& region, Int horizon);

// Eq: P(y) = k(y) p_1^{y_1} ... p_k^{y_k} over boundary points in the table.
// Exact variant requires a rational model.
std::map<Point, Rational> first_passage_pmf(const PathCountTable& table,
                                            const OutcomeModel& model);
std::map<Point, double> first_passage_pmf_numeric(const PathCountTable& table,
                                                  const OutcomeModel& model);

// Reflection-principle count for walks whose level a.x moves +1 on one
// category, -1 on another and 0 elsewhere: (b/N) * N! / (y_1!...y_k!).
// Always integral; asserts divisibility.
Natural cycle_count_first_passage(Int b, const Point& y, int up_index,
                                  int down_index);

}  // namespace stopwalk
