#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stopwalk/errors.hpp"
#include "stopwalk/rational.hpp"

namespace stopwalk {

// A lattice point: occurrence counts per outcome category.
using Point = std::vector<Int>;

Int order_of(const Point& x);

// The k unit-increment successors x + e_i, in category order.
std::vector<Point> successors(const Point& x);

// Outcome categories and their probabilities. Estimation never reads p;
// this type feeds simulation and closedness/unbiasedness verification.
struct OutcomeModel {
    int k = 0;
    std::vector<double> p;              // numeric view, always populated
    std::vector<Rational> p_exact;      // populated iff exact == true
    bool exact = false;
    std::vector<std::string> labels;    // optional, defaults to "p1".."pk"

    static OutcomeModel from_rationals(std::vector<Rational> probs,
                                       std::vector<std::string> labels = {});
    static OutcomeModel from_decimals(std::vector<double> probs,
                                      std::vector<std::string> labels = {});
};

enum class RegionKind { ExplicitFinite, LinearRule, TrialRule };

// An accessible stopping region. The boundary is always derived: points not
// accessible but reachable in one unit step from an accessible point.
// Immutable after construction.
class Region {
public:
    // Empty placeholder; any use before assigning a real region fails
    // dimension checks.
    Region() = default;

    // Accessible iff coeffs . x < target (and reachable, which for linear
    // rules is automatic: any point below the level can be ordered so every
    // prefix stays below it).
    static Region linear(std::vector<Int> coeffs, Int target, Int horizon);

    static Region explicit_finite(std::vector<Point> accessible);

    // Rule-backed region with an arbitrary accessibility predicate; used by
    // trial designs. `keepalive` pins whatever the predicate captures.
    static Region predicate(int k, Int horizon,
                            std::function<bool(const Point&)> rule,
                            std::shared_ptr<const void> keepalive,
                            std::string description);

    RegionKind kind() const { return kind_; }
    int dimension() const { return k_; }
    Int horizon() const { return horizon_; }
    const std::string& description() const { return description_; }

    // Rule membership only; reachability pruning happens at enumeration.
    bool accessible_raw(const Point& x) const;

    // LinearRule accessors (throw on other kinds).
    const std::vector<Int>& coeffs() const;
    Int target() const;
    const std::set<Point>& declared_accessible() const;

private:
    RegionKind kind_ = RegionKind::ExplicitFinite;
    int k_ = 0;
    Int horizon_ = 0;
    std::vector<Int> coeffs_;
    Int target_ = 0;
    std::set<Point> explicit_accessible_;
    std::function<bool(const Point&)> rule_;
    std::shared_ptr<const void> keepalive_;
    std::string description_;
};

// The order-n cross-section: reachable accessible points R_n, boundary B_n,
// and every other order-n point (inaccessible, a superset of B_n).
// All three lists are lexicographically sorted.
struct RegionSlice {
    Int n = 0;
    std::vector<Point> accessible;
    std::vector<Point> boundary;
    std::vector<Point> inaccessible;
};

RegionSlice enumerate_slice(const Region& region, Int n);

// Union of B_n for n <= horizon, ordered by (n, lex).
std::vector<Point> boundary_points(const Region& region, Int horizon);

struct ValidationReport {
    bool valid = false;
    Int pruned = 0;  // declared accessible but unreachable through R
    std::vector<std::string> notes;
};

ValidationReport validate_region(const Region& region);

// Streams (n, R_n, B_n) for n = 0..horizon without materializing full
// simplex slices; the workhorse behind enumeration, counting and mass
// propagation. Callback receives sorted vectors.
void sweep_region(const Region& region, Int horizon,
                  const std::function<void(Int, const std::vector<Point>&,
                                           const std::vector<Point>&)>& visit);

// All points of order n with k natural coordinates, lexicographic.
std::vector<Point> simplex_slice(int k, Int n);

}  // namespace stopwalk
