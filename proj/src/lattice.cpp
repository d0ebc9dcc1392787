#include "stopwalk/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace stopwalk {

namespace {

std::string point_string(const Point& x) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << ")";
    return os.str();
}

std::vector<std::string> default_labels(int k) {
    std::vector<std::string> out;
    for (int i = 1; i <= k; ++i) out.push_back("p" + std::to_string(i));
    return out;
}

}  // namespace

Int order_of(const Point& x) {
    return std::accumulate(x.begin(), x.end(), Int{0});
}

std::vector<Point> successors(const Point& x) {
    std::vector<Point> out;
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        Point next = x;
        ++next[i];
        out.push_back(std::move(next));
    }
    return out;
}

OutcomeModel OutcomeModel::from_rationals(std::vector<Rational> probs,
                                          std::vector<std::string> labels) {
    OutcomeModel m;
    m.k = static_cast<int>(probs.size());
    Rational sum(0);
    for (const auto& q : probs) {
        if (q < 0) fail("InvalidModel", "probabilities must be >= 0");
        sum += q;
    }
    if (sum != 1) fail("InvalidModel", "probabilities must sum to 1 exactly");
    m.exact = true;
    m.p_exact = std::move(probs);
    for (const auto& q : m.p_exact) m.p.push_back(q.get_d());
    m.labels = labels.empty() ? default_labels(m.k) : std::move(labels);
    if (static_cast<int>(m.labels.size()) != m.k)
        fail("InvalidModel", "labels length must equal k");
    return m;
}

OutcomeModel OutcomeModel::from_decimals(std::vector<double> probs,
                                         std::vector<std::string> labels) {
    OutcomeModel m;
    m.k = static_cast<int>(probs.size());
    double sum = 0;
    for (double v : probs) {
        if (v < 0) fail("InvalidModel", "probabilities must be >= 0");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        fail("InvalidModel", "probabilities must sum to 1 within 1e-12");
    m.exact = false;
    m.p = std::move(probs);
    m.labels = labels.empty() ? default_labels(m.k) : std::move(labels);
    if (static_cast<int>(m.labels.size()) != m.k)
        fail("InvalidModel", "labels length must equal k");
    return m;
}

Region Region::linear(std::vector<Int> coeffs, Int target, Int horizon) {
    Region r;
    r.kind_ = RegionKind::LinearRule;
    r.k_ = static_cast<int>(coeffs.size());
    r.coeffs_ = std::move(coeffs);
    r.target_ = target;
    r.horizon_ = horizon;
    std::ostringstream os;
    os << "linear a=" << point_string(r.coeffs_) << " b=" << target;
    r.description_ = os.str();
    return r;
}

Region Region::explicit_finite(std::vector<Point> accessible) {
    Region r;
    r.kind_ = RegionKind::ExplicitFinite;
    if (accessible.empty()) fail("EmptyRegion", "explicit region has no points");
    r.k_ = static_cast<int>(accessible.front().size());
    Int max_order = 0;
    for (const auto& x : accessible) {
        if (static_cast<int>(x.size()) != r.k_)
            fail("DimensionMismatch", "mixed dimensions in explicit region");
        max_order = std::max(max_order, order_of(x));
    }
    r.explicit_accessible_.insert(accessible.begin(), accessible.end());
    r.horizon_ = max_order + 1;  // boundary lives one step past the region
    r.description_ = "explicit(" + std::to_string(r.explicit_accessible_.size()) + " points)";
    return r;
}

Region Region::predicate(int k, Int horizon, std::function<bool(const Point&)> rule,
                         std::shared_ptr<const void> keepalive,
                         std::string description) {
    Region r;
    r.kind_ = RegionKind::TrialRule;
    r.k_ = k;
    r.horizon_ = horizon;
    r.rule_ = std::move(rule);
    r.keepalive_ = std::move(keepalive);
    r.description_ = std::move(description);
    return r;
}

bool Region::accessible_raw(const Point& x) const {
    switch (kind_) {
        case RegionKind::LinearRule: {
            Int level = 0;
            for (int i = 0; i < k_; ++i) level += coeffs_[i] * x[i];
            return level < target_;
        }
        case RegionKind::ExplicitFinite:
            return explicit_accessible_.count(x) > 0;
        case RegionKind::TrialRule:
            return rule_(x);
    }
    return false;
}

const std::vector<Int>& Region::coeffs() const {
    if (kind_ != RegionKind::LinearRule)
        fail("WrongRegionKind", "coeffs() requires a linear rule region");
    return coeffs_;
}

Int Region::target() const {
    if (kind_ != RegionKind::LinearRule)
        fail("WrongRegionKind", "target() requires a linear rule region");
    return target_;
}

const std::set<Point>& Region::declared_accessible() const {
    if (kind_ != RegionKind::ExplicitFinite)
        fail("WrongRegionKind", "declared_accessible() requires an explicit region");
    return explicit_accessible_;
}

void sweep_region(const Region& region, Int horizon,
                  const std::function<void(Int, const std::vector<Point>&,
                                           const std::vector<Point>&)>& visit) {
    // Explicit finite regions are self-limiting; their derived horizon is a
    // hint, not a cap.
    if (horizon > region.horizon() && region.kind() != RegionKind::ExplicitFinite)
        fail("HorizonExceeded", "requested order " + std::to_string(horizon) +
                                    " exceeds region horizon " +
                                    std::to_string(region.horizon()));
    Point origin(region.dimension(), 0);
    if (!region.accessible_raw(origin))
        fail("OriginNotAccessible", "the origin is not in the accessible region");

    std::vector<Point> frontier{origin};
    visit(0, frontier, {});
    for (Int n = 1; n <= horizon; ++n) {
        std::set<Point> next_accessible, next_boundary;
        for (const auto& x : frontier)
            for (auto& s : successors(x)) {
                if (region.accessible_raw(s))
                    next_accessible.insert(std::move(s));
                else
                    next_boundary.insert(std::move(s));
            }
        std::vector<Point> acc(next_accessible.begin(), next_accessible.end());
        std::vector<Point> bnd(next_boundary.begin(), next_boundary.end());
        visit(n, acc, bnd);
        frontier = std::move(acc);
        if (frontier.empty() && n < horizon) {
            // Region exhausted; remaining orders are empty.
            for (Int m = n + 1; m <= horizon; ++m) visit(m, {}, {});
            return;
        }
    }
}

std::vector<Point> simplex_slice(int k, Int n) {
    std::vector<Point> out;
    Point current(static_cast<std::size_t>(k), 0);
    // Lexicographic recursion over compositions of n into k parts.
    std::function<void(int, Int)> rec = [&](int idx, Int remaining) {
        if (idx == k - 1) {
            current[idx] = remaining;
            out.push_back(current);
            return;
        }
        for (Int v = 0; v <= remaining; ++v) {
            current[idx] = v;
            rec(idx + 1, remaining - v);
        }
    };
    rec(0, n);
    return out;
}

RegionSlice enumerate_slice(const Region& region, Int n) {
    RegionSlice slice;
    slice.n = n;
    sweep_region(region, n,
                 [&](Int m, const std::vector<Point>& acc,
                     const std::vector<Point>& bnd) {
                     if (m == n) {
                         slice.accessible = acc;
                         slice.boundary = bnd;
                     }
                 });
    std::set<Point> acc_set(slice.accessible.begin(), slice.accessible.end());
    for (auto& x : simplex_slice(region.dimension(), n))
        if (!acc_set.count(x)) slice.inaccessible.push_back(std::move(x));
    return slice;
}

std::vector<Point> boundary_points(const Region& region, Int horizon) {
    std::vector<Point> out;
    sweep_region(region, horizon,
                 [&](Int, const std::vector<Point>&, const std::vector<Point>& bnd) {
                     out.insert(out.end(), bnd.begin(), bnd.end());
                 });
    return out;
}

ValidationReport validate_region(const Region& region) {
    ValidationReport report;
    if (region.dimension() < 2)
        fail("DegenerateCategoryCount", "regions need k >= 2 outcome categories");
    Point origin(region.dimension(), 0);
    if (!region.accessible_raw(origin))
        fail("OriginNotAccessible", "the origin is not in the accessible region");

    if (region.kind() == RegionKind::ExplicitFinite) {
        std::set<Point> reached;
        sweep_region(region, region.horizon(),
                     [&](Int, const std::vector<Point>& acc, const std::vector<Point>&) {
                         reached.insert(acc.begin(), acc.end());
                     });
        for (const auto& x : region.declared_accessible())
            if (!reached.count(x)) {
                ++report.pruned;
                report.notes.push_back("pruned unreachable point " + point_string(x));
            }
    } else if (region.kind() == RegionKind::LinearRule) {
        // Every point below the level is reachable below the level (order the
        // steps by ascending level effect), so pruning never removes anything.
        Int max_abs = 0;
        for (Int a : region.coeffs()) max_abs = std::max(max_abs, a < 0 ? -a : a);
        if (max_abs >= 2)
            report.notes.push_back(
                "coefficients with |a_i| >= 2: boundary may overshoot the target level");
        if (region.target() < 1)
            fail("OriginNotAccessible", "linear rule excludes the origin (target <= 0)");
    } else {
        // Rule-backed region: count rule-accessible points that are not
        // reachable, order by order.
        std::set<Point> reached;
        sweep_region(region, region.horizon(),
                     [&](Int, const std::vector<Point>& acc, const std::vector<Point>&) {
                         reached.insert(acc.begin(), acc.end());
                     });
        for (Int n = 0; n <= region.horizon(); ++n)
            for (const auto& x : simplex_slice(region.dimension(), n))
                if (region.accessible_raw(x) && !reached.count(x)) ++report.pruned;
    }
    report.valid = true;
    return report;
}

}  // namespace stopwalk
