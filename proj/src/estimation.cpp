#include "stopwalk/estimation.hpp"

#include "stopwalk/region_analysis.hpp"

namespace stopwalk {

std::vector<Rational> unbiased_estimate(const PathCountTable& table,
                                        const Point& y) {
    const auto& entry = table.boundary_entry(y);
    std::vector<Rational> out;
    out.reserve(entry.from_unit.size());
    for (const auto& starts : entry.from_unit) {
        Rational r(starts, entry.total);
        r.canonicalize();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<Rational> ml_estimate(const Point& y) {
    Int n = order_of(y);
    if (n < 1) fail("ZeroOrder", "ML estimate needs at least one observation");
    std::vector<Rational> out;
    out.reserve(y.size());
    for (Int c : y) {
        Rational r(static_cast<long>(c), static_cast<long>(n));
        r.canonicalize();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<Rational> closed_form_linear(const Point& y, Int b, int up_index,
                                         int down_index) {
    if (b < 1) fail("NotOnBoundary", "threshold b must be positive");
    if (y[up_index] - y[down_index] != b)
        fail("NotOnBoundary", "y_up - y_down must equal b");
    Int n = order_of(y);
    if (n < 1) fail("OrderTooSmall", "boundary order must be >= 1");
    const auto k = y.size();
    std::vector<Rational> out(k, Rational(0));
    if (n == 1) {
        // One-step absorption: the ratio form with the zero-length-path convention.
        out[static_cast<std::size_t>(up_index)] = 1;
        return out;
    }
    Rational denom(static_cast<long>(n - 1));
    for (std::size_t i = 0; i < k; ++i) {
        Rational r(static_cast<long>(y[i]));
        r /= denom;
        if (static_cast<int>(i) == up_index)
            r *= Rational(static_cast<long>(b - 1), static_cast<long>(b));
        else if (static_cast<int>(i) == down_index)
            r *= Rational(static_cast<long>(b + 1), static_cast<long>(b));
        r.canonicalize();
        out[i] = std::move(r);
    }
    return out;
}

std::vector<Rational> closed_form_lattice2d(const Point& y, Int b) {
    if (y.size() != 4) fail("DimensionMismatch", "lattice2d closed form needs k = 4");
    return closed_form_linear(y, b, 0, 2);
}

std::vector<Rational> closed_form_nullstep(const Point& y, Int b) {
    if (y.size() != 3) fail("DimensionMismatch", "nullstep closed form needs k = 3");
    return closed_form_linear(y, b, 0, 2);
}

UnbiasednessReport verify_unbiasedness(
    const Region& region, Int horizon,
    const std::vector<std::vector<Rational>>& p_grid) {
    UnbiasednessReport report;
    report.horizon = horizon;

    auto table = count_paths(region, horizon);
    report.all_hold = true;
    for (const auto& p : p_grid) {
        auto model = OutcomeModel::from_rationals(p);
        auto closed = is_closed(region, model, horizon);
        if (closed.verdict != ClosednessVerdict::ClosedExact)
            fail("NotClosedAtHorizon",
                 "region is not exactly closed at the horizon; unbiasedness "
                 "verification would be meaningless");
        auto pmf = first_passage_pmf(table, model);
        for (int i = 0; i < model.k; ++i) {
            UnbiasednessCheck check;
            check.p = p;
            check.category = i;
            Rational sum(0);
            for (const auto& [y, mass] : pmf) {
                const auto& entry = table.boundary_entry(y);
                Rational estimate(entry.from_unit[i], entry.total);
                estimate.canonicalize();
                sum += estimate * mass;
            }
            check.expected = sum;
            check.holds = (sum == p[i]);
            report.all_hold = report.all_hold && check.holds;
            report.checks.push_back(std::move(check));
        }
    }
    return report;
}

}  // namespace stopwalk
