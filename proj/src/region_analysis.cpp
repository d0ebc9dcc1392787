#include "stopwalk/region_analysis.hpp"

#include <algorithm>
#include <map>

namespace stopwalk {

namespace {

// Phase-1 simplex on exact rationals with Bland's rule. Decides feasibility
// of { G w = q, sum w = 1, w >= 0 } and extracts either the weights or a
// Farkas dual for the separating hyperplane.
struct FeasibilityResult {
    bool feasible = false;
    std::vector<Rational> weights;  // per generator, when feasible
    std::vector<Rational> dual;     // y with y.col <= 0 for all columns, y.rhs > 0
};

FeasibilityResult solve_convex_combination(const std::vector<Point>& generators,
                                           const Point& query) {
    const int k = static_cast<int>(query.size());
    const int rows = k + 1;
    const int n = static_cast<int>(generators.size());
    const int cols = n + rows + 1;  // generators, artificials, rhs

    std::vector<std::vector<Rational>> t(rows, std::vector<Rational>(cols, Rational(0)));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < n; ++j) t[i][j] = static_cast<long>(generators[j][i]);
        t[i][n + i] = 1;
        t[i][cols - 1] = static_cast<long>(query[i]);  // >= 0 by construction
    }
    for (int j = 0; j < n; ++j) t[k][j] = 1;
    t[k][n + k] = 1;
    t[k][cols - 1] = 1;

    // Objective row: reduced costs for minimizing the artificial sum.
    std::vector<Rational> obj(cols, Rational(0));
    for (int j = 0; j < cols; ++j) {
        Rational s(0);
        for (int i = 0; i < rows; ++i) s += t[i][j];
        obj[j] = (j >= n && j < n + rows) ? Rational(Rational(1) - s) : Rational(-s);
    }

    std::vector<int> basis(rows);
    for (int i = 0; i < rows; ++i) basis[i] = n + i;

    while (true) {
        int entering = -1;
        for (int j = 0; j < n + rows; ++j)
            if (obj[j] < 0) {
                entering = j;
                break;  // Bland: lowest index
            }
        if (entering < 0) break;

        int leaving = -1;
        Rational best_ratio(0);
        for (int i = 0; i < rows; ++i) {
            if (t[i][entering] <= 0) continue;
            Rational ratio = t[i][cols - 1] / t[i][entering];
            if (leaving < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leaving])) {
                leaving = i;
                best_ratio = ratio;
            }
        }
        if (leaving < 0)
            fail("InternalError", "phase-1 simplex became unbounded");

        Rational pivot = t[leaving][entering];
        for (auto& cell : t[leaving]) cell /= pivot;
        for (int i = 0; i < rows; ++i) {
            if (i == leaving || t[i][entering] == 0) continue;
            Rational factor = t[i][entering];
            for (int j = 0; j < cols; ++j) t[i][j] -= factor * t[leaving][j];
        }
        if (obj[entering] != 0) {
            Rational factor = obj[entering];
            for (int j = 0; j < cols; ++j) obj[j] -= factor * t[leaving][j];
        }
        basis[leaving] = entering;
    }

    FeasibilityResult result;
    Rational objective = -obj[cols - 1];
    if (objective == 0) {
        result.feasible = true;
        result.weights.assign(static_cast<std::size_t>(n), Rational(0));
        for (int i = 0; i < rows; ++i)
            if (basis[i] < n) result.weights[static_cast<std::size_t>(basis[i])] = t[i][cols - 1];
    } else {
        result.dual.reserve(static_cast<std::size_t>(rows));
        for (int i = 0; i < rows; ++i)
            result.dual.push_back(Rational(1) - obj[n + i]);
    }
    return result;
}

}  // namespace

HullResult hull_contains(const std::vector<Point>& generators, const Point& query) {
    if (generators.empty()) fail("EmptyGenerators", "hull test needs generators");
    const int k = static_cast<int>(query.size());
    const Int n = order_of(query);
    for (const auto& g : generators) {
        if (static_cast<int>(g.size()) != k)
            fail("MixedOrder", "generators and query must share dimension");
        if (order_of(g) != n)
            fail("MixedOrder", "all points must share the same order");
    }

    auto solved = solve_convex_combination(generators, query);
    HullResult result;
    if (solved.feasible) {
        result.contained = true;
        result.weights = std::move(solved.weights);
        return result;
    }

    // Farkas dual y: y.(g,1) <= 0 for every generator, y.(q,1) > 0. With
    // m = -y[0..k-1] and c = y[k] this gives m.g >= c on generators and
    // m.q < c at the query.
    SeparationCertificate cert;
    cert.coeffs.reserve(static_cast<std::size_t>(k));
    Natural scale(1);
    for (int i = 0; i < k; ++i) {
        Rational m = -solved.dual[static_cast<std::size_t>(i)];
        mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), m.get_den().get_mpz_t());
        cert.coeffs.push_back(std::move(m));
    }
    // Integer coefficients: clear denominators.
    for (auto& m : cert.coeffs) {
        m *= Rational(scale);
        m.canonicalize();
    }
    Rational c = solved.dual[static_cast<std::size_t>(k)] * Rational(scale);
    cert.offset = 0;
    for (int i = 0; i < k; ++i)
        cert.offset += cert.coeffs[static_cast<std::size_t>(i)] * Rational(static_cast<long>(query[i]));
    cert.margin = c - cert.offset;
    result.contained = false;
    result.certificate = std::move(cert);
    return result;
}

bool verify_certificate(const std::vector<Point>& generators, const Point& query,
                        const SeparationCertificate& cert) {
    if (cert.margin <= 0) return false;
    auto evaluate = [&](const Point& x) {
        Rational v(0);
        for (std::size_t i = 0; i < x.size(); ++i)
            v += cert.coeffs[i] * Rational(static_cast<long>(x[i]));
        return v;
    };
    if (evaluate(query) != cert.offset) return false;
    for (const auto& g : generators)
        if (evaluate(g) < cert.offset + cert.margin) return false;
    return true;
}

SimplicityReport is_simple(const Region& region, Int horizon) {
    SimplicityReport report;
    report.horizon = horizon;
    report.horizon_limited = (region.kind() == RegionKind::LinearRule);

    std::vector<std::vector<Point>> accessible_by_order(
        static_cast<std::size_t>(horizon) + 1);
    sweep_region(region, horizon,
                 [&](Int m, const std::vector<Point>& acc, const std::vector<Point>&) {
                     accessible_by_order[static_cast<std::size_t>(m)] = acc;
                 });

    for (Int m = 0; m <= horizon; ++m) {
        const auto& gens = accessible_by_order[static_cast<std::size_t>(m)];
        if (gens.empty()) continue;
        std::set<Point> acc_set(gens.begin(), gens.end());
        for (auto& x : simplex_slice(region.dimension(), m)) {
            if (acc_set.count(x)) continue;
            auto hull = hull_contains(gens, x);
            if (hull.contained) {
                SimplicityViolation v;
                v.n = m;
                v.point = std::move(x);
                v.weights = *hull.weights;
                report.violations.push_back(std::move(v));
            }
        }
    }
    report.pass = report.violations.empty();
    return report;
}

namespace {

// Mass propagation on the projected level chain of a linear rule: the level
// a.x is itself a Markov chain, absorbed once it reaches the target.
template <typename Scalar>
void propagate_linear_levels(const Region& region, const OutcomeModel& model,
                             Int horizon, const std::vector<Scalar>& p,
                             Scalar& absorbed, Scalar& residual) {
    (void)model;
    const auto& a = region.coeffs();
    const Int b = region.target();
    std::map<Int, Scalar> interior;
    interior[0] = Scalar(1);
    for (Int step = 0; step < horizon; ++step) {
        std::map<Int, Scalar> next;
        for (const auto& [level, mass] : interior) {
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (p[i] == Scalar(0)) continue;
                Scalar moved = mass * p[i];
                Int next_level = level + a[i];
                if (next_level >= b)
                    absorbed += moved;
                else
                    next[next_level] += moved;
            }
        }
        interior = std::move(next);
        if (interior.empty()) break;
    }
    residual = Scalar(0);
    for (const auto& [level, mass] : interior) residual += mass;
}

template <typename Scalar>
void propagate_region_mass(const Region& region, Int horizon,
                           const std::vector<Scalar>& p, Scalar& absorbed,
                           Scalar& residual) {
    std::map<Point, Scalar> frontier;
    const int k = region.dimension();
    Point origin(static_cast<std::size_t>(k), 0);
    sweep_region(region, horizon,
                 [&](Int n, const std::vector<Point>&, const std::vector<Point>& bnd) {
                     if (n == 0) {
                         frontier[origin] = Scalar(1);
                         return;
                     }
                     std::set<Point> bnd_set(bnd.begin(), bnd.end());
                     std::map<Point, Scalar> next;
                     for (const auto& [x, mass] : frontier) {
                         for (int i = 0; i < k; ++i) {
                             if (p[static_cast<std::size_t>(i)] == Scalar(0)) continue;
                             Point s = x;
                             ++s[i];
                             next[s] += mass * p[static_cast<std::size_t>(i)];
                         }
                     }
                     frontier.clear();
                     for (auto& [pt, mass] : next) {
                         if (bnd_set.count(pt))
                             absorbed += mass;
                         else
                             frontier[pt] = std::move(mass);
                     }
                 });
    residual = Scalar(0);
    for (const auto& [pt, mass] : frontier) residual += mass;
}

}  // namespace

ClosednessReport is_closed(const Region& region, const OutcomeModel& model,
                           Int horizon, double threshold) {
    if (model.k != region.dimension())
        fail("DimensionMismatch", "model dimension does not match the region");
    if (horizon > region.horizon() && region.kind() != RegionKind::ExplicitFinite)
        fail("HorizonExceeded", "requested horizon exceeds the region horizon");
    ClosednessReport report;
    report.horizon = horizon;
    report.threshold = threshold;
    report.exact = model.exact;

    if (model.exact) {
        Rational absorbed(0), residual(0);
        if (region.kind() == RegionKind::LinearRule)
            propagate_linear_levels(region, model, horizon, model.p_exact,
                                    absorbed, residual);
        else
            propagate_region_mass(region, horizon, model.p_exact, absorbed,
                                  residual);
        report.absorbed_mass = absorbed;
        report.residual_mass = residual;
        report.absorbed_numeric = absorbed.get_d();
        report.residual_numeric = residual.get_d();
        if (residual == 0)
            report.verdict = ClosednessVerdict::ClosedExact;
        else if (residual < Rational(threshold))
            report.verdict = ClosednessVerdict::ClosedNumerically;
        else
            report.verdict = ClosednessVerdict::Inconclusive;
    } else {
        double absorbed = 0, residual = 0;
        if (region.kind() == RegionKind::LinearRule)
            propagate_linear_levels(region, model, horizon, model.p, absorbed,
                                    residual);
        else
            propagate_region_mass(region, horizon, model.p, absorbed, residual);
        report.absorbed_numeric = absorbed;
        report.residual_numeric = residual;
        if (residual == 0.0)
            report.verdict = ClosednessVerdict::ClosedExact;
        else if (residual < threshold)
            report.verdict = ClosednessVerdict::ClosedNumerically;
        else
            report.verdict = ClosednessVerdict::Inconclusive;
    }
    return report;
}

}  // namespace stopwalk
