#include "stopwalk/path_counting.hpp"

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

}  // namespace

const PathCountTable::Entry* PathCountTable::find(const Point& x) const {
    auto it = entries_.find(x);
    return it == entries_.end() ? nullptr : &it->second;
}

const PathCountTable::Entry& PathCountTable::boundary_entry(const Point& y) const {
    auto it = entries_.find(y);
    if (it == entries_.end())
        fail("UnknownPoint", "point " + point_string(y) + " not in table (beyond horizon?)");
    if (!it->second.is_boundary)
        fail("NotBoundary", "point " + point_string(y) + " is not a boundary point");
    return it->second;
}

PathCountTable count_paths(const Region& region, Int horizon) {
    PathCountTable table;
    table.horizon_ = horizon;
    table.k_ = region.dimension();
    const int k = region.dimension();

    // Counts on the active accessible frontier; moved into the table as each
    // order completes.
    std::map<Point, PathCountTable::Entry> frontier;
    Point origin(static_cast<std::size_t>(k), 0);

    sweep_region(region, horizon,
                 [&](Int n, const std::vector<Point>& acc, const std::vector<Point>& bnd) {
                     if (n == 0) {
                         PathCountTable::Entry e;
                         e.total = 1;
                         e.from_unit.assign(k, Natural(0));
                         e.order = 0;
                         frontier[origin] = e;
                         table.entries_[origin] = frontier[origin];
                         return;
                     }
                     std::map<Point, PathCountTable::Entry> next;
                     auto blank = [&]() {
                         PathCountTable::Entry e;
                         e.total = 0;
                         e.from_unit.assign(k, Natural(0));
                         e.order = n;
                         return e;
                     };
                     for (const auto& [x, entry] : frontier) {
                         for (int i = 0; i < k; ++i) {
                             Point s = x;
                             ++s[i];
                             auto [it, inserted] = next.try_emplace(s, blank());
                             auto& child = it->second;
                             child.total += entry.total;
                             for (int j = 0; j < k; ++j)
                                 child.from_unit[j] += entry.from_unit[j];
                             // Zero-length-path convention: the path that
                             // starts at e_i counts toward k*_i(e_i).
                             if (x == origin) child.from_unit[i] += 1;
                         }
                     }
                     std::set<Point> bnd_set(bnd.begin(), bnd.end());
                     frontier.clear();
                     for (auto& [pt, entry] : next) {
                         if (bnd_set.count(pt)) {
                             entry.is_boundary = true;
                             table.entries_[pt] = std::move(entry);
                         } else {
                             table.entries_[pt] = entry;
                             frontier[pt] = std::move(entry);
                         }
                     }
                 });
    return table;
}

std::map<Point, Rational> first_passage_pmf(const PathCountTable& table,
                                            const OutcomeModel& model) {
    if (model.k != table.dimension())
        fail("DimensionMismatch", "model dimension does not match the table");
    if (!model.exact)
        fail("NotExactModel", "exact pmf needs rational probabilities");
    std::map<Point, Rational> out;
    for (const auto& [y, entry] : table.entries()) {
        if (!entry.is_boundary) continue;
        Rational mass(entry.total);
        for (int i = 0; i < model.k; ++i) {
            Rational power;
            mpz_pow_ui(mpq_numref(power.get_mpq_t()),
                       mpq_numref(model.p_exact[i].get_mpq_t()),
                       static_cast<unsigned long>(y[i]));
            mpz_pow_ui(mpq_denref(power.get_mpq_t()),
                       mpq_denref(model.p_exact[i].get_mpq_t()),
                       static_cast<unsigned long>(y[i]));
            mass *= power;
        }
        out.emplace(y, std::move(mass));
    }
    return out;
}

std::map<Point, double> first_passage_pmf_numeric(const PathCountTable& table,
                                                  const OutcomeModel& model) {
    if (model.k != table.dimension())
        fail("DimensionMismatch", "model dimension does not match the table");
    std::map<Point, double> out;
    for (const auto& [y, entry] : table.entries()) {
        if (!entry.is_boundary) continue;
        double mass = entry.total.get_d();
        for (int i = 0; i < model.k; ++i)
            for (Int c = 0; c < y[i]; ++c) mass *= model.p[i];
        out.emplace(y, mass);
    }
    return out;
}

Natural cycle_count_first_passage(Int b, const Point& y, int up_index,
                                  int down_index) {
    if (b < 1) fail("NotOnBoundary", "threshold b must be positive");
    if (y[up_index] - y[down_index] != b)
        fail("NotOnBoundary", "y_up - y_down must equal b");
    Int n = order_of(y);
    if (n < 1) fail("NotOnBoundary", "order must be >= 1");

    Natural multinomial;
    mpz_fac_ui(multinomial.get_mpz_t(), static_cast<unsigned long>(n));
    for (Int c : y) {
        Natural f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(c));
        mpz_divexact(multinomial.get_mpz_t(), multinomial.get_mpz_t(), f.get_mpz_t());
    }
    Natural numerator = multinomial * Natural(static_cast<long>(b));
    Natural count;
    Natural order(static_cast<long>(n));
    if (!mpz_divisible_p(numerator.get_mpz_t(), order.get_mpz_t()))
        fail("NonIntegral", "cycle count was not integral (broken precondition)");
    mpz_divexact(count.get_mpz_t(), numerator.get_mpz_t(), order.get_mpz_t());
    return count;
}

}  // namespace stopwalk
