#include <doctest.h>

#include "stopwalk/estimation.hpp"
#include "stopwalk/region_analysis.hpp"

using namespace stopwalk;

namespace {

Region curtailed_binomial() {
    return Region::explicit_finite({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
}

}  // namespace

TEST_CASE("unbiased_estimate on worked examples") {
    SUBCASE("curtailed binomial") {
        auto table = count_paths(curtailed_binomial(), 3);
        auto p21 = unbiased_estimate(table, {2, 1});
        CHECK(p21 == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
        auto p20 = unbiased_estimate(table, {2, 0});
        CHECK(p20 == std::vector<Rational>{Rational(1), Rational(0)});
    }
    SUBCASE("null-step walk") {
        auto table = count_paths(Region::linear({1, 0, -1}, 2, 10), 10);
        auto est = unbiased_estimate(table, {3, 0, 1});
        CHECK(est == std::vector<Rational>{Rational(1, 2), Rational(0), Rational(1, 2)});
    }
    SUBCASE("non-boundary point is rejected") {
        auto table = count_paths(curtailed_binomial(), 3);
        CHECK_THROWS_AS(unbiased_estimate(table, {1, 1}), Error);
    }
}

TEST_CASE("unbiased estimates sum to one on every boundary point") {
    auto table = count_paths(Region::linear({1, 0, -1}, 2, 16), 16);
    int checked = 0;
    for (const auto& [y, entry] : table.entries()) {
        if (!entry.is_boundary) continue;
        auto est = unbiased_estimate(table, y);
        Rational sum(0);
        for (const auto& e : est) {
            CHECK(e >= 0);
            CHECK(e <= 1);
            sum += e;
        }
        CHECK(sum == 1);
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("ml_estimate") {
    CHECK(ml_estimate({2, 1}) == std::vector<Rational>{Rational(2, 3), Rational(1, 3)});
    CHECK(ml_estimate({12, 3, 2, 1}) ==
          std::vector<Rational>{Rational(2, 3), Rational(1, 6), Rational(1, 9),
                                Rational(1, 18)});
    CHECK(ml_estimate({1, 0, 0}) ==
          std::vector<Rational>{Rational(1), Rational(0), Rational(0)});
    CHECK_THROWS_AS(ml_estimate({0, 0}), Error);
}

TEST_CASE("closed-form lattice2d estimator") {
    SUBCASE("reference observation") {
        auto est = closed_form_lattice2d({12, 3, 2, 1}, 10);
        CHECK(est[0] == Rational(54, 85));  // (9/10)(12/17)
        CHECK(est[1] == Rational(3, 17));
        CHECK(est[2] == Rational(11, 85));  // (11/10)(2/17)
        CHECK(est[3] == Rational(1, 17));
        Rational sum = est[0] + est[1] + est[2] + est[3];
        CHECK(sum == 1);
    }
    SUBCASE("one-step absorption delegates to the ratio convention") {
        auto est = closed_form_lattice2d({1, 0, 0, 0}, 1);
        CHECK(est == std::vector<Rational>{Rational(1), Rational(0), Rational(0),
                                           Rational(0)});
    }
    SUBCASE("forced two-up path") {
        auto est = closed_form_lattice2d({2, 0, 0, 0}, 2);
        CHECK(est == std::vector<Rational>{Rational(1), Rational(0), Rational(0),
                                           Rational(0)});
    }
    SUBCASE("wrong level is rejected") {
        CHECK_THROWS_AS(closed_form_lattice2d({2, 0, 0, 0}, 3), Error);
    }
}

TEST_CASE("closed-form nullstep estimator") {
    CHECK(closed_form_nullstep({3, 0, 1}, 2) ==
          std::vector<Rational>{Rational(1, 2), Rational(0), Rational(1, 2)});
    CHECK(closed_form_nullstep({2, 1, 0}, 2) ==
          std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(0)});
    CHECK(closed_form_nullstep({2, 0, 0}, 2) ==
          std::vector<Rational>{Rational(1), Rational(0), Rational(0)});
}

TEST_CASE("closed forms equal the general ratio on every boundary point") {
    SUBCASE("null-step walks, N <= 20") {
        for (Int b : {1, 2, 3}) {
            auto table = count_paths(Region::linear({1, 0, -1}, b, 20), 20);
            for (const auto& [y, entry] : table.entries()) {
                if (!entry.is_boundary) continue;
                CHECK(closed_form_nullstep(y, b) == unbiased_estimate(table, y));
            }
        }
    }
    SUBCASE("2D lattice walks, N <= 14") {
        for (Int b : {1, 2}) {
            auto table = count_paths(Region::linear({1, 0, -1, 0}, b, 14), 14);
            for (const auto& [y, entry] : table.entries()) {
                if (!entry.is_boundary) continue;
                CHECK(closed_form_lattice2d(y, b) == unbiased_estimate(table, y));
            }
        }
    }
}

TEST_CASE("verify_unbiasedness on closed finite regions") {
    SUBCASE("curtailed binomial over a grid") {
        std::vector<std::vector<Rational>> grid{
            {Rational(1, 3), Rational(2, 3)},
            {Rational(1, 5), Rational(4, 5)},
            {Rational(1, 2), Rational(1, 2)},
        };
        auto report = verify_unbiasedness(curtailed_binomial(), 3, grid);
        CHECK(report.all_hold);
        CHECK(report.checks.size() == 6);
        for (const auto& check : report.checks) CHECK(check.holds);
    }
    SUBCASE("stop-after-two") {
        auto region = Region::explicit_finite({{0, 0}, {1, 0}, {0, 1}});
        auto report = verify_unbiasedness(region, 2,
                                          {{Rational(1, 4), Rational(3, 4)}});
        CHECK(report.all_hold);
    }
    SUBCASE("non-closed horizon is rejected") {
        auto region = Region::linear({1, 0, -1}, 5, 10);
        CHECK_THROWS_WITH_AS(
            verify_unbiasedness(region, 10,
                                {{Rational(1, 3), Rational(1, 3), Rational(1, 3)}}),
            doctest::Contains("not exactly closed"), Error);
    }
}

TEST_CASE("negative control: ML is biased on the curtailed binomial") {
    auto region = curtailed_binomial();
    auto table = count_paths(region, 3);
    std::vector<std::vector<Rational>> grid{
        {Rational(1, 3), Rational(2, 3)},
        {Rational(1, 5), Rational(4, 5)},
    };
    for (const auto& p : grid) {
        auto model = OutcomeModel::from_rationals(p);
        auto pmf = first_passage_pmf(table, model);
        for (int i = 0; i < 2; ++i) {
            Rational sum(0);
            for (const auto& [y, mass] : pmf) sum += ml_estimate(y)[i] * mass;
            CHECK(sum != p[static_cast<std::size_t>(i)]);
        }
    }
}

TEST_CASE("estimators depend on the terminal point only") {
    // Two different path realizations that reach (2,1) give one estimate;
    // the API takes only y, so evaluating twice must agree.
    auto table = count_paths(curtailed_binomial(), 3);
    CHECK(unbiased_estimate(table, {2, 1}) == unbiased_estimate(table, {2, 1}));
    CHECK(ml_estimate({2, 1}) == ml_estimate({2, 1}));
}
