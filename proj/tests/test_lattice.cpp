#include <doctest.h>

#include "stopwalk/lattice.hpp"

using namespace stopwalk;

namespace {

// Stop at 2 successes or 2 failures.
Region curtailed_binomial() {
    return Region::explicit_finite({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
}

}  // namespace

TEST_CASE("successors are the unit increments") {
    CHECK(successors({0, 0}) == std::vector<Point>{{1, 0}, {0, 1}});
    CHECK(successors({1, 2, 0}) ==
          std::vector<Point>{{2, 2, 0}, {1, 3, 0}, {1, 2, 1}});
}

TEST_CASE("enumerate_slice on the curtailed binomial region") {
    auto region = curtailed_binomial();
    auto slice = enumerate_slice(region, 2);
    CHECK(slice.accessible == std::vector<Point>{{1, 1}});
    CHECK(slice.boundary == std::vector<Point>{{0, 2}, {2, 0}});
    CHECK(slice.inaccessible == std::vector<Point>{{0, 2}, {2, 0}});
}

TEST_CASE("enumerate_slice on the null-step walk") {
    auto region = Region::linear({1, 0, -1}, 2, 50);

    auto s1 = enumerate_slice(region, 1);
    CHECK(s1.accessible == std::vector<Point>{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
    CHECK(s1.boundary.empty());

    auto s2 = enumerate_slice(region, 2);
    CHECK(s2.boundary == std::vector<Point>{{2, 0, 0}});
    CHECK(s2.accessible.size() == 5);

    auto s0 = enumerate_slice(region, 0);
    CHECK(s0.accessible == std::vector<Point>{{0, 0, 0}});
    CHECK(s0.boundary.empty());
}

TEST_CASE("boundary_points unions the per-order boundaries") {
    auto region = curtailed_binomial();
    auto pts = boundary_points(region, 4);
    // Reached only through R: {(2,0),(0,2)} at order 2, {(2,1),(1,2)} at 3.
    CHECK(pts == std::vector<Point>{{0, 2}, {2, 0}, {1, 2}, {2, 1}});

    auto single = Region::explicit_finite({{0, 0}});
    CHECK(boundary_points(single, 1) == std::vector<Point>{{0, 1}, {1, 0}});
}

TEST_CASE("boundary_points for a linear rule matches brute enumeration") {
    auto region = Region::linear({1, 0, -1}, 1, 3);
    auto pts = boundary_points(region, 3);
    std::set<Point> got(pts.begin(), pts.end());
    // Boundary points of order <= 3 only; (2,1,1) and (3,0,2) sit past it.
    std::set<Point> expected{{1, 0, 0}, {1, 1, 0}, {1, 2, 0}, {2, 0, 1}};
    CHECK(got == expected);
}

TEST_CASE("enumerate_slice beyond the horizon is rejected") {
    auto region = Region::linear({1, 0, -1}, 2, 10);
    CHECK_THROWS_WITH_AS(enumerate_slice(region, 11), doctest::Contains("horizon"),
                         Error);
}

TEST_CASE("validate_region") {
    SUBCASE("valid region, nothing pruned") {
        auto report = validate_region(curtailed_binomial());
        CHECK(report.valid);
        CHECK(report.pruned == 0);
    }
    SUBCASE("unreachable declared point is pruned") {
        auto region = Region::explicit_finite({{0, 0}, {5, 5}});
        auto report = validate_region(region);
        CHECK(report.valid);
        CHECK(report.pruned == 1);
    }
    SUBCASE("empty region") {
        CHECK_THROWS_AS(Region::explicit_finite({}), Error);
    }
    SUBCASE("origin must be accessible") {
        auto region = Region::explicit_finite({{1, 0}});
        CHECK_THROWS_WITH_AS(validate_region(region),
                             doctest::Contains("origin"), Error);
    }
    SUBCASE("k = 1 is degenerate") {
        auto region = Region::explicit_finite({{0}});
        CHECK_THROWS_AS(validate_region(region), Error);
    }
    SUBCASE("overshooting coefficients are flagged") {
        auto region = Region::linear({2, -1}, 3, 10);
        auto report = validate_region(region);
        CHECK(report.valid);
        REQUIRE_FALSE(report.notes.empty());
        CHECK(report.notes.front().find("overshoot") != std::string::npos);
    }
}

TEST_CASE("slices partition the simplex slice") {
    // Exhaustive partition check over several regions and orders.
    std::vector<Region> regions;
    regions.push_back(curtailed_binomial());
    regions.push_back(Region::linear({1, 0, -1}, 2, 20));
    regions.push_back(Region::linear({1, 0, -1, 0}, 3, 20));
    for (const auto& region : regions) {
        for (Int n = 0; n <= 12; ++n) {
            if (n > region.horizon()) break;
            auto slice = enumerate_slice(region, n);
            auto all = simplex_slice(region.dimension(), n);
            CHECK(slice.accessible.size() + slice.inaccessible.size() == all.size());
            std::set<Point> acc(slice.accessible.begin(), slice.accessible.end());
            std::set<Point> inacc(slice.inaccessible.begin(), slice.inaccessible.end());
            for (const auto& x : slice.boundary) {
                CHECK(inacc.count(x));   // boundary is inaccessible
                CHECK(!acc.count(x));
            }
            // Every boundary point has an accessible predecessor.
            std::set<Point> prev_acc;
            if (n > 0) {
                auto prev = enumerate_slice(region, n - 1);
                prev_acc.insert(prev.accessible.begin(), prev.accessible.end());
            }
            for (const auto& y : slice.boundary) {
                bool has_pred = false;
                for (std::size_t i = 0; i < y.size(); ++i) {
                    if (y[i] == 0) continue;
                    Point pred = y;
                    --pred[i];
                    if (prev_acc.count(pred)) has_pred = true;
                }
                CHECK(has_pred);
            }
        }
    }
}

TEST_CASE("enumerate_slice is pure") {
    auto region = Region::linear({1, 0, -1}, 2, 20);
    auto first = enumerate_slice(region, 7);
    auto again = enumerate_slice(region, 7);
    CHECK(first.accessible == again.accessible);
    CHECK(first.boundary == again.boundary);
    CHECK(first.inaccessible == again.inaccessible);
}

TEST_CASE("model construction checks") {
    CHECK_THROWS_AS(OutcomeModel::from_decimals({0.5, 0.4}), Error);
    CHECK_THROWS_AS(
        OutcomeModel::from_rationals({Rational(1, 3), Rational(1, 3)}), Error);
    auto exact = OutcomeModel::from_rationals(
        {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
    CHECK(exact.exact);
    CHECK(exact.k == 3);
    auto numeric = OutcomeModel::from_decimals({0.4, 0.15, 0.3, 0.15});
    CHECK_FALSE(numeric.exact);
    CHECK(numeric.labels.size() == 4);
}
