#pragma once

#include <optional>

#include "stopwalk/lattice.hpp"

namespace stopwalk {

// Witness that a query point lies outside a convex hull: m.x = offset at the
// query and m.x >= offset + margin on every generator, in exact arithmetic.
// Coefficients are normalized to integers.
struct SeparationCertificate {
    std::vector<Rational> coeffs;
    Rational offset;
    Rational margin;  // > 0
};

struct HullResult {
    bool contained = false;
    // Convex-combination weights over the generators when contained.
    std::optional<std::vector<Rational>> weights;
    std::optional<SeparationCertificate> certificate;
};

// Exact rational feasibility: is the query a convex combination of the
// generators? All points must share order and dimension.
HullResult hull_contains(const std::vector<Point>& generators,
                         const Point& query);

// Re-checks a certificate by direct substitution.
bool verify_certificate(const std::vector<Point>& generators,
                        const Point& query, const SeparationCertificate& cert);

struct SimplicityViolation {
    Int n = 0;
    Point point;                       // inaccessible, inside conv(R_n)
    std::vector<Rational> weights;     // Contained witness
};

struct SimplicityReport {
    bool pass = false;
    Int horizon = 0;
    bool horizon_limited = false;  // true for rule-based (infinite) regions
    std::vector<SimplicityViolation> violations;
};

SimplicityReport is_simple(const Region& region, Int horizon);

enum class ClosednessVerdict { ClosedExact, ClosedNumerically, Inconclusive };

struct ClosednessReport {
    ClosednessVerdict verdict = ClosednessVerdict::Inconclusive;
    Int horizon = 0;
    double threshold = 0.0;
    bool exact = false;
    Rational absorbed_mass;  // exact mode
    Rational residual_mass;
    double absorbed_numeric = 0.0;
    double residual_numeric = 0.0;
};

// Forward probability propagation up to the horizon. Exact rationals when
// the model is exact; linear-rule regions are propagated on the projected
// level chain so large horizons stay cheap.
ClosednessReport is_closed(const Region& region, const OutcomeModel& model,
                           Int horizon, double threshold = 0.05);

}  // namespace stopwalk
