// Python bindings. Exact rationals cross the boundary as "num/den" strings
// so callers can feed them straight into fractions.Fraction.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stopwalk/estimation.hpp"
#include "stopwalk/io.hpp"
#include "stopwalk/path_counting.hpp"
#include "stopwalk/region_analysis.hpp"
#include "stopwalk/simulation.hpp"
#include "stopwalk/trial_design.hpp"

namespace py = pybind11;
using namespace stopwalk;

namespace {

std::vector<std::string> fractions(const std::vector<Rational>& v) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(fraction_string(q));
    return out;
}

py::dict entry_dict(const Point& x, const PathCountTable::Entry& entry) {
    py::dict d;
    d["point"] = x;
    d["order"] = entry.order;
    d["boundary"] = entry.is_boundary;
    d["k"] = natural_string(entry.total);
    std::vector<std::string> stars;
    for (const auto& s : entry.from_unit) stars.push_back(natural_string(s));
    d["k_star"] = stars;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "unbiased sequential estimation for boundary-stopped "
              "multinomial walks";

    py::register_exception<Error>(m, "StopwalkError");

    // ----------------------------------------------------------- lattice --
    py::class_<OutcomeModel>(m, "OutcomeModel")
        .def_static(
            "from_decimals",
            [](std::vector<double> p, std::vector<std::string> labels) {
                return OutcomeModel::from_decimals(std::move(p), std::move(labels));
            },
            py::arg("p"), py::arg("labels") = std::vector<std::string>{})
        .def_static(
            "from_rationals",
            [](const std::vector<std::string>& p, std::vector<std::string> labels) {
                std::vector<Rational> probs;
                for (const auto& s : p) probs.push_back(parse_rational(s));
                return OutcomeModel::from_rationals(std::move(probs),
                                                    std::move(labels));
            },
            py::arg("p"), py::arg("labels") = std::vector<std::string>{})
        .def_readonly("k", &OutcomeModel::k)
        .def_readonly("p", &OutcomeModel::p)
        .def_readonly("exact", &OutcomeModel::exact)
        .def_readonly("labels", &OutcomeModel::labels)
        .def_property_readonly("p_exact", [](const OutcomeModel& self) {
            return fractions(self.p_exact);
        });

    py::class_<Region>(m, "Region")
        .def_static("linear", &Region::linear, py::arg("coeffs"),
                    py::arg("target"), py::arg("horizon"))
        .def_static("explicit_finite", &Region::explicit_finite,
                    py::arg("accessible"))
        .def_property_readonly("dimension", &Region::dimension)
        .def_property_readonly("horizon", &Region::horizon)
        .def_property_readonly("description", &Region::description)
        .def("accessible", &Region::accessible_raw, py::arg("point"));

    py::class_<RegionSlice>(m, "RegionSlice")
        .def_readonly("n", &RegionSlice::n)
        .def_readonly("accessible", &RegionSlice::accessible)
        .def_readonly("boundary", &RegionSlice::boundary)
        .def_readonly("inaccessible", &RegionSlice::inaccessible);

    m.def("enumerate_slice", &enumerate_slice, py::arg("region"), py::arg("n"));
    m.def("boundary_points", &boundary_points, py::arg("region"),
          py::arg("horizon"));
    m.def(
        "validate_region",
        [](const Region& region) {
            auto report = validate_region(region);
            py::dict d;
            d["valid"] = report.valid;
            d["pruned"] = report.pruned;
            d["notes"] = report.notes;
            return d;
        },
        py::arg("region"));

    // ----------------------------------------------------- path counting --
    py::class_<PathCountTable>(m, "PathCountTable")
        .def_property_readonly("horizon", &PathCountTable::horizon)
        .def_property_readonly("dimension", &PathCountTable::dimension)
        .def("entry",
             [](const PathCountTable& self, const Point& x) -> py::object {
                 const auto* entry = self.find(x);
                 if (!entry) return py::none();
                 return entry_dict(x, *entry);
             })
        .def("boundary_entries", [](const PathCountTable& self) {
            py::list out;
            for (const auto& [x, entry] : self.entries())
                if (entry.is_boundary) out.append(entry_dict(x, entry));
            return out;
        });

    m.def("count_paths", &count_paths, py::arg("region"), py::arg("horizon"));
    m.def(
        "first_passage_pmf",
        [](const PathCountTable& table, const OutcomeModel& model) {
            py::dict out;
            for (const auto& [y, q] : first_passage_pmf(table, model))
                out[py::tuple(py::cast(y))] = fraction_string(q);
            return out;
        },
        py::arg("table"), py::arg("model"));
    m.def(
        "cycle_count_first_passage",
        [](Int b, const Point& y, int up, int down) {
            return natural_string(cycle_count_first_passage(b, y, up, down));
        },
        py::arg("b"), py::arg("y"), py::arg("up_index"), py::arg("down_index"));

    // --------------------------------------------------------- estimation --
    m.def(
        "unbiased_estimate",
        [](const PathCountTable& table, const Point& y) {
            return fractions(unbiased_estimate(table, y));
        },
        py::arg("table"), py::arg("y"));
    m.def(
        "ml_estimate", [](const Point& y) { return fractions(ml_estimate(y)); },
        py::arg("y"));
    m.def(
        "closed_form_lattice2d",
        [](const Point& y, Int b) { return fractions(closed_form_lattice2d(y, b)); },
        py::arg("y"), py::arg("b"));
    m.def(
        "closed_form_nullstep",
        [](const Point& y, Int b) { return fractions(closed_form_nullstep(y, b)); },
        py::arg("y"), py::arg("b"));

    // ---------------------------------------------------- region analysis --
    m.def(
        "hull_contains",
        [](const std::vector<Point>& generators, const Point& query) {
            auto result = hull_contains(generators, query);
            py::dict d;
            d["contained"] = result.contained;
            d["weights"] = result.weights ? py::cast(fractions(*result.weights))
                                          : py::object(py::none());
            if (result.certificate) {
                py::dict cert;
                cert["coeffs"] = fractions(result.certificate->coeffs);
                cert["offset"] = fraction_string(result.certificate->offset);
                cert["margin"] = fraction_string(result.certificate->margin);
                d["certificate"] = cert;
            } else {
                d["certificate"] = py::none();
            }
            return d;
        },
        py::arg("generators"), py::arg("query"));
    m.def(
        "is_simple",
        [](const Region& region, Int horizon) {
            auto report = is_simple(region, horizon);
            py::dict d;
            d["pass"] = report.pass;
            d["horizon"] = report.horizon;
            d["horizon_limited"] = report.horizon_limited;
            py::list violations;
            for (const auto& v : report.violations) {
                py::dict item;
                item["n"] = v.n;
                item["point"] = v.point;
                item["weights"] = fractions(v.weights);
                violations.append(item);
            }
            d["violations"] = violations;
            return d;
        },
        py::arg("region"), py::arg("horizon"));
    m.def(
        "is_closed",
        [](const Region& region, const OutcomeModel& model, Int horizon,
           double threshold) {
            auto report = is_closed(region, model, horizon, threshold);
            py::dict d;
            switch (report.verdict) {
                case ClosednessVerdict::ClosedExact:
                    d["verdict"] = "closed_exact";
                    break;
                case ClosednessVerdict::ClosedNumerically:
                    d["verdict"] = "closed_numerically";
                    break;
                case ClosednessVerdict::Inconclusive:
                    d["verdict"] = "inconclusive";
                    break;
            }
            d["horizon"] = report.horizon;
            d["exact"] = report.exact;
            if (report.exact) {
                d["absorbed"] = fraction_string(report.absorbed_mass);
                d["residual"] = fraction_string(report.residual_mass);
            } else {
                d["absorbed"] = report.absorbed_numeric;
                d["residual"] = report.residual_numeric;
            }
            return d;
        },
        py::arg("region"), py::arg("model"), py::arg("horizon"),
        py::arg("threshold") = 0.05);
    m.def(
        "verify_unbiasedness",
        [](const Region& region, Int horizon,
           const std::vector<std::vector<std::string>>& grid) {
            std::vector<std::vector<Rational>> exact;
            for (const auto& row : grid) {
                std::vector<Rational> p;
                for (const auto& s : row) p.push_back(parse_rational(s));
                exact.push_back(std::move(p));
            }
            auto report = verify_unbiasedness(region, horizon, exact);
            py::dict d;
            d["all_hold"] = report.all_hold;
            py::list checks;
            for (const auto& check : report.checks) {
                py::dict item;
                item["p"] = fractions(check.p);
                item["category"] = check.category;
                item["expected"] = fraction_string(check.expected);
                item["holds"] = check.holds;
                checks.append(item);
            }
            d["checks"] = checks;
            return d;
        },
        py::arg("region"), py::arg("horizon"), py::arg("p_grid"));

    // --------------------------------------------------------- simulation --
    py::class_<CategoryStats>(m, "CategoryStats")
        .def_readonly("mean", &CategoryStats::mean)
        .def_readonly("sd", &CategoryStats::sd)
        .def_readonly("mse", &CategoryStats::mse);

    py::class_<SimulationSummary>(m, "SimulationSummary")
        .def_readonly("ml", &SimulationSummary::ml)
        .def_readonly("unbiased", &SimulationSummary::unbiased)
        .def_readonly("n_absorbed", &SimulationSummary::n_absorbed)
        .def_readonly("n_failed", &SimulationSummary::n_failed)
        .def_readonly("seed", &SimulationSummary::seed);

    m.def(
        "run_study",
        [](const OutcomeModel& model, const Region& region, long paths,
           std::uint64_t seed, const std::string& method, Int max_steps,
           int threads) {
            StudyConfig config;
            config.model = model;
            config.region = region;
            config.paths = paths;
            config.seed = seed;
            config.max_steps = max_steps;
            config.threads = threads;
            if (method == "closed")
                config.method = EstimatorMethod::ClosedForm;
            else if (method == "dp")
                config.method = EstimatorMethod::GeneralDP;
            else if (method != "auto")
                fail("UsageError", "method must be auto, closed or dp");
            return run_study(config);
        },
        py::arg("model"), py::arg("region"), py::arg("paths"), py::arg("seed"),
        py::arg("method") = "auto", py::arg("max_steps") = Int(1000000),
        py::arg("threads") = 0);
    m.def("substream_seed", &substream_seed, py::arg("seed"), py::arg("index"));

    // ------------------------------------------------------- trial design --
    py::class_<TrialDesign, std::shared_ptr<TrialDesign>>(m, "TrialDesign")
        .def_property_readonly("stage_count", &TrialDesign::stage_count)
        .def_property_readonly("total_patients", &TrialDesign::total_patients)
        .def("cumulative", &TrialDesign::cumulative, py::arg("stage"))
        .def("validate", &TrialDesign::validate);

    m.def(
        "parse_design",
        [](const std::string& json_text) {
            return std::const_pointer_cast<TrialDesign>(parse_design(json_text));
        },
        py::arg("json_text"));
    m.def(
        "trial_decision",
        [](const TrialDesign& design, Int j, Int r, Int e) {
            switch (trial_decision(design, {j, r, e})) {
                case TrialDecision::Promising: return "promising";
                case TrialDecision::Ineffective: return "ineffective";
                default: return "continue";
            }
        },
        py::arg("design"), py::arg("j"), py::arg("r"), py::arg("e"));
    m.def(
        "continuation_regions",
        [](const TrialDesign& design) {
            std::vector<std::vector<std::pair<Int, Int>>> out;
            for (const auto& stage : continuation_regions(design))
                out.emplace_back(stage.begin(), stage.end());
            return out;
        },
        py::arg("design"));
    m.def(
        "trial_region",
        [](const std::shared_ptr<TrialDesign>& design) {
            return trial_region(design);
        },
        py::arg("design"));
    m.def(
        "trial_unbiased_estimate",
        [](const TrialDesign& design, Int j, Int r, Int e, int stage) {
            auto est = trial_unbiased_estimate(design, {j, r, e}, stage);
            py::dict d;
            d["p1"] = fraction_string(est.p_response);
            d["p2"] = fraction_string(est.p_nonresponse);
            d["p3"] = fraction_string(est.p_progression);
            return d;
        },
        py::arg("design"), py::arg("j"), py::arg("r"), py::arg("e"),
        py::arg("stage"));

    // ------------------------------------------------------------ file IO --
    m.def("parse_model", &parse_model, py::arg("json_text"));
    m.def(
        "parse_region",
        [](const std::string& json_text, const std::string& base_dir) {
            return parse_region(json_text, base_dir);
        },
        py::arg("json_text"), py::arg("base_dir") = ".");
    m.def(
        "summary_to_csv",
        [](const SimulationSummary& summary, const OutcomeModel& model,
           bool include_ml, bool include_unbiased) {
            return summary_to_csv(summary, model, include_ml, include_unbiased);
        },
        py::arg("summary"), py::arg("model"), py::arg("include_ml") = true,
        py::arg("include_unbiased") = true);
}
