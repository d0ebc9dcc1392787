// stopwalk: estimation for boundary-stopped multinomial walks.
//
// Exit codes: 0 success, 1 validation/computation failure (error JSON on
// stderr), 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "stopwalk/estimation.hpp"
#include "stopwalk/io.hpp"
#include "stopwalk/region_analysis.hpp"
#include "stopwalk/simulation.hpp"
#include "stopwalk/trial_design.hpp"

using json = nlohmann::ordered_json;
using namespace stopwalk;

namespace {

// -1 = exact "num/den" rendering; >= 0 = fixed decimal digits.
int g_decimal_digits = -1;

json render(const Rational& q) {
    if (g_decimal_digits < 0) return fraction_string(q);
    return decimal_string(q, g_decimal_digits);
}

json render_vector(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(render(q));
    return out;
}

Point parse_point(const std::string& text) {
    Point x;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ','))
        x.push_back(static_cast<Int>(std::stoll(cell)));
    if (x.empty()) fail("ParseError", "empty point: " + text);
    return x;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(parse_rational(cell));
    return out;
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IOError", "cannot open for writing: " + path);
    out << content;
}

// ---------------------------------------------------------------- count ---

int cmd_count(const std::string& region_path, Int horizon,
              const std::string& point_text, const std::string& emit_path) {
    auto region = load_region(region_path);
    auto table = count_paths(region, horizon);
    if (!emit_path.empty()) write_file(emit_path, table_to_json(table));

    if (point_text.empty()) {
        if (emit_path.empty())
            fail("UsageError", "count needs --point and/or --emit");
        return 0;
    }
    Point x = parse_point(point_text);
    const auto* entry = table.find(x);
    if (!entry) fail("UnknownPoint", "point not in table: " + point_text);

    json doc;
    doc["point"] = x;
    doc["order"] = entry->order;
    doc["boundary"] = entry->is_boundary;
    doc["k"] = natural_string(entry->total);
    json stars = json::array();
    for (const auto& s : entry->from_unit) stars.push_back(natural_string(s));
    doc["k_star"] = stars;
    if (entry->is_boundary)
        doc["p_hat"] = render_vector(unbiased_estimate(table, x));
    emit(doc);
    return 0;
}

// ------------------------------------------------------------- estimate ---

int cmd_estimate(const std::string& region_path, Int horizon,
                 const std::string& observation, const std::string& closed_form,
                 Int b) {
    Point y = parse_point(observation);
    std::vector<Rational> unbiased;
    if (closed_form == "lattice2d") {
        unbiased = closed_form_lattice2d(y, b);
    } else if (closed_form == "nullstep") {
        unbiased = closed_form_nullstep(y, b);
    } else {
        auto region = load_region(region_path);
        auto table = count_paths(region, horizon);
        unbiased = unbiased_estimate(table, y);
    }
    json doc;
    doc["unbiased"] = render_vector(unbiased);
    doc["ml"] = render_vector(ml_estimate(y));
    emit(doc);
    return 0;
}

// --------------------------------------------------------------- verify ---

int cmd_verify_simple(const std::string& region_path, Int horizon) {
    auto region = load_region(region_path);
    auto report = is_simple(region, horizon);
    json doc;
    doc["pass"] = report.pass;
    doc["horizon"] = report.horizon;
    doc["horizon_limited"] = report.horizon_limited;
    json violations = json::array();
    for (const auto& v : report.violations) {
        json item;
        item["n"] = v.n;
        item["point"] = v.point;
        item["weights"] = render_vector(v.weights);
        violations.push_back(item);
    }
    doc["violations"] = violations;
    emit(doc);
    return report.pass ? 0 : 1;
}

int cmd_verify_closed(const std::string& region_path,
                      const std::string& model_path, Int horizon,
                      double threshold) {
    auto region = load_region(region_path);
    auto model = load_model(model_path);
    auto report = is_closed(region, model, horizon, threshold);
    json doc;
    switch (report.verdict) {
        case ClosednessVerdict::ClosedExact: doc["verdict"] = "closed_exact"; break;
        case ClosednessVerdict::ClosedNumerically:
            doc["verdict"] = "closed_numerically";
            break;
        case ClosednessVerdict::Inconclusive: doc["verdict"] = "inconclusive"; break;
    }
    doc["horizon"] = report.horizon;
    doc["threshold"] = report.threshold;
    doc["exact"] = report.exact;
    if (report.exact) {
        doc["absorbed"] = render(report.absorbed_mass);
        doc["residual"] = render(report.residual_mass);
    } else {
        doc["absorbed"] = report.absorbed_numeric;
        doc["residual"] = report.residual_numeric;
    }
    emit(doc);
    return report.verdict == ClosednessVerdict::Inconclusive ? 1 : 0;
}

// ------------------------------------------------------------- simulate ---

int cmd_simulate(const std::string& model_path, const std::string& region_path,
                 long paths, std::uint64_t seed, const std::string& method,
                 const std::string& estimators, const std::string& out_path,
                 const std::string& per_path, int threads, Int max_steps) {
    StudyConfig config;
    config.model = load_model(model_path);
    config.region = load_region(region_path);
    config.paths = paths;
    config.seed = seed;
    config.threads = threads;
    config.max_steps = max_steps;
    if (method == "closed")
        config.method = EstimatorMethod::ClosedForm;
    else if (method == "dp")
        config.method = EstimatorMethod::GeneralDP;

    auto summary = run_study(config);
    bool ml = estimators == "both" || estimators == "ml";
    bool unbiased = estimators == "both" || estimators == "unbiased";
    auto csv = summary_to_csv(summary, config.model, ml, unbiased);
    if (out_path.empty())
        std::cout << csv;
    else
        write_file(out_path, csv);

    if (!per_path.empty()) {
        // Re-walk each substream; identical to the study by the seeding
        // contract, so the two outputs always agree.
        std::ostringstream rows;
        rows << "path,absorbed,steps";
        for (int i = 0; i < config.model.k; ++i) rows << ",y" << (i + 1);
        rows << "\n";
        for (long i = 0; i < paths; ++i) {
            SplitMix64 stream(substream_seed(seed, static_cast<std::uint64_t>(i)));
            auto outcome = sample_path(config.model, config.region, stream,
                                       config.max_steps);
            rows << i << "," << (outcome.absorbed ? 1 : 0) << "," << outcome.steps;
            for (Int c : outcome.y) rows << "," << c;
            rows << "\n";
        }
        write_file(per_path, rows.str());
    }
    return 0;
}

// ---------------------------------------------------------------- trial ---

int cmd_trial_validate(const std::string& design_path) {
    auto design = load_design(design_path);
    auto notes = design->validate();
    json doc;
    doc["valid"] = true;
    doc["stages"] = design->stage_count();
    doc["total_patients"] = design->total_patients();
    doc["notes"] = notes;
    emit(doc);
    return 0;
}

// --terminal r=4,e=1,stage=2
int cmd_trial_estimate(const std::string& design_path,
                       const std::string& terminal_text) {
    auto design = load_design(design_path);
    Int r = -1, e = -1;
    int stage = -1;
    std::stringstream ss(terminal_text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto eq = part.find('=');
        if (eq == std::string::npos)
            fail("ParseError", "bad terminal component: " + part);
        std::string key = part.substr(0, eq);
        long long value = std::stoll(part.substr(eq + 1));
        if (key == "r")
            r = value;
        else if (key == "e")
            e = value;
        else if (key == "stage")
            stage = static_cast<int>(value);
        else
            fail("ParseError", "unknown terminal key: " + key);
    }
    if (r < 0 || e < 0 || stage < 1)
        fail("ParseError", "terminal needs r=, e=, stage=");
    TrialState terminal{design->cumulative(stage), r, e};
    auto est = trial_unbiased_estimate(*design, terminal, stage);
    json doc;
    doc["p1"] = render(est.p_response);
    doc["p2"] = render(est.p_nonresponse);
    doc["p3"] = render(est.p_progression);
    emit(doc);
    return 0;
}

int cmd_trial_verify(const std::string& design_path, const std::string& p_text) {
    auto design = load_design(design_path);
    auto p = parse_rational_list(p_text);
    if (p.size() != 3) fail("ParseError", "trial verify needs three probabilities");
    auto region = trial_region(design);
    auto report = verify_unbiasedness(region, design->total_patients(), {p});
    json doc;
    doc["all_hold"] = report.all_hold;
    json checks = json::array();
    for (const auto& check : report.checks) {
        json item;
        item["category"] = check.category + 1;
        item["p"] = render(check.p[static_cast<std::size_t>(check.category)]);
        item["expected"] = render(check.expected);
        item["holds"] = check.holds;
        checks.push_back(item);
    }
    doc["checks"] = checks;
    emit(doc);
    return report.all_hold ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"unbiased estimation for boundary-stopped multinomial walks"};
    app.require_subcommand(1);
    app.add_option("--decimal", g_decimal_digits,
                   "render rationals as decimals with this many digits");

    std::string region_path, model_path, design_path;
    std::string point_text, observation, emit_path, closed_form;
    Int horizon = 0, b = 0, max_steps = 1000000;
    double threshold = 0.05;

    auto* count = app.add_subcommand("count", "exact path counts at a point");
    count->add_option("--region", region_path)->required();
    count->add_option("--horizon", horizon)->required();
    count->add_option("--point", point_text);
    count->add_option("--emit", emit_path, "dump the full table as JSON");

    auto* estimate = app.add_subcommand("estimate", "estimators at an observation");
    estimate->add_option("--region", region_path);
    estimate->add_option("--horizon", horizon);
    estimate->add_option("--observation", observation)->required();
    estimate->add_option("--closed-form", closed_form)
        ->check(CLI::IsMember({"lattice2d", "nullstep"}));
    estimate->add_option("--b", b, "threshold for --closed-form");

    auto* verify = app.add_subcommand("verify", "region hypothesis checks");
    verify->require_subcommand(1);
    auto* simple = verify->add_subcommand("simple", "convex-hull simplicity");
    simple->add_option("--region", region_path)->required();
    simple->add_option("--horizon", horizon)->required();
    auto* closed = verify->add_subcommand("closed", "absorption mass");
    closed->add_option("--region", region_path)->required();
    closed->add_option("--model", model_path)->required();
    closed->add_option("--horizon", horizon)->required();
    closed->add_option("--threshold", threshold);

    long paths = 1;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string method = "auto", estimators = "both", out_path, per_path;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo study");
    simulate->add_option("--model", model_path)->required();
    simulate->add_option("--region", region_path)->required();
    simulate->add_option("--paths", paths)->required();
    simulate->add_option("--seed", seed)->required();
    simulate->add_option("--method", method)
        ->check(CLI::IsMember({"auto", "closed", "dp"}));
    simulate->add_option("--estimators", estimators)
        ->check(CLI::IsMember({"both", "ml", "unbiased"}));
    simulate->add_option("--out", out_path, "summary CSV path (default stdout)");
    simulate->add_option("--per-path", per_path, "per-path CSV path");
    simulate->add_option("--threads", threads);
    simulate->add_option("--max-steps", max_steps);

    std::string terminal_text, p_text;
    auto* trial = app.add_subcommand("trial", "multistage trial designs");
    trial->require_subcommand(1);
    auto* tvalidate = trial->add_subcommand("validate", "check a design file");
    tvalidate->add_option("--design", design_path)->required();
    auto* testimate = trial->add_subcommand("estimate", "stop-state estimators");
    testimate->add_option("--design", design_path)->required();
    testimate->add_option("--terminal", terminal_text, "r=4,e=1,stage=2")
        ->required();
    auto* tverify = trial->add_subcommand("verify", "exact unbiasedness at p");
    tverify->add_option("--design", design_path)->required();
    tverify->add_option("--p", p_text, "p1,p2,p3 as rationals")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) return app.exit(err);  // --help
        app.exit(err);
        return 2;
    }

    try {
        if (*count) return cmd_count(region_path, horizon, point_text, emit_path);
        if (*estimate) {
            if (closed_form.empty() && region_path.empty())
                fail("UsageError", "estimate needs --region or --closed-form");
            if (!closed_form.empty() && b <= 0)
                fail("UsageError", "--closed-form needs --b > 0");
            return cmd_estimate(region_path, horizon, observation, closed_form, b);
        }
        if (*simple) return cmd_verify_simple(region_path, horizon);
        if (*closed)
            return cmd_verify_closed(region_path, model_path, horizon, threshold);
        if (*simulate)
            return cmd_simulate(model_path, region_path, paths, seed, method,
                                estimators, out_path, per_path, threads, max_steps);
        if (*tvalidate) return cmd_trial_validate(design_path);
        if (*testimate) return cmd_trial_estimate(design_path, terminal_text);
        if (*tverify) return cmd_trial_verify(design_path, p_text);
    } catch (const Error& err) {
        json doc;
        doc["error"] = err.code();
        doc["message"] = err.what();
        std::cerr << doc.dump() << "\n";
        return 1;
    } catch (const std::exception& err) {
        json doc;
        doc["error"] = "InternalError";
        doc["message"] = err.what();
        std::cerr << doc.dump() << "\n";
        return 1;
    }
    return 2;
}
