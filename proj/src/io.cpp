#include "stopwalk/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace stopwalk {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("FileNotFound", "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json parse_json(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail("ParseError", "malformed JSON input");
    return doc;
}

std::vector<std::string> read_labels(const json& doc) {
    std::vector<std::string> labels;
    if (doc.contains("labels"))
        for (const auto& l : doc.at("labels")) labels.push_back(l.get<std::string>());
    return labels;
}

}  // namespace

OutcomeModel parse_model(const std::string& json_text) {
    json doc = parse_json(json_text);
    if (!doc.contains("p")) fail("ParseError", "model JSON needs a \"p\" array");
    const auto& p = doc.at("p");

    bool any_string = false;
    for (const auto& entry : p)
        if (entry.is_string()) any_string = true;

    OutcomeModel model;
    if (any_string) {
        // Exact mode: every entry parsed as an exact rational.
        std::vector<Rational> probs;
        for (const auto& entry : p) {
            if (entry.is_string())
                probs.push_back(parse_rational(entry.get<std::string>()));
            else
                probs.push_back(parse_rational(entry.dump()));
        }
        model = OutcomeModel::from_rationals(std::move(probs), read_labels(doc));
    } else {
        std::vector<double> probs;
        for (const auto& entry : p) probs.push_back(entry.get<double>());
        model = OutcomeModel::from_decimals(std::move(probs), read_labels(doc));
    }
    if (doc.contains("k") && doc.at("k").get<int>() != model.k)
        fail("ParseError", "model \"k\" does not match the length of \"p\"");
    return model;
}

OutcomeModel load_model(const std::filesystem::path& path) {
    return parse_model(read_file(path));
}

std::shared_ptr<const TrialDesign> parse_design(const std::string& json_text) {
    json doc = parse_json(json_text);
    if (!doc.contains("stages")) fail("ParseError", "design JSON needs \"stages\"");
    std::vector<TrialStage> stages;
    for (const auto& entry : doc.at("stages")) {
        TrialStage stage;
        stage.n = entry.at("n").get<Int>();
        const json* rules = &entry;
        if (entry.contains("final")) {
            stage.final_stage = true;
            rules = &entry.at("final");
        }
        if (!rules->contains("promising"))
            fail("ParseError", "every stage needs a promising rule");
        const auto& prom = rules->at("promising");
        stage.promising.r_min = prom.at("r_min").get<Int>();
        stage.promising.e_max = prom.at("e_max").get<Int>();
        if (rules->contains("ineffective")) {
            IneffectiveRule rule;
            rule.r_max = rules->at("ineffective").at("r_max").get<Int>();
            rule.e_min = rules->at("ineffective").at("e_min").get<Int>();
            stage.ineffective = rule;
        }
        stages.push_back(std::move(stage));
    }
    auto design = std::make_shared<TrialDesign>(std::move(stages));
    design->validate();
    return design;
}

std::shared_ptr<const TrialDesign> load_design(const std::filesystem::path& path) {
    return parse_design(read_file(path));
}

Region parse_region(const std::string& json_text,
                    const std::filesystem::path& base_dir) {
    json doc = parse_json(json_text);
    std::string type = doc.at("type").get<std::string>();
    if (type == "linear") {
        std::vector<Int> coeffs;
        for (const auto& c : doc.at("coeffs")) coeffs.push_back(c.get<Int>());
        Int target = doc.at("target").get<Int>();
        if (!doc.contains("horizon"))
            fail("ParseError", "linear regions need an explicit horizon");
        return Region::linear(std::move(coeffs), target, doc.at("horizon").get<Int>());
    }
    if (type == "explicit") {
        std::vector<Point> accessible;
        for (const auto& pt : doc.at("accessible")) {
            Point x;
            for (const auto& c : pt) x.push_back(c.get<Int>());
            accessible.push_back(std::move(x));
        }
        return Region::explicit_finite(std::move(accessible));
    }
    if (type == "trial") {
        std::filesystem::path ref = doc.at("design").get<std::string>();
        if (ref.is_relative()) ref = base_dir / ref;
        return trial_region(load_design(ref));
    }
    fail("ParseError", "unknown region type: " + type);
}

Region load_region(const std::filesystem::path& path) {
    return parse_region(read_file(path), path.parent_path().empty()
                                             ? std::filesystem::path(".")
                                             : path.parent_path());
}

std::string table_to_json(const PathCountTable& table) {
    json doc;
    doc["horizon"] = table.horizon();
    doc["k"] = table.dimension();
    json entries = json::array();
    for (const auto& [point, entry] : table.entries()) {
        json row;
        row["point"] = point;
        row["order"] = entry.order;
        row["boundary"] = entry.is_boundary;
        row["k"] = natural_string(entry.total);
        json starts = json::array();
        for (const auto& s : entry.from_unit) starts.push_back(natural_string(s));
        row["k_star"] = std::move(starts);
        entries.push_back(std::move(row));
    }
    doc["entries"] = std::move(entries);
    return doc.dump(2);
}

std::string summary_to_csv(const SimulationSummary& summary,
                           const OutcomeModel& model, bool include_ml,
                           bool include_unbiased) {
    std::ostringstream out;
    out << "category,estimator,mean,sd,mse,n_absorbed,n_failed,seed\n";
    char buffer[64];
    auto cell = [&](double v) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", v);
        return std::string(buffer);
    };
    auto rows = [&](const char* name, const std::vector<CategoryStats>& stats) {
        for (std::size_t i = 0; i < stats.size(); ++i)
            out << model.labels[i] << ',' << name << ',' << cell(stats[i].mean) << ','
                << cell(stats[i].sd) << ',' << cell(stats[i].mse) << ','
                << summary.n_absorbed << ',' << summary.n_failed << ','
                << summary.seed << '\n';
    };
    if (include_ml) rows("ml", summary.ml);
    if (include_unbiased) rows("unbiased", summary.unbiased);
    return out.str();
}

}  // namespace stopwalk
