#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "stopwalk/lattice.hpp"
#include "stopwalk/path_counting.hpp"
#include "stopwalk/simulation.hpp"
#include "stopwalk/trial_design.hpp"

namespace stopwalk {

// File formats:
//   model  {"k":4,"p":[0.4,0.15,0.3,0.15],"labels":[...]}
//          p entries may be numbers (decimal mode) or strings "3/10" / "0.4"
//          (exact mode).
//   region {"type":"linear","coeffs":[1,0,-1],"target":2,"horizon":200}
//          {"type":"explicit","accessible":[[0,0],[1,0],[0,1],[1,1]]}
//          {"type":"trial","design":"<path>"}
//   design {"stages":[{"n":3,"promising":{"r_min":3,"e_max":0},
//                      "ineffective":{"r_max":0,"e_min":2}},
//                     {"n":3,"final":{"promising":{"r_min":4,"e_max":1}}}]}

OutcomeModel parse_model(const std::string& json_text);
OutcomeModel load_model(const std::filesystem::path& path);

std::shared_ptr<const TrialDesign> parse_design(const std::string& json_text);
std::shared_ptr<const TrialDesign> load_design(const std::filesystem::path& path);

// `base_dir` resolves relative design references inside trial regions.
Region parse_region(const std::string& json_text,
                    const std::filesystem::path& base_dir = ".");
Region load_region(const std::filesystem::path& path);

// Count table dump; big integers rendered as decimal strings.
std::string table_to_json(const PathCountTable& table);

// Summary CSV: category,estimator,mean,sd,mse,n_absorbed,n_failed,seed.
std::string summary_to_csv(const SimulationSummary& summary,
                           const OutcomeModel& model, bool include_ml,
                           bool include_unbiased);

}  // namespace stopwalk
