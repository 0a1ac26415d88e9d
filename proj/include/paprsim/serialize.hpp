#pragma once

#include <string>

#include "json.hpp"
#include "paprsim/harness.hpp"

namespace paprsim {

// Config keys mirror the CLI flags one-to-one; unknown keys are rejected.
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  ExperimentConfig base = {});

nlohmann::json to_json(const CcdfResult& res);
nlohmann::json to_json(const SearchCountResult& res);
nlohmann::json to_json(const SingleResult& res);

// CSV schemas:
//   ccdf:         papr0_db, one CCDF column per method
//   search-count: threshold_db, one average-evaluations column per method
//   single:       eval_index, papr_db
std::string to_csv(const CcdfResult& res);
std::string to_csv(const SearchCountResult& res);
std::string to_csv(const SingleResult& res);

}  // namespace paprsim
