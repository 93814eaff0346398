#pragma once

#include <string>

#include "json.hpp"

#include "bulkq/model.hpp"
#include "bulkq/simulator.hpp"
#include "bulkq/solver.hpp"

namespace bulkq {

using json = nlohmann::json;

// Strict model-document parsing: unknown keys are rejected.
ValidatedModel model_from_json(const json& doc);
json model_to_json(const ValidatedModel& model);

ValidatedModel load_model_file(const std::string& path);

json solve_result_to_json(const SolveResult& res);
json empirical_to_json(const EmpiricalReport& rep);
json comparison_to_json(const ComparisonReport& rep);

} // namespace bulkq
