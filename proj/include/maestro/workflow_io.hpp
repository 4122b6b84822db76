#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "maestro/workflow.hpp"

namespace maestro {

// One workflow per document:
//   { "wf_id", "deadline", "p_fail",
//     "tasks": [ { "id", "kind": {"name", "mean_work"}, "stage", "output_size",
//                  "criticality", "protection" } ],
//     "edges": [ { "parent", "child" } ] }
// Unknown fields are rejected. A task whose kind is named "dummy" with zero
// work is a pass-through task.

nlohmann::json to_json(const Workflow& workflow);
Workflow workflow_from_json(const nlohmann::json& doc);

Workflow read_workflow(const std::filesystem::path& path);
void write_workflow(const Workflow& workflow, const std::filesystem::path& path);

/// Shared helper: throws FormatError if `obj` has keys outside `allowed`.
void require_only_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const std::string& where);

}  // namespace maestro
