#include "maestro/workflow_io.hpp"

#include <algorithm>
#include <fstream>

#include "maestro/errors.hpp"

namespace maestro {

using nlohmann::json;

void require_only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw FormatError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!known) throw FormatError(where + ": unknown field '" + key + "'");
  }
}

namespace {

template <class T>
T field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw FormatError(where + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(where + ": field '" + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const Workflow& workflow) {
  json tasks = json::array();
  for (const Task& t : workflow.tasks()) {
    tasks.push_back({{"id", t.id.value},
                     {"kind", {{"name", t.kind.name}, {"mean_work", t.kind.mean_work}}},
                     {"stage", t.stage},
                     {"output_size", t.output_size},
                     {"criticality", std::string(to_string(t.criticality))},
                     {"protection", std::string(to_string(t.protection))}});
  }
  json edges = json::array();
  for (const Edge& e : workflow.edges()) {
    edges.push_back({{"parent", e.parent.value}, {"child", e.child.value}});
  }
  return {{"wf_id", workflow.id()},
          {"deadline", workflow.deadline()},
          {"p_fail", workflow.p_fail()},
          {"tasks", std::move(tasks)},
          {"edges", std::move(edges)}};
}

Workflow workflow_from_json(const json& doc) {
  require_only_keys(doc, {"wf_id", "deadline", "p_fail", "tasks", "edges"}, "workflow");
  const auto wf_id = field<std::string>(doc, "wf_id", "workflow");
  const std::string where = "workflow " + wf_id;

  std::vector<Task> tasks;
  for (const json& jt : field<json>(doc, "tasks", where)) {
    require_only_keys(jt, {"id", "kind", "stage", "output_size", "criticality", "protection"}, where + " task");
    Task t;
    t.id = TaskId{field<std::uint64_t>(jt, "id", where)};
    const std::string tw = where + " task " + std::to_string(t.id.value);
    const json kind = field<json>(jt, "kind", tw);
    require_only_keys(kind, {"name", "mean_work"}, tw + " kind");
    t.kind.name = field<std::string>(kind, "name", tw);
    t.kind.mean_work = field<double>(kind, "mean_work", tw);
    t.stage = field<int>(jt, "stage", tw);
    t.output_size = field<double>(jt, "output_size", tw);
    const auto crit = parse_criticality(field<std::string>(jt, "criticality", tw));
    const auto prot = parse_protection(field<std::string>(jt, "protection", tw));
    if (!crit) throw FormatError(tw + ": bad criticality");
    if (!prot) throw FormatError(tw + ": bad protection");
    t.criticality = *crit;
    t.protection = *prot;
    t.is_dummy = t.kind.name == kDummyKind && t.kind.mean_work == 0.0;
    tasks.push_back(std::move(t));
  }

  std::vector<Edge> edges;
  for (const json& je : field<json>(doc, "edges", where)) {
    require_only_keys(je, {"parent", "child"}, where + " edge");
    edges.push_back({TaskId{field<std::uint64_t>(je, "parent", where)}, TaskId{field<std::uint64_t>(je, "child", where)}});
  }

  try {
    return Workflow(wf_id, std::move(tasks), std::move(edges), field<double>(doc, "deadline", where),
                    field<double>(doc, "p_fail", where));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

Workflow read_workflow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return workflow_from_json(doc);
}

void write_workflow(const Workflow& workflow, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(workflow).dump(2) << '\n';
}

}  // namespace maestro
