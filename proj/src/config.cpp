#include "maestro/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "maestro/errors.hpp"
#include "maestro/rng.hpp"
#include "maestro/workflow_io.hpp"

namespace maestro {

namespace {

using nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

// JSON has no infinity; null stands for "never".
json finite_or_null(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw FormatError(where + ": expected a number");
  return j.get<double>();
}

double number_or_inf(const json& j, const std::string& where) { return j.is_null() ? kInf : number(j, where); }

std::uint64_t count(const json& j, const std::string& where) {
  if (!j.is_number_unsigned()) throw FormatError(where + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

const json& object(const json& j, const std::string& where) {
  if (!j.is_object()) throw FormatError(where + ": expected an object");
  return j;
}

RealRange real_range(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw FormatError(where + ": expected [lo, hi]");
  return {number(j[0], where), number(j[1], where)};
}

IntRange int_range(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw FormatError(where + ": expected [lo, hi] integers");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

Trust parse_trust(const json& j, const std::string& where) {
  const std::string s = j.is_string() ? j.get<std::string>() : "";
  if (s == "personal") return Trust::Personal;
  if (s == "trusted") return Trust::Trusted;
  if (s == "volunteered") return Trust::Volunteered;
  throw FormatError(where + ": trust must be personal, trusted or volunteered");
}

std::string_view to_string(AvailabilityModel::Family f) {
  switch (f) {
    case AvailabilityModel::Family::Exponential: return "exponential";
    case AvailabilityModel::Family::Deterministic: return "deterministic";
    case AvailabilityModel::Family::Uniform: return "uniform";
  }
  return "exponential";
}

void read_sim(const json& j, SimConfig& sim) {
  object(j, "sim");
  require_only_keys(j, {"delta_wait", "delta_ready", "ccr_threshold", "link_rate", "policy", "availability",
                        "sp_speed", "trust", "caps", "horizon", "fixed_sps"},
                    "sim");
  if (j.contains("delta_wait")) sim.delta_wait = number(j["delta_wait"], "sim.delta_wait");
  if (j.contains("delta_ready")) sim.delta_ready = number(j["delta_ready"], "sim.delta_ready");
  if (j.contains("ccr_threshold")) sim.ccr_threshold = number(j["ccr_threshold"], "sim.ccr_threshold");
  if (j.contains("link_rate")) sim.link_rate = number(j["link_rate"], "sim.link_rate");
  if (j.contains("horizon")) sim.horizon = number(j["horizon"], "sim.horizon");
  if (j.contains("policy")) {
    const auto p = j["policy"].is_string() ? parse_policy(j["policy"].get<std::string>()) : std::nullopt;
    if (!p) throw FormatError("sim.policy: expected baseline, healing, protection or fcfs");
    sim.policy = *p;
  }
  if (j.contains("availability")) {
    const std::string a = j["availability"].is_string() ? j["availability"].get<std::string>() : "";
    if (a == "exponential") {
      sim.availability = AvailabilityModel::Family::Exponential;
    } else if (a == "deterministic") {
      sim.availability = AvailabilityModel::Family::Deterministic;
    } else if (a == "uniform") {
      sim.availability = AvailabilityModel::Family::Uniform;
    } else {
      throw FormatError("sim.availability: expected exponential, deterministic or uniform");
    }
  }
  if (j.contains("sp_speed")) sim.sp_speed = real_range(j["sp_speed"], "sim.sp_speed");
  if (j.contains("trust")) {
    const json& t = object(j["trust"], "sim.trust");
    require_only_keys(t, {"personal", "trusted", "volunteered"}, "sim.trust");
    sim.trust = {t.contains("personal") ? number(t["personal"], "sim.trust") : 0.0,
                 t.contains("trusted") ? number(t["trusted"], "sim.trust") : 0.0,
                 t.contains("volunteered") ? number(t["volunteered"], "sim.trust") : 0.0};
  }
  if (j.contains("caps")) {
    const json& c = object(j["caps"], "sim.caps");
    require_only_keys(c, {"blocking", "fork", "non_critical"}, "sim.caps");
    if (c.contains("blocking")) sim.caps.blocking = static_cast<int>(count(c["blocking"], "sim.caps"));
    if (c.contains("fork")) sim.caps.fork = static_cast<int>(count(c["fork"], "sim.caps"));
    if (c.contains("non_critical")) sim.caps.non_critical = static_cast<int>(count(c["non_critical"], "sim.caps"));
  }
  if (j.contains("fixed_sps")) {
    if (!j["fixed_sps"].is_array()) throw FormatError("sim.fixed_sps: expected an array");
    sim.fixed_sps.clear();
    for (const json& s : j["fixed_sps"]) {
      object(s, "sim.fixed_sps[]");
      require_only_keys(s, {"speed", "trust", "join", "leave"}, "sim.fixed_sps[]");
      FixedSp sp;
      if (s.contains("speed")) sp.speed = number(s["speed"], "sim.fixed_sps[].speed");
      if (s.contains("trust")) sp.trust = parse_trust(s["trust"], "sim.fixed_sps[].trust");
      if (s.contains("join")) sp.join = number(s["join"], "sim.fixed_sps[].join");
      if (s.contains("leave")) sp.leave = number_or_inf(s["leave"], "sim.fixed_sps[].leave");
      sim.fixed_sps.push_back(sp);
    }
  }
}

void read_churn(const json& j, ChurnConfig& churn) {
  object(j, "churn");
  require_only_keys(j, {"population", "mean_availability", "mean_interarrival", "initial_population"}, "churn");
  if (j.contains("population")) {
    if (j.contains("mean_interarrival") || j.contains("initial_population")) {
      throw ConfigError("churn: give either population or mean_interarrival/initial_population");
    }
    const double t = j.contains("mean_availability") ? number_or_inf(j["mean_availability"], "churn") : kInf;
    churn = ChurnConfig::from_population(number(j["population"], "churn.population"), t);
    return;
  }
  if (j.contains("mean_availability")) churn.mean_availability = number_or_inf(j["mean_availability"], "churn");
  if (j.contains("mean_interarrival")) churn.mean_interarrival = number_or_inf(j["mean_interarrival"], "churn");
  if (j.contains("initial_population")) churn.initial_population = count(j["initial_population"], "churn");
}

std::vector<KindSpec> read_pool(const json& j, std::size_t index) {
  const std::string where = "generator.kind_pools[" + std::to_string(index) + "]";
  std::vector<KindSpec> pool;
  if (j.is_array()) {
    for (const json& k : j) {
      object(k, where);
      require_only_keys(k, {"name", "work", "output_size"}, where);
      if (!k.contains("name") || !k["name"].is_string()) throw FormatError(where + ": kind needs a name");
      pool.push_back({k["name"].get<std::string>(), k.contains("work") ? number(k["work"], where) : 1.0,
                      k.contains("output_size") ? number(k["output_size"], where) : 1.0});
    }
    return pool;
  }
  // Shorthand: a randomly drawn pool.
  object(j, where);
  require_only_keys(j, {"prefix", "count", "work", "output_size", "seed"}, where);
  const std::string prefix = j.contains("prefix") && j["prefix"].is_string() ? j["prefix"].get<std::string>()
                                                                             : "k" + std::to_string(index) + "-";
  const int n = j.contains("count") ? static_cast<int>(count(j["count"], where)) : 4;
  const RealRange work = j.contains("work") ? real_range(j["work"], where) : RealRange{1.0, 4.0};
  const RealRange out = j.contains("output_size") ? real_range(j["output_size"], where) : RealRange{0.5, 2.0};
  const std::uint64_t seed = j.contains("seed") ? count(j["seed"], where) : index;
  return make_kind_pool(prefix, n, work, out, seed);
}

void read_generator(const json& j, GeneratorSpec& g) {
  object(j, "generator");
  require_only_keys(j, {"stages", "tasks_per_stage", "parents_per_task", "kind_pools", "protection",
                        "non_critical_fraction", "p_fail"},
                    "generator");
  if (j.contains("stages")) g.stages = int_range(j["stages"], "generator.stages");
  if (j.contains("tasks_per_stage")) g.tasks_per_stage = int_range(j["tasks_per_stage"], "generator.tasks_per_stage");
  if (j.contains("parents_per_task")) {
    g.parents_per_task = int_range(j["parents_per_task"], "generator.parents_per_task");
  }
  if (j.contains("kind_pools")) {
    if (!j["kind_pools"].is_array()) throw FormatError("generator.kind_pools: expected an array");
    g.kind_pools.clear();
    for (std::size_t i = 0; i < j["kind_pools"].size(); ++i) g.kind_pools.push_back(read_pool(j["kind_pools"][i], i));
  }
  if (j.contains("protection")) {
    const json& p = object(j["protection"], "generator.protection");
    require_only_keys(p, {"private", "protected", "public"}, "generator.protection");
    g.protection = {p.contains("private") ? number(p["private"], "generator.protection") : 0.0,
                    p.contains("protected") ? number(p["protected"], "generator.protection") : 0.0,
                    p.contains("public") ? number(p["public"], "generator.protection") : 0.0};
  }
  if (j.contains("non_critical_fraction")) {
    g.non_critical_fraction = number(j["non_critical_fraction"], "generator.non_critical_fraction");
  }
  if (j.contains("p_fail")) g.p_fail = number(j["p_fail"], "generator.p_fail");
}

void read_trace(const json& j, TraceSpec& t) {
  object(j, "trace");
  require_only_keys(j, {"n_requests", "mean_interarrival", "pool_size", "deadline", "p_fail"}, "trace");
  if (j.contains("n_requests")) t.n_requests = count(j["n_requests"], "trace.n_requests");
  if (j.contains("mean_interarrival")) t.mean_interarrival = number(j["mean_interarrival"], "trace.mean_interarrival");
  if (j.contains("pool_size")) t.pool_size = count(j["pool_size"], "trace.pool_size");
  if (j.contains("deadline")) t.deadline = real_range(j["deadline"], "trace.deadline");
  if (j.contains("p_fail")) t.p_fail = number(j["p_fail"], "trace.p_fail");
}

}  // namespace

Config default_config() {
  Config c;
  c.generator.stages = {3, 4};
  c.generator.tasks_per_stage = {1, 3};
  c.generator.parents_per_task = {1, 2};
  const int sizes[] = {3, 6, 10, 10};
  for (std::size_t s = 0; s < 4; ++s) {
    c.generator.kind_pools.push_back(
        make_kind_pool("k" + std::to_string(s) + "-", sizes[s], {2.0, 6.0}, {0.5, 2.0}, derive_seed(1, Stream::Pool, s)));
  }
  c.generator.non_critical_fraction = 0.2;
  return c;
}

Config parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  Config c = default_config();
  object(doc, "config");
  require_only_keys(doc, {"seed", "sim", "churn", "generator", "trace", "experiment"}, "config");
  if (doc.contains("seed")) c.seed = count(doc["seed"], "seed");
  if (doc.contains("sim")) read_sim(doc["sim"], c.sim);
  if (doc.contains("churn")) read_churn(doc["churn"], c.sim.churn);
  if (doc.contains("generator")) read_generator(doc["generator"], c.generator);
  if (doc.contains("trace")) read_trace(doc["trace"], c.trace);
  if (doc.contains("experiment")) {
    const json& e = object(doc["experiment"], "experiment");
    require_only_keys(e, {"replications"}, "experiment");
    if (e.contains("replications")) c.replications = count(e["replications"], "experiment.replications");
  }
  c.sim.seed = c.seed;
  c.sim.check();
  check_spec(c.generator);
  if (c.trace.n_requests < 1 || !(c.trace.mean_interarrival > 0.0) || c.trace.pool_size < 1 ||
      c.trace.deadline.empty() || !(c.trace.p_fail >= 0.0 && c.trace.p_fail < 1.0)) {
    throw ConfigError("trace: need n_requests >= 1, mean_interarrival > 0, pool_size >= 1, lo <= hi, 0 <= p_fail < 1");
  }
  if (c.replications < 1) throw ConfigError("experiment.replications must be >= 1");
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const Config& c) {
  json sim;
  sim["delta_wait"] = c.sim.delta_wait;
  sim["delta_ready"] = c.sim.delta_ready;
  sim["ccr_threshold"] = c.sim.ccr_threshold;
  sim["link_rate"] = c.sim.link_rate;
  sim["policy"] = to_string(c.sim.policy);
  sim["availability"] = to_string(c.sim.availability);
  sim["sp_speed"] = {c.sim.sp_speed.lo, c.sim.sp_speed.hi};
  sim["trust"] = {{"personal", c.sim.trust.personal},
                  {"trusted", c.sim.trust.trusted},
                  {"volunteered", c.sim.trust.volunteered}};
  sim["caps"] = {{"blocking", c.sim.caps.blocking}, {"fork", c.sim.caps.fork}, {"non_critical", c.sim.caps.non_critical}};
  sim["horizon"] = c.sim.horizon;
  sim["fixed_sps"] = json::array();
  for (const FixedSp& sp : c.sim.fixed_sps) {
    sim["fixed_sps"].push_back(
        {{"speed", sp.speed}, {"trust", to_string(sp.trust)}, {"join", sp.join}, {"leave", finite_or_null(sp.leave)}});
  }

  json churn{{"mean_availability", finite_or_null(c.sim.churn.mean_availability)},
             {"mean_interarrival", finite_or_null(c.sim.churn.mean_interarrival)},
             {"initial_population", c.sim.churn.initial_population}};

  json pools = json::array();
  for (const auto& pool : c.generator.kind_pools) {
    json kinds = json::array();
    for (const KindSpec& k : pool) kinds.push_back({{"name", k.name}, {"work", k.mean_work}, {"output_size", k.output_size}});
    pools.push_back(kinds);
  }
  const GeneratorSpec& g = c.generator;
  json gen{{"stages", {g.stages.lo, g.stages.hi}},
           {"tasks_per_stage", {g.tasks_per_stage.lo, g.tasks_per_stage.hi}},
           {"parents_per_task", {g.parents_per_task.lo, g.parents_per_task.hi}},
           {"kind_pools", pools},
           {"protection",
            {{"private", g.protection.private_frac},
             {"protected", g.protection.protected_frac},
             {"public", g.protection.public_frac}}},
           {"non_critical_fraction", g.non_critical_fraction},
           {"p_fail", g.p_fail}};

  json trace{{"n_requests", c.trace.n_requests},
             {"mean_interarrival", c.trace.mean_interarrival},
             {"pool_size", c.trace.pool_size},
             {"deadline", {c.trace.deadline.lo, c.trace.deadline.hi}},
             {"p_fail", c.trace.p_fail}};

  json doc{{"seed", c.seed},
           {"sim", sim},
           {"churn", churn},
           {"generator", gen},
           {"trace", trace},
           {"experiment", {{"replications", c.replications}}}};
  return doc.dump(2);
}

std::string content_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace maestro
