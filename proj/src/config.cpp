#include "dao/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <initializer_list>
#include <sstream>

#include "dao/errors.hpp"

namespace dao {

using json = nlohmann::json;

namespace {

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key \"" + key + "\" in " + std::string(where));
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (it->is_null()) {
    out.reset();
    return;
  }
  T v{};
  read(j, key, v);
  out = v;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

BackendConfig backend_from_json(const json& j, std::string_view where) {
  check_keys(j, where, {"kind", "dimension", "url", "url_env", "path", "model", "api_key_env", "timeout_seconds",
                        "max_attempts", "initial_backoff_ms"});
  BackendConfig b;
  read(j, "kind", b.kind);
  read(j, "dimension", b.dimension);
  read(j, "url", b.endpoint.url);
  read(j, "url_env", b.endpoint.url_env);
  read(j, "path", b.endpoint.path);
  read(j, "model", b.endpoint.model);
  read(j, "api_key_env", b.endpoint.api_key_env);
  read(j, "timeout_seconds", b.endpoint.timeout_seconds);
  read(j, "max_attempts", b.endpoint.max_attempts);
  read(j, "initial_backoff_ms", b.endpoint.initial_backoff_ms);
  return b;
}

json backend_to_json(const BackendConfig& b, bool with_dimension) {
  json j = {{"kind", b.kind}};
  if (with_dimension) j["dimension"] = b.dimension;
  if (b.kind == "http") {
    j["url"] = b.endpoint.url;
    j["url_env"] = b.endpoint.url_env;
    j["path"] = b.endpoint.path;
    j["model"] = b.endpoint.model;
    j["api_key_env"] = b.endpoint.api_key_env;
    j["timeout_seconds"] = b.endpoint.timeout_seconds;
    j["max_attempts"] = b.endpoint.max_attempts;
    j["initial_backoff_ms"] = b.endpoint.initial_backoff_ms;
  }
  return j;
}

AgentConfig agent_from_json(const json& j, std::string_view where, std::string default_name) {
  check_keys(j, where, {"name", "backend", "temperature", "model"});
  AgentConfig a{std::move(default_name), "default", 0.0, ""};
  read(j, "name", a.name);
  read(j, "backend", a.backend);
  read(j, "temperature", a.temperature);
  read(j, "model", a.model);
  return a;
}

json agent_to_json(const AgentConfig& a) {
  return {{"name", a.name}, {"backend", a.backend}, {"temperature", a.temperature}, {"model", a.model}};
}

// Thresholds may be +inf (too few calibration rows); JSON has no infinity, so it is spelled "inf".
void read_threshold(const json& j, const char* key, std::optional<double>& out) {
  auto it = j.find(key);
  if (it != j.end() && it->is_string()) {
    if (it->get<std::string>() != "inf") throw ConfigError(std::string("bad value for \"") + key + "\"");
    out = std::numeric_limits<double>::infinity();
    return;
  }
  read_optional(j, key, out);
}

json threshold_json(const std::optional<double>& v) {
  if (v && std::isinf(*v)) return "inf";
  return optional_json(v);
}

ThresholdConfig threshold_from_json(const json& j, std::string_view where, ThresholdConfig t) {
  check_keys(j, where, {"override", "calibrated"});
  read_threshold(j, "override", t.override_value);
  read_threshold(j, "calibrated", t.calibrated);
  return t;
}

}  // namespace

std::filesystem::path RunConfig::resolve(const std::string& path) const {
  if (path.empty()) return {};
  std::filesystem::path p(path);
  return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

double RunConfig::initial_threshold(Task task) const {
  const auto& t = task == Task::ED ? ed : eae;
  if (t.override_value) return *t.override_value;
  if (t.calibrated) return *t.calibrated;
  throw ConfigError(std::string("no initial threshold for ") + std::string(to_string(task)) +
                    "; set an override or run calibrate");
}

void RunConfig::validate() const {
  if (max_rounds == 0) throw ConfigError("max_rounds must be positive");
  if (workers == 0) throw ConfigError("workers must be positive");
  drag.validate();
  AdaCPConfig{delta, beta, ed.override_value, eae.override_value}.validate();
  if (debaters.size() < 2) throw ConfigError("at least two debaters are required");
  std::vector<const AgentConfig*> all;
  for (const auto& d : debaters) all.push_back(&d);
  all.push_back(&critic);
  all.push_back(&judge);
  if (llm_summarizer) all.push_back(&summarizer);
  for (std::size_t i = 0; i < debaters.size(); ++i)
    for (std::size_t k = i + 1; k < debaters.size(); ++k)
      if (debaters[i].name == debaters[k].name) throw ConfigError("duplicate debater name " + debaters[i].name);
  for (const auto* a : all) {
    auto it = chat_backends.find(a->backend);
    if (it == chat_backends.end()) throw ConfigError("agent " + a->name + " uses unknown backend " + a->backend);
  }
  for (const auto& [name, b] : chat_backends)
    if (b.kind != "replay" && b.kind != "http") throw ConfigError("chat backend " + name + ": unknown kind " + b.kind);
  if (embedding.kind != "hash" && embedding.kind != "http") throw ConfigError("unknown embedding kind " + embedding.kind);
  if (scoring.kind != "keyed" && scoring.kind != "http") throw ConfigError("unknown scoring kind " + scoring.kind);
  bool needs_bundle = scoring.kind == "keyed";
  for (const auto& [name, b] : chat_backends) needs_bundle = needs_bundle || b.kind == "replay";
  if (needs_bundle && replay_bundle.empty()) throw ConfigError("replay and keyed backends need a replay bundle");
}

RunConfig config_from_json(const json& j, std::filesystem::path base_dir) {
  check_keys(j, "config", {"seed", "max_rounds", "workers", "drag", "adacp", "agents", "backends", "replay", "paths",
                           "llm_summarizer", "single_token_triggers"});
  RunConfig c;
  c.base_dir = std::move(base_dir);
  read(j, "seed", c.seed);
  read(j, "max_rounds", c.max_rounds);
  read(j, "workers", c.workers);
  read(j, "llm_summarizer", c.llm_summarizer);
  read(j, "single_token_triggers", c.single_token_triggers);
  read(j, "replay", c.replay_bundle);
  if (auto it = j.find("drag"); it != j.end()) {
    const json& d = *it;
    check_keys(d, "drag", {"top_k", "max_examples", "initial_radius", "radius_decay", "positive_quota", "enabled",
                           "recluster", "freeze_topk"});
    read(d, "top_k", c.drag.top_k);
    read(d, "max_examples", c.drag.max_examples);
    read(d, "initial_radius", c.drag.initial_radius);
    read(d, "radius_decay", c.drag.radius_decay);
    read_optional(d, "positive_quota", c.drag.positive_quota);
    read(d, "enabled", c.use_drag);
    read(d, "recluster", c.recluster);
    read(d, "freeze_topk", c.freeze_topk);
  }
  if (auto it = j.find("adacp"); it != j.end()) {
    const json& a = *it;
    check_keys(a, "adacp", {"enabled", "delta", "beta", "calibration_sample", "ed", "eae"});
    read(a, "enabled", c.adacp_enabled);
    read(a, "delta", c.delta);
    read(a, "beta", c.beta);
    read(a, "calibration_sample", c.calibration_sample);
    if (auto e = a.find("ed"); e != a.end()) c.ed = threshold_from_json(*e, "adacp.ed", c.ed);
    if (auto e = a.find("eae"); e != a.end()) c.eae = threshold_from_json(*e, "adacp.eae", c.eae);
  }
  if (auto it = j.find("agents"); it != j.end()) {
    const json& a = *it;
    check_keys(a, "agents", {"debaters", "critic", "judge", "summarizer"});
    if (auto d = a.find("debaters"); d != a.end()) {
      if (!d->is_array()) throw ConfigError("agents.debaters must be an array");
      c.debaters.clear();
      for (std::size_t i = 0; i < d->size(); ++i)
        c.debaters.push_back(agent_from_json((*d)[i], "agents.debaters", std::string(1, static_cast<char>('A' + i % 26))));
    }
    if (auto x = a.find("critic"); x != a.end()) c.critic = agent_from_json(*x, "agents.critic", "critic");
    if (auto x = a.find("judge"); x != a.end()) c.judge = agent_from_json(*x, "agents.judge", "judge");
    if (auto x = a.find("summarizer"); x != a.end()) c.summarizer = agent_from_json(*x, "agents.summarizer", "summarizer");
  }
  if (auto it = j.find("backends"); it != j.end()) {
    const json& b = *it;
    check_keys(b, "backends", {"chat", "embedding", "scoring"});
    if (auto x = b.find("chat"); x != b.end()) {
      if (!x->is_object()) throw ConfigError("backends.chat must be an object");
      c.chat_backends.clear();
      for (const auto& [name, spec] : x->items()) c.chat_backends[name] = backend_from_json(spec, "backends.chat." + name);
    }
    if (auto x = b.find("embedding"); x != b.end()) c.embedding = backend_from_json(*x, "backends.embedding");
    if (auto x = b.find("scoring"); x != b.end()) c.scoring = backend_from_json(*x, "backends.scoring");
  }
  if (auto it = j.find("paths"); it != j.end()) {
    check_keys(*it, "paths", {"ontology", "reference"});
    read(*it, "ontology", c.ontology_path);
    read(*it, "reference", c.reference_path);
  }
  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  json debaters = json::array();
  for (const auto& d : c.debaters) debaters.push_back(agent_to_json(d));
  json chat = json::object();
  for (const auto& [name, b] : c.chat_backends) chat[name] = backend_to_json(b, false);
  return {
      {"seed", c.seed},
      {"max_rounds", c.max_rounds},
      {"workers", c.workers},
      {"drag",
       {{"top_k", c.drag.top_k},
        {"max_examples", c.drag.max_examples},
        {"initial_radius", c.drag.initial_radius},
        {"radius_decay", c.drag.radius_decay},
        {"positive_quota", optional_json(c.drag.positive_quota)},
        {"enabled", c.use_drag},
        {"recluster", c.recluster},
        {"freeze_topk", c.freeze_topk}}},
      {"adacp",
       {{"enabled", c.adacp_enabled},
        {"delta", c.delta},
        {"beta", c.beta},
        {"calibration_sample", c.calibration_sample},
        {"ed", {{"override", threshold_json(c.ed.override_value)}, {"calibrated", threshold_json(c.ed.calibrated)}}},
        {"eae", {{"override", threshold_json(c.eae.override_value)}, {"calibrated", threshold_json(c.eae.calibrated)}}}}},
      {"agents",
       {{"debaters", debaters},
        {"critic", agent_to_json(c.critic)},
        {"judge", agent_to_json(c.judge)},
        {"summarizer", agent_to_json(c.summarizer)}}},
      {"backends",
       {{"chat", chat}, {"embedding", backend_to_json(c.embedding, true)}, {"scoring", backend_to_json(c.scoring, false)}}},
      {"replay", c.replay_bundle},
      {"paths", {{"ontology", c.ontology_path}, {"reference", c.reference_path}}},
      {"llm_summarizer", c.llm_summarizer},
      {"single_token_triggers", c.single_token_triggers},
  };
}

std::string dump_config(const RunConfig& config) { return config_to_json(config).dump(2) + "\n"; }

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(0, path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write config " + path.string());
  out << dump_config(config);
  if (!out) throw IoError("failed writing config " + path.string());
}

}  // namespace dao
