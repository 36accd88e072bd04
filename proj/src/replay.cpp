#include "dao/replay.hpp"

#include <fstream>

#include "dao/errors.hpp"

namespace dao {

using json = nlohmann::json;

namespace {

std::vector<ScriptEntry> script_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw FormatError(0, where + ": script must be an array");
  std::vector<ScriptEntry> out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("reply") || !e["reply"].is_string())
      throw FormatError(0, where + ": entries need a string \"reply\"");
    ScriptEntry s;
    s.matcher = e.value("match", std::string("*"));
    s.reply = e["reply"].get<std::string>();
    s.repeat = e.value("repeat", false);
    out.push_back(std::move(s));
  }
  return out;
}

AgentScripts scripts_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw FormatError(0, where + " must be an object");
  AgentScripts out;
  for (const auto& [agent, script] : j.items()) out[agent] = script_from_json(script, where + "." + agent);
  return out;
}

json scripts_to_json(const AgentScripts& scripts) {
  json out = json::object();
  for (const auto& [agent, script] : scripts) {
    json arr = json::array();
    for (const auto& e : script) arr.push_back({{"match", e.matcher}, {"reply", e.reply}, {"repeat", e.repeat}});
    out[agent] = arr;
  }
  return out;
}

}  // namespace

const std::vector<ScriptEntry>& ReplayBundle::script_for(std::string_view sentence_id, std::string_view agent) const {
  static const std::vector<ScriptEntry> empty;
  if (auto s = sessions.find(sentence_id); s != sessions.end()) {
    if (auto a = s->second.find(agent); a != s->second.end()) return a->second;
  }
  if (auto a = defaults.find(agent); a != defaults.end()) return a->second;
  return empty;
}

std::unique_ptr<KeyedScorer> ReplayBundle::make_scorer() const {
  return std::make_unique<KeyedScorer>(scorer_keys, default_phrase, default_scale);
}

ReplayBundle bundle_from_json(const json& j) {
  if (!j.is_object()) throw FormatError(0, "replay bundle must be an object");
  ReplayBundle b;
  try {
    if (j.contains("agents")) b.defaults = scripts_from_json(j["agents"], "agents");
    if (j.contains("sessions")) {
      if (!j["sessions"].is_object()) throw FormatError(0, "sessions must be an object");
      for (const auto& [sid, scripts] : j["sessions"].items())
        b.sessions[sid] = scripts_from_json(scripts, "sessions." + sid);
    }
    if (j.contains("scorer")) {
      const json& s = j["scorer"];
      for (const auto& k : s.value("keys", json::array())) {
        ScorerKey key;
        const json& m = k.at("match");
        if (m.is_string()) {
          key.match.push_back(m.get<std::string>());
        } else {
          key.match = m.get<std::vector<std::string>>();
        }
        key.phrase = k.at("phrase").get<std::string>();
        key.scale = k.value("scale", 1.0);
        b.scorer_keys.push_back(std::move(key));
      }
      b.default_phrase = s.value("default_phrase", std::string());
      b.default_scale = s.value("default_scale", 1.0);
    }
  } catch (const json::exception& e) {
    throw FormatError(0, std::string("replay bundle: ") + e.what());
  }
  return b;
}

json bundle_to_json(const ReplayBundle& b) {
  json sessions = json::object();
  for (const auto& [sid, scripts] : b.sessions) sessions[sid] = scripts_to_json(scripts);
  json keys = json::array();
  for (const auto& k : b.scorer_keys) keys.push_back({{"match", k.match}, {"phrase", k.phrase}, {"scale", k.scale}});
  return {{"agents", scripts_to_json(b.defaults)},
          {"sessions", sessions},
          {"scorer", {{"keys", keys}, {"default_phrase", b.default_phrase}, {"default_scale", b.default_scale}}}};
}

ReplayBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open replay bundle " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(0, path.string() + ": " + e.what());
  }
  return bundle_from_json(j);
}

}  // namespace dao
