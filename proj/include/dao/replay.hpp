#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dao/offline_backends.hpp"

namespace dao {

using AgentScripts = std::map<std::string, std::vector<ScriptEntry>, std::less<>>;

/// Scripted conversations for offline runs. Agent keys are "debater:<name>",
/// "critic", "judge" and "summarizer"; a sentence without its own session
/// falls back to the default scripts.
struct ReplayBundle {
  AgentScripts defaults;
  std::map<std::string, AgentScripts, std::less<>> sessions;
  std::vector<ScorerKey> scorer_keys;
  std::string default_phrase;
  double default_scale = 1.0;

  const std::vector<ScriptEntry>& script_for(std::string_view sentence_id, std::string_view agent) const;
  std::unique_ptr<KeyedScorer> make_scorer() const;
};

ReplayBundle bundle_from_json(const nlohmann::json& j);
nlohmann::json bundle_to_json(const ReplayBundle& bundle);
/// Throws IoError, FormatError.
ReplayBundle load_bundle(const std::filesystem::path& path);

}  // namespace dao
