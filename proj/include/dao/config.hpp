#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dao/adacp.hpp"
#include "dao/drag.hpp"
#include "dao/http_backends.hpp"
#include "dao/prompts.hpp"

namespace dao {

struct ThresholdConfig {
  std::optional<double> override_value;  // wins over calibration when set
  std::optional<double> calibrated;       // written by `dao calibrate`
};

// kind: chat "replay" | "http"; embedding "hash" | "http"; scoring "keyed" | "http".
struct BackendConfig {
  std::string kind;
  HttpEndpoint endpoint;
  std::size_t dimension = 256;  // embeddings only
};

struct AgentConfig {
  std::string name;
  std::string backend = "default";  // key into RunConfig::chat_backends
  double temperature = 0.0;
  std::string model;  // overrides the backend's model when non-empty
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t max_rounds = 3;
  std::size_t workers = 1;
  DragConfig drag;
  double delta = 0.1;
  double beta = 0.5;
  bool adacp_enabled = true;
  ThresholdConfig ed{1.0, std::nullopt};
  ThresholdConfig eae{3.0, std::nullopt};
  std::size_t calibration_sample = 0;  // 0: whole calib split, else a seeded sample of this size
  bool use_drag = true;
  bool recluster = true;
  bool freeze_topk = false;
  bool llm_summarizer = false;
  bool single_token_triggers = true;

  std::vector<AgentConfig> debaters{{"A", "default", 0.0, ""}, {"B", "default", 0.0, ""}};
  AgentConfig critic{"critic", "default", 0.0, ""};
  AgentConfig judge{"judge", "default", 0.0, ""};
  AgentConfig summarizer{"summarizer", "default", 0.0, ""};

  std::map<std::string, BackendConfig> chat_backends{{"default", {"replay", {}, 256}}};
  BackendConfig embedding{"hash", {}, 256};
  BackendConfig scoring{"keyed", {}, 256};

  std::string replay_bundle;  // as written; relative to the config file
  std::string ontology_path;
  std::string reference_path;

  std::filesystem::path base_dir;  // not serialized

  std::filesystem::path resolve(const std::string& path) const;
  /// override, else calibrated value. Throws ConfigError when neither is set.
  double initial_threshold(Task task) const;
  void validate() const;
};

RunConfig config_from_json(const nlohmann::json& j, std::filesystem::path base_dir = {});
nlohmann::json config_to_json(const RunConfig& config);
/// Stable text form (two-space indent, trailing newline).
std::string dump_config(const RunConfig& config);
/// Throws IoError, FormatError, ConfigError.
RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

}  // namespace dao
