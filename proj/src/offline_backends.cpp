#include "dao/offline_backends.hpp"

#include <regex>

#include "dao/corpus.hpp"
#include "dao/errors.hpp"
#include "dao/text.hpp"

namespace dao {

std::string_view to_string(ChatRole role) {
  switch (role) {
    case ChatRole::System: return "system";
    case ChatRole::User: return "user";
    case ChatRole::Assistant: return "assistant";
  }
  return "user";
}

HashEmbedder::HashEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension < 8) throw ConfigError("hash embedder dimension must be at least 8");
}

std::vector<double> HashEmbedder::embed(std::string_view text) {
  if (text.empty()) throw EmptyText();
  std::string padded = "\x02\x02";
  padded += text;
  padded += "\x03\x03";
  std::vector<double> v(dimension_, 0.0);
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    const std::uint64_t h = fnv1a(std::string_view(padded).substr(i, 3));
    const double sign = (h >> 63) ? -1.0 : 1.0;
    v[(h >> 1) % dimension_] += sign;
  }
  bool all_zero = true;
  for (double x : v) all_zero = all_zero && x == 0.0;
  // Signed features can cancel exactly; fall back to a single indicator.
  if (all_zero) v[fnv1a(text) % dimension_] = 1.0;
  return normalized(v);
}

bool script_matches(const std::string& matcher, const std::string& message) {
  if (matcher == "*") return true;
  if (matcher.rfind("re:", 0) == 0) return std::regex_search(message, std::regex(matcher.substr(3)));
  return message.find(matcher) != std::string::npos;
}

ScriptedChat::ScriptedChat(std::string name, std::vector<ScriptEntry> script)
    : name_(std::move(name)), script_(std::move(script)), consumed_(script_.size(), false) {}

std::string ScriptedChat::complete(std::span<const ChatMessage> messages, double /*temperature*/) {
  std::lock_guard lock(mutex_);
  ++calls_;
  std::string latest;
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if (it->role == ChatRole::User) {
      latest = it->content;
      break;
    }
  }
  bool any_open = false;
  for (std::size_t i = 0; i < script_.size(); ++i) {
    if (consumed_[i]) continue;
    any_open = true;
    if (script_matches(script_[i].matcher, latest)) {
      if (!script_[i].repeat) consumed_[i] = true;
      return script_[i].reply;
    }
  }
  if (!any_open) throw ScriptExhausted(name_);
  throw NoMatch(name_, digest(latest));
}

std::size_t ScriptedChat::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

std::size_t ScriptedChat::remaining() const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (std::size_t i = 0; i < script_.size(); ++i) n += (!consumed_[i] && !script_[i].repeat);
  return n;
}

KeyedScorer::KeyedScorer(std::vector<ScorerKey> keys, std::string default_phrase, double default_scale)
    : keys_(std::move(keys)), default_phrase_(std::move(default_phrase)), default_scale_(default_scale) {}

double KeyedScorer::negative_log_likelihood(std::string_view prompt, std::string_view completion) {
  const std::string* phrase = &default_phrase_;
  double scale = default_scale_;
  for (const auto& key : keys_) {
    bool ok = true;
    for (const auto& m : key.match) ok = ok && prompt.find(m) != std::string_view::npos;
    if (ok) {
      phrase = &key.phrase;
      scale = key.scale;
      break;
    }
  }
  const double lev = static_cast<double>(edit_distance(completion, *phrase));
  return scale * (1.0 + lev + static_cast<double>(completion.size())) /
         (1.0 + static_cast<double>(phrase->size()));
}

}  // namespace dao
