#pragma once

#include <mutex>
#include <string>
#include <vector>

#include "dao/backends.hpp"

namespace dao {

/// Character-trigram feature hashing with signed buckets, L2-normalized.
/// Text is padded with two boundary markers on each side so short strings
/// still produce several features.
class HashEmbedder final : public EmbeddingBackend {
 public:
  explicit HashEmbedder(std::size_t dimension);  // dimension >= 8
  std::vector<double> embed(std::string_view text) override;
  std::size_t dimension() const override { return dimension_; }

 private:
  std::size_t dimension_;
};

// Matcher syntax: "*" matches anything, "re:<pattern>" is an ECMAScript regex
// searched in the message, anything else must occur as a substring.
struct ScriptEntry {
  std::string matcher;
  std::string reply;
  bool repeat = false;  // repeat entries are never consumed
};

bool script_matches(const std::string& matcher, const std::string& message);

/// Replays canned replies. Each call answers with the first unconsumed entry
/// whose matcher accepts the latest user message.
class ScriptedChat final : public ChatBackend {
 public:
  ScriptedChat(std::string name, std::vector<ScriptEntry> script);

  std::string complete(std::span<const ChatMessage> messages, double temperature) override;

  std::size_t calls() const;
  std::size_t remaining() const;  // unconsumed non-repeat entries
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  std::vector<ScriptEntry> script_;
  std::vector<bool> consumed_;
  std::size_t calls_ = 0;
  mutable std::mutex mutex_;
};

struct ScorerKey {
  std::vector<std::string> match;  // all must occur in the prompt
  std::string phrase;              // the completion this prompt prefers
  double scale = 1.0;
};

/// Deterministic stand-in for a scoring LM:
///   nll = scale * (1 + lev(completion, phrase) + |completion|) / (1 + |phrase|)
/// where (phrase, scale) come from the first key matching the prompt. The
/// preferred phrase scores exactly `scale`; the |completion| term keeps the
/// score non-decreasing when the completion is extended.
class KeyedScorer final : public ScoringBackend {
 public:
  explicit KeyedScorer(std::vector<ScorerKey> keys = {}, std::string default_phrase = {},
                       double default_scale = 1.0);

  double negative_log_likelihood(std::string_view prompt, std::string_view completion) override;

  const std::vector<ScorerKey>& keys() const noexcept { return keys_; }

 private:
  std::vector<ScorerKey> keys_;
  std::string default_phrase_;
  double default_scale_;
};

}  // namespace dao
