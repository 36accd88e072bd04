#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "dao/backends.hpp"

namespace dao {

struct HttpEndpoint {
  std::string url;          // scheme://host[:port][/prefix]
  std::string url_env;      // if set and present in the environment, overrides url
  std::string path;         // request path appended to the url prefix
  std::string model;
  std::string api_key_env;  // bearer token variable; empty means no auth header
  double timeout_seconds = 60.0;
  int max_attempts = 5;
  int initial_backoff_ms = 500;
};

/// POSTs `body` as JSON and returns the parsed reply. 429 and 5xx responses
/// and transport failures are retried with exponential backoff up to
/// `max_attempts`; other statuses fail immediately.
nlohmann::json post_json(const HttpEndpoint& endpoint, const nlohmann::json& body);

/// OpenAI-compatible chat completions: `{model, messages, temperature}` in,
/// `choices[0].message.content` out.
class HttpChatBackend final : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpEndpoint endpoint);
  std::string complete(std::span<const ChatMessage> messages, double temperature) override;

 private:
  HttpEndpoint endpoint_;
};

/// OpenAI-compatible embeddings: `{model, input}` in, `data[0].embedding` out.
class HttpEmbeddingBackend final : public EmbeddingBackend {
 public:
  HttpEmbeddingBackend(HttpEndpoint endpoint, std::size_t dimension);
  std::vector<double> embed(std::string_view text) override;
  std::size_t dimension() const override { return dimension_; }

 private:
  HttpEndpoint endpoint_;
  std::size_t dimension_;
};

/// Scoring sidecar: `{prompt, completion}` in, `{nll}` out.
class HttpScoringBackend final : public ScoringBackend {
 public:
  explicit HttpScoringBackend(HttpEndpoint endpoint);
  double negative_log_likelihood(std::string_view prompt, std::string_view completion) override;

 private:
  HttpEndpoint endpoint_;
};

}  // namespace dao
