#include "dao/http_backends.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "dao/errors.hpp"

namespace dao {

using json = nlohmann::json;

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path part, without trailing slash
};

SplitUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("endpoint url needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  SplitUrl out;
  out.origin = url.substr(0, slash);
  if (slash != std::string::npos) {
    out.prefix = url.substr(slash);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  }
  return out;
}

std::string resolve_url(const HttpEndpoint& ep) {
  if (!ep.url_env.empty()) {
    if (const char* v = std::getenv(ep.url_env.c_str()); v && *v) return v;
  }
  if (ep.url.empty()) throw ConfigError("endpoint has no url");
  return ep.url;
}

bool retryable(int status) { return status == 429 || status == 500 || status == 502 || status == 503 || status == 504; }

}  // namespace

json post_json(const HttpEndpoint& endpoint, const json& body) {
  const SplitUrl url = split_url(resolve_url(endpoint));
  httplib::Client client(url.origin);
  const auto timeout = std::chrono::duration<double>(endpoint.timeout_seconds);
  const auto secs = static_cast<time_t>(endpoint.timeout_seconds);
  const auto usecs = static_cast<time_t>((timeout.count() - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  if (!endpoint.api_key_env.empty()) {
    const char* key = std::getenv(endpoint.api_key_env.c_str());
    if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const std::string payload = body.dump();
  const std::string path = url.prefix + endpoint.path;
  const int attempts = std::max(1, endpoint.max_attempts);

  for (int attempt = 1;; ++attempt) {
    auto res = client.Post(path, headers, payload, "application/json");
    const bool last = attempt >= attempts;
    if (!res) {
      if (last) throw TransportError(httplib::to_string(res.error()));
    } else if (res->status >= 200 && res->status < 300) {
      try {
        return json::parse(res->body);
      } catch (const json::parse_error& e) {
        throw MalformedResponse(std::string("response is not JSON: ") + e.what());
      }
    } else if (!retryable(res->status)) {
      throw HttpStatus(res->status, res->body);
    } else if (last) {
      if (res->status == 429) throw RateLimited(attempt);
      throw HttpStatus(res->status, res->body);
    }
    const auto backoff = std::chrono::milliseconds(
        static_cast<long long>(endpoint.initial_backoff_ms * std::pow(2.0, attempt - 1)));
    std::this_thread::sleep_for(backoff);
  }
}

HttpChatBackend::HttpChatBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  if (endpoint_.path.empty()) endpoint_.path = "/v1/chat/completions";
}

std::string HttpChatBackend::complete(std::span<const ChatMessage> messages, double temperature) {
  json msgs = json::array();
  for (const auto& m : messages) msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  const json reply = post_json(endpoint_, {{"model", endpoint_.model}, {"messages", msgs}, {"temperature", temperature}});
  try {
    const auto& content = reply.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw MalformedResponse("message content is not a string");
    return content.get<std::string>();
  } catch (const json::exception& e) {
    throw MalformedResponse(std::string("chat response lacks choices[0].message.content: ") + e.what());
  }
}

HttpEmbeddingBackend::HttpEmbeddingBackend(HttpEndpoint endpoint, std::size_t dimension)
    : endpoint_(std::move(endpoint)), dimension_(dimension) {
  if (endpoint_.path.empty()) endpoint_.path = "/v1/embeddings";
  if (dimension_ == 0) throw ConfigError("embedding dimension must be positive");
}

std::vector<double> HttpEmbeddingBackend::embed(std::string_view text) {
  if (text.empty()) throw EmptyText();
  const json reply = post_json(endpoint_, {{"model", endpoint_.model}, {"input", std::string(text)}});
  std::vector<double> v;
  try {
    v = reply.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw MalformedResponse(std::string("embedding response lacks data[0].embedding: ") + e.what());
  }
  if (v.size() != dimension_) throw DimensionMismatch(dimension_, v.size());
  return v;
}

HttpScoringBackend::HttpScoringBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  if (endpoint_.path.empty()) endpoint_.path = "/score";
}

double HttpScoringBackend::negative_log_likelihood(std::string_view prompt, std::string_view completion) {
  const json reply =
      post_json(endpoint_, {{"prompt", std::string(prompt)}, {"completion", std::string(completion)}});
  double nll = 0.0;
  try {
    nll = reply.at("nll").get<double>();
  } catch (const json::exception& e) {
    throw MalformedResponse(std::string("scoring response lacks nll: ") + e.what());
  }
  if (!(nll >= 0.0) || !std::isfinite(nll)) throw MalformedResponse("nll must be a non-negative number");
  return nll;
}

}  // namespace dao
