#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dao {

enum class ChatRole { System, User, Assistant };

std::string_view to_string(ChatRole role);

struct ChatMessage {
  ChatRole role = ChatRole::User;
  std::string content;
};

/// A chat-completion model. Implementations must be safe for concurrent calls.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string complete(std::span<const ChatMessage> messages, double temperature) = 0;
};

/// Sentence encoder. `embed` returns exactly `dimension()` components.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::vector<double> embed(std::string_view text) = 0;
  virtual std::size_t dimension() const = 0;
};

/// Frozen scoring LM: sum over completion tokens of -log p(token | prefix).
class ScoringBackend {
 public:
  virtual ~ScoringBackend() = default;
  virtual double negative_log_likelihood(std::string_view prompt, std::string_view completion) = 0;
};

}  // namespace dao
