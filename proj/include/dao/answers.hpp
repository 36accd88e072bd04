#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dao/ontology.hpp"

namespace dao {

/// ED answer: an (event type, trigger) pair, or "no event".
class TriggerAnswer {
 public:
  TriggerAnswer() = default;  // no event
  TriggerAnswer(EventTypeId type, std::string trigger);

  static TriggerAnswer no_event() { return {}; }

  bool has_event() const noexcept { return event_.has_value(); }
  const EventTypeId& event_type() const { return event_->first; }
  const std::string& trigger() const { return event_->second; }

  bool operator==(const TriggerAnswer&) const = default;

 private:
  std::optional<std::pair<EventTypeId, std::string>> event_;
};

struct ArgumentRow {
  std::string role;
  std::optional<std::string> content;  // nullopt renders as "None"
  bool operator==(const ArgumentRow&) const = default;
  auto operator<=>(const ArgumentRow&) const = default;
};

/// EAE answer: the role table for one event.
struct ArgumentAnswer {
  EventTypeId event_type;
  std::vector<ArgumentRow> rows;

  /// True when no row carries content (the EAE abstention).
  bool is_empty() const;
  bool operator==(const ArgumentAnswer&) const = default;
};

using Answer = std::variant<TriggerAnswer, ArgumentAnswer>;

/// The "no event" / empty-table answers that AdaCP never rejects.
bool is_abstention(const Answer& answer);

/// `["type", "trigger"]` or `[]`.
std::string render_answer(const TriggerAnswer& answer);
/// Markdown role table with the EAE header.
std::string render_answer(const ArgumentAnswer& answer);
std::string render_answer(const Answer& answer);

/// Orders rows by the ontology role order, then content, and drops exact
/// duplicates and rows whose role is not in `roles` (returned in `dropped`).
ArgumentAnswer canonicalize(ArgumentAnswer answer, const std::vector<std::string>& roles,
                            std::vector<std::string>* dropped = nullptr);

}  // namespace dao
