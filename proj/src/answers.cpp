#include "dao/answers.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace dao {

TriggerAnswer::TriggerAnswer(EventTypeId type, std::string trigger)
    : event_(std::make_pair(std::move(type), std::move(trigger))) {}

bool ArgumentAnswer::is_empty() const {
  return std::none_of(rows.begin(), rows.end(), [](const ArgumentRow& r) { return r.content.has_value(); });
}

bool is_abstention(const Answer& answer) {
  if (const auto* t = std::get_if<TriggerAnswer>(&answer)) return !t->has_event();
  return std::get<ArgumentAnswer>(answer).is_empty();
}

std::string render_answer(const TriggerAnswer& answer) {
  if (!answer.has_event()) return "[]";
  return "[" + nlohmann::json(answer.event_type()).dump() + ", " + nlohmann::json(answer.trigger()).dump() + "]";
}

std::string render_answer(const ArgumentAnswer& answer) {
  std::string out = "| event type | argument role | argument content |\n|---|---|---|";
  for (const auto& row : answer.rows) {
    out += "\n| " + answer.event_type + " | " + row.role + " | " + row.content.value_or("None") + " |";
  }
  return out;
}

std::string render_answer(const Answer& answer) {
  return std::visit([](const auto& a) { return render_answer(a); }, answer);
}

ArgumentAnswer canonicalize(ArgumentAnswer answer, const std::vector<std::string>& roles,
                            std::vector<std::string>* dropped) {
  auto rank = [&](const std::string& role) {
    return static_cast<std::size_t>(std::find(roles.begin(), roles.end(), role) - roles.begin());
  };
  std::vector<ArgumentRow> kept;
  for (auto& row : answer.rows) {
    if (rank(row.role) == roles.size()) {
      if (dropped) dropped->push_back(row.role);
      continue;
    }
    kept.push_back(std::move(row));
  }
  std::stable_sort(kept.begin(), kept.end(), [&](const ArgumentRow& a, const ArgumentRow& b) {
    if (rank(a.role) != rank(b.role)) return rank(a.role) < rank(b.role);
    return a.content < b.content;
  });
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  // A "None" row is redundant once the same role has real content.
  std::vector<std::string> filled;
  for (const auto& r : kept)
    if (r.content) filled.push_back(r.role);
  std::erase_if(kept, [&](const ArgumentRow& r) {
    return !r.content && std::find(filled.begin(), filled.end(), r.role) != filled.end();
  });
  answer.rows = std::move(kept);
  return answer;
}

}  // namespace dao
