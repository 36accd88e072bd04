#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dao {

// "Parent:Subtype", compared by exact string equality.
using EventTypeId = std::string;

struct EventDefinition {
  EventTypeId type_id;
  std::string definition_text;
  std::vector<std::string> typical_triggers;
  std::vector<std::string> roles;  // file order; prompts enumerate roles in this order

  bool operator==(const EventDefinition&) const = default;
};

/// Event schema: one definition per event type. Immutable once loaded.
class EventOntology {
 public:
  EventOntology() = default;

  /// Reads the JSON Lines ontology format. Blank lines are skipped, unknown
  /// keys ignored. Throws IoError, FormatError or DuplicateType.
  static EventOntology load(const std::filesystem::path& path);
  static EventOntology parse(std::istream& in);
  static EventOntology from_definitions(std::vector<EventDefinition> defs);

  /// Throws UnknownEventType.
  const EventDefinition& lookup(std::string_view id) const;
  bool contains(std::string_view id) const;
  std::size_t size() const noexcept { return definitions_.size(); }
  bool empty() const noexcept { return definitions_.empty(); }
  std::vector<EventTypeId> type_ids() const;

 private:
  void insert(EventDefinition def, std::size_t line);

  std::map<EventTypeId, EventDefinition, std::less<>> definitions_;
};

}  // namespace dao
