#include "dao/ontology.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "dao/errors.hpp"
#include "dao/text.hpp"

namespace dao {

using json = nlohmann::json;

namespace {

std::vector<std::string> string_list(const json& obj, const char* key, std::size_t line) {
  std::vector<std::string> out;
  if (!obj.contains(key)) return out;
  const auto& arr = obj.at(key);
  if (!arr.is_array()) throw FormatError(line, std::string(key) + " must be an array");
  for (const auto& v : arr) {
    if (!v.is_string()) throw FormatError(line, std::string(key) + " entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

EventOntology EventOntology::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ontology file " + path.string());
  return parse(in);
}

EventOntology EventOntology::parse(std::istream& in) {
  EventOntology ontology;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    json obj;
    try {
      obj = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw FormatError(line_no, e.what());
    }
    if (!obj.is_object()) throw FormatError(line_no, "record must be a JSON object");
    if (!obj.contains("type") || !obj["type"].is_string())
      throw FormatError(line_no, "missing string key 'type'");
    if (!obj.contains("definition") || !obj["definition"].is_string())
      throw FormatError(line_no, "missing string key 'definition'");

    EventDefinition def;
    def.type_id = obj["type"].get<std::string>();
    def.definition_text = obj["definition"].get<std::string>();
    def.typical_triggers = string_list(obj, "typical_triggers", line_no);
    def.roles = string_list(obj, "roles", line_no);
    ontology.insert(std::move(def), line_no);
  }
  return ontology;
}

EventOntology EventOntology::from_definitions(std::vector<EventDefinition> defs) {
  EventOntology ontology;
  std::size_t i = 0;
  for (auto& d : defs) ontology.insert(std::move(d), ++i);
  return ontology;
}

void EventOntology::insert(EventDefinition def, std::size_t line) {
  if (def.type_id.empty()) throw FormatError(line, "empty event type");
  if (def.definition_text.empty()) throw FormatError(line, "empty definition for " + def.type_id);
  std::set<std::string> seen;
  for (const auto& r : def.roles)
    if (!seen.insert(r).second) throw FormatError(line, "duplicate role " + r + " in " + def.type_id);
  if (definitions_.count(def.type_id)) throw DuplicateType(def.type_id);
  auto key = def.type_id;
  definitions_.emplace(std::move(key), std::move(def));
}

const EventDefinition& EventOntology::lookup(std::string_view id) const {
  auto it = definitions_.find(id);
  if (it == definitions_.end()) throw UnknownEventType(std::string(id));
  return it->second;
}

bool EventOntology::contains(std::string_view id) const { return definitions_.find(id) != definitions_.end(); }

std::vector<EventTypeId> EventOntology::type_ids() const {
  std::vector<EventTypeId> out;
  out.reserve(definitions_.size());
  for (const auto& [k, _] : definitions_) out.push_back(k);
  return out;
}

}  // namespace dao
