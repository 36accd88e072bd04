#include "dao/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dao/errors.hpp"
#include "dao/text.hpp"

namespace dao {

using json = nlohmann::json;

Sentence Sentence::make(std::string id, std::string_view raw_text) {
  Sentence s;
  s.id = std::move(id);
  s.tokens = split_whitespace(raw_text);
  s.text = join(s.tokens, " ");
  return s;
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Calib: return "calib";
    case Split::Test: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "calib") return Split::Calib;
  if (name == "test") return Split::Test;
  return std::nullopt;
}

bool ReferenceEntry::has_event_type(std::string_view type) const {
  return std::any_of(annotation.events.begin(), annotation.events.end(),
                     [&](const EventMention& e) { return e.event_type == type; });
}

namespace {

std::string required_string(const json& obj, const char* key, std::size_t line) {
  if (!obj.contains(key) || !obj.at(key).is_string())
    throw FormatError(line, std::string("missing string key '") + key + "'");
  return obj.at(key).get<std::string>();
}

// Spans are compared against whitespace-normalized text, so normalize them too.
std::string normalize_span(const std::string& s) { return join(split_whitespace(s), " "); }

}  // namespace

std::vector<ReferenceEntry> parse_corpus(std::istream& in, SpanCheck check) {
  std::vector<ReferenceEntry> out;
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

    ReferenceEntry entry;
    const std::string text = required_string(obj, "text", line_no);
    entry.sentence = Sentence::make(required_string(obj, "id", line_no), text);
    if (entry.sentence.text.empty()) throw FormatError(line_no, "empty sentence text");
    entry.annotation.sentence_id = entry.sentence.id;

    if (obj.contains("split")) {
      auto split = parse_split(required_string(obj, "split", line_no));
      if (!split) throw FormatError(line_no, "unknown split");
      entry.split = *split;
    }

    if (obj.contains("events")) {
      if (!obj["events"].is_array()) throw FormatError(line_no, "'events' must be an array");
      for (const auto& ev : obj["events"]) {
        if (!ev.is_object()) throw FormatError(line_no, "event must be an object");
        EventMention mention;
        mention.event_type = required_string(ev, "type", line_no);
        mention.trigger = normalize_span(required_string(ev, "trigger", line_no));
        if (mention.trigger.empty() ||
            (check == SpanCheck::Strict && entry.sentence.text.find(mention.trigger) == std::string::npos))
          throw SpanNotInSentence(entry.sentence.id, mention.trigger);
        if (ev.contains("arguments")) {
          if (!ev["arguments"].is_array()) throw FormatError(line_no, "'arguments' must be an array");
          for (const auto& arg : ev["arguments"]) {
            if (!arg.is_object()) throw FormatError(line_no, "argument must be an object");
            ArgumentSpan span{required_string(arg, "role", line_no),
                              normalize_span(required_string(arg, "content", line_no))};
            if (span.content.empty() ||
                (check == SpanCheck::Strict && entry.sentence.text.find(span.content) == std::string::npos))
              throw SpanNotInSentence(entry.sentence.id, span.content);
            mention.arguments.push_back(std::move(span));
          }
        }
        entry.annotation.events.push_back(std::move(mention));
      }
    }
    entry.polarity = entry.annotation.events.empty() ? Polarity::Negative : Polarity::Positive;
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<ReferenceEntry> load_corpus(const std::filesystem::path& path, SpanCheck check) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  return parse_corpus(in, check);
}

std::vector<ReferenceEntry> filter_split(const std::vector<ReferenceEntry>& entries,
                                         const std::vector<Split>& splits) {
  std::vector<ReferenceEntry> out;
  for (const auto& e : entries)
    if (std::find(splits.begin(), splits.end(), e.split) != splits.end()) out.push_back(e);
  return out;
}

std::string to_prediction_json(const Sentence& sentence, const std::vector<EventMention>& events) {
  json obj = json::object();
  obj["id"] = sentence.id;
  obj["text"] = sentence.text;
  json evs = json::array();
  for (const auto& e : events) {
    json args = json::array();
    for (const auto& a : e.arguments) args.push_back({{"role", a.role}, {"content", a.content}});
    evs.push_back({{"type", e.event_type}, {"trigger", e.trigger}, {"arguments", std::move(args)}});
  }
  obj["events"] = std::move(evs);
  return obj.dump();
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vector normalized(const Vector& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ZeroVector();
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / norm;
  return out;
}

double cosine_distance(const Vector& a, const Vector& b) {
  return std::clamp(1.0 - dot(a, b), 0.0, 2.0);
}

EmbeddedIndex build_index(std::vector<ReferenceEntry> entries, EmbeddingBackend& embedder) {
  EmbeddedIndex index;
  index.dimension = embedder.dimension();
  index.vectors.reserve(entries.size());
  for (const auto& e : entries) {
    Vector v = embedder.embed(e.sentence.text);
    if (v.size() != index.dimension) throw DimensionMismatch(index.dimension, v.size());
    index.vectors.push_back(normalized(v));
  }
  index.entries = std::move(entries);
  return index;
}

}  // namespace dao
