#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "dao/backends.hpp"
#include "dao/ontology.hpp"

namespace dao {

struct Sentence {
  std::string id;
  std::string text;                 // whitespace-normalized
  std::vector<std::string> tokens;  // joined by single spaces == text

  static Sentence make(std::string id, std::string_view raw_text);
};

struct ArgumentSpan {
  std::string role;
  std::string content;
  bool operator==(const ArgumentSpan&) const = default;
};

struct EventMention {
  EventTypeId event_type;
  std::string trigger;
  std::vector<ArgumentSpan> arguments;
  bool operator==(const EventMention&) const = default;
};

struct GoldAnnotation {
  std::string sentence_id;
  std::vector<EventMention> events;  // empty for negative examples
};

enum class Polarity { Positive, Negative };
enum class Split { Train, Calib, Test };

std::string_view to_string(Split split);
std::optional<Split> parse_split(std::string_view name);

struct ReferenceEntry {
  Sentence sentence;
  GoldAnnotation annotation;
  Polarity polarity = Polarity::Negative;  // derived: Positive iff events non-empty
  Split split = Split::Train;

  bool has_event_type(std::string_view type) const;
};

// Lenient is for model predictions, whose spans need not occur in the text.
enum class SpanCheck { Strict, Lenient };

/// Reads corpus JSON Lines. Polarity is derived from the annotation; `split`
/// defaults to train when absent. Throws IoError, FormatError, SpanNotInSentence.
std::vector<ReferenceEntry> load_corpus(const std::filesystem::path& path, SpanCheck check = SpanCheck::Strict);
std::vector<ReferenceEntry> parse_corpus(std::istream& in, SpanCheck check = SpanCheck::Strict);

std::vector<ReferenceEntry> filter_split(const std::vector<ReferenceEntry>& entries,
                                         const std::vector<Split>& splits);

/// Corpus-format record without `split` (the prediction variant).
std::string to_prediction_json(const Sentence& sentence, const std::vector<EventMention>& events);

using Vector = std::vector<double>;

/// Returns v / |v|. Throws ZeroVector.
Vector normalized(const Vector& v);
double dot(const Vector& a, const Vector& b);
/// 1 - u.v, clamped to [0, 2]. Inputs are assumed unit-norm.
double cosine_distance(const Vector& a, const Vector& b);

struct EmbeddedIndex {
  std::vector<ReferenceEntry> entries;
  std::vector<Vector> vectors;  // unit norm, one per entry
  std::size_t dimension = 0;

  std::size_t size() const noexcept { return entries.size(); }
};

/// Embeds each entry's sentence and L2-normalizes the result regardless of
/// what the backend returned. Throws BackendError, DimensionMismatch, ZeroVector.
EmbeddedIndex build_index(std::vector<ReferenceEntry> entries, EmbeddingBackend& embedder);

}  // namespace dao
