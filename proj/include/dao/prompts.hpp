#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dao/answers.hpp"

namespace dao {

enum class PromptId {
  DebaterGeneric,
  DebaterEd,
  DebaterEae,
  DebaterCrossExamination,
  CriticCrossExaminationEd,
  CriticEd,
  CriticEae,
  JudgeEdBrief,
  JudgeEd,
  JudgeEae,
  Summarizer,
};

struct PromptTemplate {
  PromptId id;
  std::string_view name;
  std::string_view text;
  std::vector<std::string_view> placeholders;
};

const PromptTemplate& prompt_template(PromptId id);
std::optional<PromptId> prompt_id(std::string_view name);
const std::vector<PromptTemplate>& prompt_templates();

using Bindings = std::map<std::string, std::string, std::less<>>;

/// Replaces every declared placeholder of the template with its binding in a
/// single left-to-right pass; substituted text is never rescanned.
/// Throws MissingBinding.
std::string render_prompt(PromptId id, const Bindings& bindings);

// Table headers the agents are told to use.
const std::vector<std::string>& ed_table_header();
const std::vector<std::string>& eae_table_header();

using TableRow = std::vector<std::optional<std::string>>;

/// Body rows of the first pipe table whose header matches `expected_header`
/// (case-insensitive, trimmed). "None" cells become nullopt.
/// Throws NoTableFound, HeaderMismatch.
std::vector<TableRow> parse_table(std::string_view text, const std::vector<std::string>& expected_header);

/// Last well-formed `["type", "trigger"]` or `[]` in the text.
/// Throws ParseFailure.
TriggerAnswer parse_debater_ed(std::string_view text);

/// Role table for `event_type`; rows naming other event types are ignored.
/// Throws NoTableFound, HeaderMismatch.
ArgumentAnswer parse_argument_table(std::string_view text, const EventTypeId& event_type);

enum class Task { ED, EAE };
std::string_view to_string(Task task);

struct JudgeVerdict {
  enum class Kind { Agreement, Continue, NoEvent };
  Kind kind = Kind::Continue;
  std::vector<TriggerAnswer> triggers;     // ED agreement rows
  std::optional<ArgumentAnswer> arguments;  // EAE agreement table
  std::string warning;                      // set when the reply did not parse
};

/// Sentinels take precedence over tables; unparseable replies become
/// Continue with a warning. `eae_type` names the event under EAE debate.
JudgeVerdict parse_judge(std::string_view text, Task task, const EventTypeId& eae_type = {});

}  // namespace dao
