#include "dao/prompts.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "dao/errors.hpp"
#include "dao/text.hpp"

namespace dao {

namespace {

const std::vector<PromptTemplate>& registry() {
  static const std::vector<PromptTemplate> templates = {
      {PromptId::DebaterGeneric, "debater_generic",
       "Given sentence: **[SENT]** Answer the following question: [TASK_INSTRUCTION]",
       {"[SENT]", "[TASK_INSTRUCTION]"}},
      {PromptId::DebaterEd, "debater_ed",
       "Consider the sentence: \"[SENT]\". Carefully read the event definition, event type, and trigger tokens "
       "in the given examples. Examine whether it mentions any possible event from the provided list. If no "
       "events are mentioned, respond with \"[]\". If an event are mentioned, determine the event type from the "
       "list. Then identify the event trigger, which is **one word** closely associated with the occurrence of "
       "a pre-defined event type. Respond in the format **[ROLE]: [\"event type\", \"trigger token\"]**, or "
       "**[ROLE]: []** if no event trigger is identified.",
       {"[SENT]", "[ROLE]"}},
      {PromptId::DebaterEae, "debater_eae",
       "Give a sentence: **[SENT]**, it contains an event mention. The event type is **{event type}**, and the "
       "event is triggered by the token **{trigger}**. Now let's focus on the Argument Extraction task.\n"
       "The list of argument roles corresponding to the event type **{event type}** is **{role list}**.\n"
       "Event arguments are entities that directly relate to the event mention. Please extract the event "
       "arguments of the above sentence according to the argument roles, and return them in the form of a "
       "table.\n"
       "The header of the table is | event type | argument role | argument content |.\n"
       "If no entity in the sentence plays the corresponding argument role, its argument content returns "
       "**None**.",
       {"[SENT]", "{event type}", "{trigger}", "{role list}"}},
      {PromptId::DebaterCrossExamination, "debater_ce",
       "Carefully review the information in the event definitions and retrieved examples. Defend your answer, "
       "or update your answer.",
       {}},
      {PromptId::CriticCrossExaminationEd, "critic_ce_ed",
       "After reviewing the event definition and examples, assess whether the identified event type and event "
       "trigger align with the event occurrence in the sentence. Consider whether there is any other event type "
       "that better matches the event mentioned in the sentence. Respond succinctly with your judgment.",
       {}},
      {PromptId::CriticEd, "critic_ed",
       "Review the given sentence: \"[SENT]\". Thoroughly evaluate the event definitions, typical triggers, "
       "listed examples, and responses from Debater A and Debater B. For debaters' answers, rigorously examine: "
       "Is there an event mention? Does the identified event trigger indeed express an occurrence of the "
       "identified event type, based on the event definition? Does the identified trigger align with typical "
       "triggers and the examples provided? Considering the valid examples, is there a more suitable trigger "
       "token to express the event? Provide concise assessments.",
       {"[SENT]"}},
      {PromptId::CriticEae, "critic_eae",
       "Remember the given sentence: **[SENT]**. Now, please judge critically and identify possible errors. Do "
       "the identified argument roles correctly match the entity mentions? Are there extra or missing argument "
       "roles, or misclassified argument roles? Please reply concisely.",
       {"[SENT]"}},
      {PromptId::JudgeEdBrief, "judge_ed_brief",
       "Do debaters and the critic reach an agreement on event type and trigger extraction? If so, reply in a "
       "table. The header of the table is | event type | event trigger |. If disagree, require reply: **No "
       "agreement, debate continues**. If both debaters believe there is no event mention involved, reply **No "
       "event**.",
       {}},
      {PromptId::JudgeEd, "judge_ed",
       "If all agents state there is no event mention involved, reply **No event**. If all agents have agree "
       "with the same event type and event trigger answers, respond in a table. The header of the table is | "
       "event type | event trigger |. If there is any disagreement in responses, respond with **No agreement, "
       "debate continues** to encourage further discussion to resolve the differences.",
       {}},
      {PromptId::JudgeEae, "judge_eae",
       "If debaters agree with each other, reply the event arguments in the form of a table. The header of the "
       "table is | event type | argument role | argument content |. If no argument role has a corresponding "
       "argument content, the argument content returns **None**.\n"
       "If debaters disagree on any argument content, require reply: **Disagreement observed, debate "
       "continues**.\n"
       "Make sure reply only a table or **Disagreement observed, debate continues**",
       {}},
      {PromptId::Summarizer, "summarizer",
       "Collect the commonly agreed solutions below into the final event record for the sentence: "
       "\"[SENT]\".\n[AGREED]\nReply only with a table. The header of the table is | event type | event trigger "
       "| argument role | argument content |. Use one row per argument; if an event has no arguments, use "
       "**None** for both argument cells.",
       {"[SENT]", "[AGREED]"}},
  };
  return templates;
}

}  // namespace

const std::vector<PromptTemplate>& prompt_templates() { return registry(); }

const PromptTemplate& prompt_template(PromptId id) {
  for (const auto& t : registry())
    if (t.id == id) return t;
  throw ConfigError("unknown prompt template");
}

std::optional<PromptId> prompt_id(std::string_view name) {
  for (const auto& t : registry())
    if (t.name == name) return t.id;
  return std::nullopt;
}

std::string render_prompt(PromptId id, const Bindings& bindings) {
  const auto& tpl = prompt_template(id);
  for (auto ph : tpl.placeholders)
    if (bindings.find(ph) == bindings.end()) throw MissingBinding(std::string(ph));

  std::string out;
  const std::string_view text = tpl.text;
  std::size_t i = 0;
  while (i < text.size()) {
    bool replaced = false;
    for (auto ph : tpl.placeholders) {
      if (text.compare(i, ph.size(), ph) == 0) {
        out += bindings.find(ph)->second;
        i += ph.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) out += text[i++];
  }
  return out;
}

const std::vector<std::string>& ed_table_header() {
  static const std::vector<std::string> h = {"event type", "event trigger"};
  return h;
}

const std::vector<std::string>& eae_table_header() {
  static const std::vector<std::string> h = {"event type", "argument role", "argument content"};
  return h;
}

std::string_view to_string(Task task) { return task == Task::ED ? "ed" : "eae"; }

namespace {

std::string strip_markup(std::string_view cell) {
  std::string s = trim(cell);
  auto strip_pair = [&](std::string_view mark) {
    while (s.size() >= 2 * mark.size() && s.compare(0, mark.size(), mark) == 0 &&
           s.compare(s.size() - mark.size(), mark.size(), mark) == 0) {
      s = trim(std::string_view(s).substr(mark.size(), s.size() - 2 * mark.size()));
    }
  };
  strip_pair("**");
  strip_pair("`");
  strip_pair("\"");
  return s;
}

std::vector<std::string> split_cells(std::string_view line) {
  std::string row = trim(line);
  if (!row.empty() && row.front() == '|') row.erase(0, 1);
  if (!row.empty() && row.back() == '|') row.pop_back();
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= row.size(); ++i) {
    if (i == row.size() || row[i] == '|') {
      cells.push_back(strip_markup(std::string_view(row).substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

bool is_separator(const std::vector<std::string>& cells) {
  return std::all_of(cells.begin(), cells.end(), [](const std::string& c) {
    return !c.empty() && std::all_of(c.begin(), c.end(), [](char ch) { return ch == '-' || ch == ':' || ch == ' '; });
  });
}

}  // namespace

std::vector<TableRow> parse_table(std::string_view text, const std::vector<std::string>& expected_header) {
  // Group consecutive pipe-led lines into tables.
  std::vector<std::vector<std::string>> tables;
  bool in_table = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string line = trim(text.substr(pos, nl - pos));
    if (!line.empty() && line.front() == '|') {
      if (!in_table) tables.emplace_back();
      tables.back().push_back(line);
      in_table = true;
    } else {
      in_table = false;
    }
    pos = nl + 1;
  }
  if (tables.empty()) throw NoTableFound();

  std::string first_header;
  for (const auto& table : tables) {
    const auto header = split_cells(table.front());
    bool match = header.size() == expected_header.size();
    for (std::size_t i = 0; match && i < header.size(); ++i) match = to_lower(header[i]) == to_lower(expected_header[i]);
    if (!match) {
      if (first_header.empty()) first_header = table.front();
      continue;
    }
    std::vector<TableRow> rows;
    for (std::size_t r = 1; r < table.size(); ++r) {
      const auto cells = split_cells(table[r]);
      if (is_separator(cells) || cells.size() != expected_header.size()) continue;
      TableRow row;
      for (const auto& c : cells) {
        if (c == "None" || c == "none" || c.empty()) {
          row.emplace_back(std::nullopt);
        } else {
          row.emplace_back(c);
        }
      }
      rows.push_back(std::move(row));
    }
    return rows;
  }
  throw HeaderMismatch(first_header);
}

namespace {

// End of the bracket group opened at `open`, honouring quoted strings.
std::size_t matching_bracket(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_str = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_str) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_str = false;
      }
      continue;
    }
    if (c == '"') {
      in_str = true;
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      if (--depth == 0) return i;
    }
  }
  return std::string_view::npos;
}

std::string normalize_quotes(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    // U+201C / U+201D curly double quotes
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        (static_cast<unsigned char>(text[i + 2]) == 0x9C || static_cast<unsigned char>(text[i + 2]) == 0x9D)) {
      out += '"';
      i += 2;
      continue;
    }
    out += text[i];
  }
  return out;
}

}  // namespace

TriggerAnswer parse_debater_ed(std::string_view raw) {
  const std::string text = normalize_quotes(raw);
  std::optional<TriggerAnswer> best;
  std::size_t best_end = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '[') continue;
    const std::size_t close = matching_bracket(text, i);
    if (close == std::string_view::npos) continue;
    nlohmann::json arr;
    try {
      arr = nlohmann::json::parse(text.substr(i, close - i + 1));
    } catch (const nlohmann::json::parse_error&) {
      continue;
    }
    std::optional<TriggerAnswer> candidate;
    if (arr.is_array() && arr.empty()) {
      candidate = TriggerAnswer::no_event();
    } else if (arr.is_array() && arr.size() == 2 && arr[0].is_string() && arr[1].is_string()) {
      const std::string type = trim(arr[0].get<std::string>());
      const std::string trigger = trim(arr[1].get<std::string>());
      if (!type.empty() && !trigger.empty()) candidate = TriggerAnswer(type, trigger);
    }
    if (candidate && (!best || close >= best_end)) {
      best = candidate;
      best_end = close;
    }
  }
  if (!best) throw ParseFailure(digest(raw));
  return *best;
}

ArgumentAnswer parse_argument_table(std::string_view text, const EventTypeId& event_type) {
  ArgumentAnswer answer{event_type, {}};
  for (const auto& row : parse_table(text, eae_table_header())) {
    if (!row[0] || !row[1]) continue;
    if (*row[0] != event_type) continue;
    answer.rows.push_back({*row[1], row[2]});
  }
  return answer;
}

JudgeVerdict parse_judge(std::string_view text, Task task, const EventTypeId& eae_type) {
  JudgeVerdict v;
  if (contains_ci(text, "no agreement") || contains_ci(text, "disagreement observed")) {
    v.kind = JudgeVerdict::Kind::Continue;
    return v;
  }
  if (contains_ci(text, "no event")) {
    v.kind = JudgeVerdict::Kind::NoEvent;
    return v;
  }
  try {
    if (task == Task::ED) {
      for (const auto& row : parse_table(text, ed_table_header())) {
        if (row[0] && row[1]) v.triggers.emplace_back(*row[0], *row[1]);
      }
      v.kind = v.triggers.empty() ? JudgeVerdict::Kind::NoEvent : JudgeVerdict::Kind::Agreement;
    } else {
      v.arguments = parse_argument_table(text, eae_type);
      v.kind = JudgeVerdict::Kind::Agreement;
    }
  } catch (const Error& e) {
    v = JudgeVerdict{};
    v.kind = JudgeVerdict::Kind::Continue;
    v.warning = std::string("judge reply did not parse (") + e.what() + "), treating as continue";
  }
  return v;
}

}  // namespace dao
