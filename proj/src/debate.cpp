#include "dao/debate.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "dao/text.hpp"

namespace dao {

using json = nlohmann::json;

void DebateAgents::validate(bool need_summarizer_backend) const {
  if (debaters.size() < 2) throw ConfigError("a debate needs at least two debaters");
  for (const auto& d : debaters)
    if (!d.backend) throw ConfigError("debater " + d.name + " has no backend");
  if (!critic.backend) throw ConfigError("critic has no backend");
  if (!judge.backend) throw ConfigError("judge has no backend");
  if (need_summarizer_backend && !summarizer.backend) throw ConfigError("summarizer has no backend");
}

void SessionConfig::validate() const {
  if (max_rounds == 0) throw ConfigError("max_rounds must be positive");
  drag.validate();
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta must be in (0, 1]");
  if (!(ed_threshold >= 0.0) || !(eae_threshold >= 0.0)) throw ConfigError("thresholds must be non-negative");
}

std::string Transcript::to_jsonl(const std::string& sentence_id) const {
  std::string out;
  for (const auto& e : entries) {
    json obj = {{"sentence_id", sentence_id}, {"task", e.task},   {"round", e.round},
                {"stage", e.stage},             {"role", e.role}, {"prompt_digest", e.prompt.empty() ? "" : digest(e.prompt)},
                {"text", e.text}};
    out += obj.dump();
    out += '\n';
  }
  return out;
}

namespace {

std::string serialize(const std::vector<ChatMessage>& messages) {
  std::string out;
  for (const auto& m : messages) {
    if (!out.empty()) out += "\n\n";
    out += to_string(m.role);
    out += ": ";
    out += m.content;
  }
  return out;
}

std::string debater_label(const AgentBinding& a) { return "Debater " + a.name; }

}  // namespace

TaskDebate::TaskDebate(const SessionContext& ctx, const Sentence& sentence, const Vector& query, Task task,
                       std::optional<TriggerAnswer> bound_trigger, Transcript& transcript,
                       std::vector<RiskObservation>& risks)
    : ctx_(ctx),
      sentence_(sentence),
      query_(query),
      bound_(std::move(bound_trigger)),
      transcript_(transcript),
      risks_(risks) {
  ctx_.config.validate();
  ctx_.agents.validate(ctx_.config.llm_summarizer);
  if (!ctx_.resources.ontology || !ctx_.resources.index || !ctx_.resources.scorer)
    throw ConfigError("session resources are incomplete");
  state_.task = task;
  state_.max_rounds = ctx_.config.max_rounds;
  state_.radius = ctx_.config.drag.initial_radius;
  state_.threshold = {task == Task::ED ? ctx_.config.ed_threshold : ctx_.config.eae_threshold, 0};
  if (task == Task::EAE) {
    if (!bound_ || !bound_->has_event()) throw ConfigError("EAE debate needs an identified event");
    bound_def_ = &ctx_.resources.ontology->lookup(bound_->event_type());
  }
  debater_histories_.resize(ctx_.agents.debaters.size());
}

void TaskDebate::note(const std::string& stage, const std::string& role, const std::string& text) {
  transcript_.entries.push_back({std::string(to_string(state_.task)), state_.round, stage, role, "", text, false});
}

std::string TaskDebate::call(const AgentBinding& agent, std::vector<ChatMessage>& history, const std::string& stage,
                             const std::string& role) {
  const std::string prompt = serialize(history);
  std::string reply;
  try {
    reply = agent.backend->complete(history, agent.temperature);
  } catch (const BackendError& e) {
    note("error", role, e.what());
    throw;
  }
  transcript_.entries.push_back({std::string(to_string(state_.task)), state_.round, stage, role, prompt, reply, true});
  history.push_back({ChatRole::Assistant, reply.empty() ? std::string(" ") : reply});
  return reply;
}

Answer TaskDebate::abstention() const {
  if (state_.task == Task::ED) return TriggerAnswer::no_event();
  return ArgumentAnswer{bound_->event_type(), {}};
}

Answer TaskDebate::parse_reply(std::size_t debater, const std::string& reply) {
  const std::string role = "debater:" + ctx_.agents.debaters[debater].name;
  try {
    if (state_.task == Task::ED) {
      TriggerAnswer a = parse_debater_ed(reply);
      if (a.has_event() && ctx_.config.single_token_triggers && split_whitespace(a.trigger()).size() != 1) {
        note("warning", role, "trigger \"" + a.trigger() + "\" is not a single token; treated as abstention");
        return abstention();
      }
      return a;
    }
    std::vector<std::string> dropped;
    ArgumentAnswer a = canonicalize(parse_argument_table(reply, bound_->event_type()), bound_def_->roles, &dropped);
    for (const auto& r : dropped) note("warning", role, "role \"" + r + "\" is not defined for " + a.event_type);
    return a;
  } catch (const Error& e) {
    note("warning", role, std::string("unparseable reply treated as abstention: ") + e.what());
    return abstention();
  }
}

std::string TaskDebate::initial_prompt(std::size_t debater) const {
  const auto& def_roles = bound_def_ ? bound_def_->roles : std::vector<std::string>{};
  if (state_.task == Task::ED) {
    return render_prompt(PromptId::DebaterEd, {{"[SENT]", sentence_.text}, {"[ROLE]", ctx_.agents.debaters[debater].name}});
  }
  return render_prompt(PromptId::DebaterEae, {{"[SENT]", sentence_.text},
                                              {"{event type}", bound_->event_type()},
                                              {"{trigger}", bound_->trigger()},
                                              {"{role list}", join(def_roles, ", ")}});
}

std::string risk_input(Task task, const Sentence& sentence, const TriggerAnswer* bound,
                       const EventDefinition* definition) {
  if (task == Task::ED) return render_prompt(PromptId::DebaterEd, {{"[SENT]", sentence.text}, {"[ROLE]", "Answer"}});
  if (!bound || !definition) throw ConfigError("argument risk needs an identified event");
  return render_prompt(PromptId::DebaterEae, {{"[SENT]", sentence.text},
                                              {"{event type}", bound->event_type()},
                                              {"{trigger}", bound->trigger()},
                                              {"{role list}", join(definition->roles, ", ")}});
}

std::string TaskDebate::scoring_input() const {
  return risk_input(state_.task, sentence_, bound_ ? &*bound_ : nullptr, bound_def_);
}

std::string render_reference_packet(const RetrievalResult& r, Task task, const EventTypeId& bound_type) {
  std::string out;
  if (!r.definitions.empty()) {
    out += "Event definitions:";
    for (const auto& d : r.definitions) {
      out += "\n" + d.type_id + ": " + d.definition_text;
      if (!d.typical_triggers.empty()) out += " Typical triggers: " + join(d.typical_triggers, ", ") + ".";
    }
  }
  if (!r.examples.empty()) {
    if (!out.empty()) out += "\n";
    out += "Examples:";
    for (const auto& ex : r.examples) {
      out += "\nExample: \"" + ex.sentence.text + "\" Answer: ";
      if (task == Task::ED) {
        if (ex.annotation.events.empty()) {
          out += "[]";
        } else {
          std::vector<std::string> parts;
          for (const auto& ev : ex.annotation.events) parts.push_back(render_answer(TriggerAnswer(ev.event_type, ev.trigger)));
          out += join(parts, ", ");
        }
      } else {
        ArgumentAnswer table{bound_type, {}};
        for (const auto& ev : ex.annotation.events) {
          if (ev.event_type != bound_type) continue;
          for (const auto& a : ev.arguments) table.rows.push_back({a.role, a.content});
        }
        out += "\n" + render_answer(table);
      }
    }
  }
  return out;
}

std::string TaskDebate::render_packet(const RetrievalResult& r) const {
  return render_reference_packet(r, state_.task, bound_ ? bound_->event_type() : EventTypeId{});
}

std::string TaskDebate::scrub(std::string text) const {
  for (const auto& s : retrieval_strings_) {
    if (s.empty()) continue;
    for (auto pos = text.find(s); pos != std::string::npos; pos = text.find(s, pos)) {
      text.replace(pos, s.size(), "[reference omitted]");
      pos += 19;
    }
  }
  return text;
}

bool TaskDebate::gate(std::size_t debater, const Answer& answer, const std::string& packet, const std::string& stage,
                      std::optional<double>* risk_out) {
  const auto& name = ctx_.agents.debaters[debater].name;
  if (is_abstention(answer)) {
    note("gate", "adacp", "Debater " + name + ": abstention exempt from calibration");
    return true;
  }
  const std::string rendered = render_answer(answer);
  const double risk = risk_score(*ctx_.resources.scorer, scoring_input(), packet, rendered);
  const bool ok = !ctx_.config.use_adacp || accept(risk, state_.threshold);
  risks_.push_back({state_.task, state_.round, name, stage, rendered, risk, state_.threshold.value, ok});
  if (risk_out) *risk_out = risk;
  char buf[96];
  std::snprintf(buf, sizeof buf, "risk=%.6g threshold=%.6g", risk, state_.threshold.value);
  note("gate", "adacp", "Debater " + name + ": " + rendered + " " + buf + (ok ? " accepted" : " rejected"));
  return ok;
}

JudgeVerdict TaskDebate::run_round() {
  if (state_.round >= state_.max_rounds) throw ConfigError("debate already reached its round cap");
  const auto& agents = ctx_.agents;
  const std::size_t n = agents.debaters.size();

  // (1) opinions
  if (state_.round == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      auto& h = debater_histories_[i];
      if (state_.task == Task::ED) {
        h.push_back({ChatRole::System, "The list of event types: " + join(ctx_.resources.ontology->type_ids(), ", ") + "."});
      }
      h.push_back({ChatRole::User, initial_prompt(i)});
      const std::string reply = call(agents.debaters[i], h, "opinion", "debater:" + agents.debaters[i].name);
      state_.live_opinions[i] = parse_reply(i, reply);
    }
  }

  // (2) retrieval
  std::vector<TriggerAnswer> typed;
  if (state_.task == Task::ED) {
    for (const auto& [i, a] : state_.live_opinions) typed.push_back(std::get<TriggerAnswer>(a));
  } else {
    typed.push_back(*bound_);
  }
  RetrievalRequest req;
  req.query = &query_;
  req.radius = state_.radius;
  req.exclude_id = sentence_.id;
  req.exclude_text = sentence_.text;
  req.diverse = ctx_.config.use_drag;
  if (state_.task == Task::EAE) req.require_type = bound_->event_type();
  if (ctx_.config.freeze_topk && have_frozen_) req.frozen_topk = &frozen_topk_;
  std::vector<Candidate> topk;
  const RetrievalResult retrieved =
      gather_event_info(typed, *ctx_.resources.ontology, *ctx_.resources.index, req, ctx_.config.drag, &topk);
  if (ctx_.config.freeze_topk && !have_frozen_) {
    frozen_topk_ = std::move(topk);
    have_frozen_ = true;
  }
  ++state_.retrieval_calls;
  for (const auto& t : retrieved.unknown_types) note("warning", "drag", "unknown event type " + t);
  for (const auto& d : retrieved.definitions) retrieval_strings_.push_back(d.definition_text);
  for (const auto& e : retrieved.examples) retrieval_strings_.push_back(e.sentence.text);
  const std::string packet = render_packet(retrieved);
  {
    char buf[96];
    std::snprintf(buf, sizeof buf, "radius=%.6g clusters=%zu examples=%zu\n", retrieved.radius_used,
                  retrieved.cluster_count, retrieved.examples.size());
    note("retrieval", "drag", buf + packet);
  }

  // (3) gate the opinions
  state_.gated_out.clear();
  for (const auto& [i, a] : state_.live_opinions) {
    if (!gate(i, a, packet, "opinion", nullptr)) state_.gated_out.insert(i);
  }

  auto accepted_lines = [&](const std::set<std::size_t>& excluded, std::optional<std::size_t> skip) {
    std::string lines;
    for (const auto& [i, a] : state_.live_opinions) {
      if (excluded.count(i) || (skip && *skip == i)) continue;
      if (!lines.empty()) lines += "\n";
      lines += debater_label(agents.debaters[i]) + ": " + render_answer(a);
    }
    return lines;
  };

  // (4) cross-examination: the critic reviews the surviving opinions first
  std::string critic_msg;
  if (state_.task == Task::ED && state_.round == 0)
    critic_msg = render_prompt(PromptId::CriticEd, {{"[SENT]", sentence_.text}}) + "\n\n";
  critic_msg += packet;
  const std::string survivors = accepted_lines(state_.gated_out, std::nullopt);
  critic_msg += "\n\n" + (survivors.empty() ? std::string("No debater answer passed calibration.") : survivors);
  critic_msg += "\n\n";
  critic_msg += state_.task == Task::ED ? render_prompt(PromptId::CriticCrossExaminationEd, {})
                                        : render_prompt(PromptId::CriticEae, {{"[SENT]", sentence_.text}});
  critic_history_.push_back({ChatRole::User, critic_msg});
  const std::string critic_reply = call(agents.critic, critic_history_, "critic", "critic");

  for (std::size_t i = 0; i < n; ++i) {
    std::string msg = packet;
    const std::string peers = accepted_lines(state_.gated_out, i);
    if (!peers.empty()) msg += "\n\nAnswers from the other debaters:\n" + peers;
    msg += "\n\nCritic: " + critic_reply;
    if (state_.gated_out.count(i)) {
      msg += "\n\nYour answer " + render_answer(state_.live_opinions[i]) +
             " failed calibration against the reference information. Revise your answer.";
    }
    msg += "\n\n" + render_prompt(PromptId::DebaterCrossExamination, {});
    debater_histories_[i].push_back({ChatRole::User, msg});
    const std::string reply = call(agents.debaters[i], debater_histories_[i], "cross_examination",
                                   "debater:" + agents.debaters[i].name);
    state_.live_opinions[i] = parse_reply(i, reply);
  }

  // re-gate the final statements of this round; rejected ones never reach the judge
  std::set<std::size_t> rejected;
  last_risks_.clear();
  for (const auto& [i, a] : state_.live_opinions) {
    std::optional<double> risk;
    if (!gate(i, a, packet, "cross_examination", &risk)) {
      rejected.insert(i);
    } else if (risk) {
      last_risks_[i] = *risk;
    }
  }
  state_.gated_out = rejected;

  // (5) judgement
  JudgeVerdict verdict;
  const std::string statements = accepted_lines(rejected, std::nullopt);
  if (statements.empty()) {
    note("judgement", "engine", "all answers rejected by calibration; judge not consulted");
    verdict.kind = JudgeVerdict::Kind::Continue;
  } else {
    std::string msg = statements + "\nCritic: " + scrub(critic_reply) + "\n\n" +
                      render_prompt(state_.task == Task::ED ? PromptId::JudgeEd : PromptId::JudgeEae, {});
    std::vector<ChatMessage> judge_history{{ChatRole::User, msg}};
    const std::string reply = call(agents.judge, judge_history, "judgement", "judge");
    verdict = parse_judge(reply, state_.task, bound_ ? bound_->event_type() : EventTypeId{});
    if (!verdict.warning.empty()) note("warning", "judge", verdict.warning);
  }

  ++state_.round;
  if (ctx_.config.recluster) state_.radius = decay_radius(state_.radius, ctx_.config.drag.radius_decay);
  state_.threshold = decay_threshold(state_.threshold, ctx_.config.beta);
  if (verdict.kind != JudgeVerdict::Kind::Continue) verdict_ = verdict;
  return verdict;
}

TaskOutcome TaskDebate::adjudicate() {
  TaskOutcome out;
  out.rounds = state_.round;
  out.forced = true;
  const std::pair<const std::size_t, double>* best = nullptr;
  for (const auto& entry : last_risks_)
    if (!best || entry.second < best->second) best = &entry;
  if (!best) {
    note("summary", "engine", "round cap reached; no answer passed calibration");
    out.kind = JudgeVerdict::Kind::NoEvent;
    if (state_.task == Task::EAE) out.arguments = std::get<ArgumentAnswer>(abstention());
    return out;
  }
  const Answer& a = state_.live_opinions.at(best->first);
  note("summary", "engine", "round cap reached; adopting lowest-risk answer " + render_answer(a));
  out.kind = JudgeVerdict::Kind::Agreement;
  if (state_.task == Task::ED) {
    out.triggers.push_back(std::get<TriggerAnswer>(a));
  } else {
    out.arguments = std::get<ArgumentAnswer>(a);
  }
  return out;
}

TaskOutcome TaskDebate::run() {
  while (!verdict_ && state_.round < state_.max_rounds) run_round();
  if (!verdict_) return adjudicate();

  TaskOutcome out;
  out.rounds = state_.round;
  out.kind = verdict_->kind;
  if (out.kind == JudgeVerdict::Kind::Agreement) {
    if (state_.task == Task::ED) {
      for (const auto& t : verdict_->triggers) {
        if (!ctx_.resources.ontology->contains(t.event_type())) {
          note("warning", "judge", "agreed event type " + t.event_type() + " is not in the ontology; dropped");
          continue;
        }
        if (std::find(out.triggers.begin(), out.triggers.end(), t) == out.triggers.end()) out.triggers.push_back(t);
      }
      if (out.triggers.empty()) out.kind = JudgeVerdict::Kind::NoEvent;
    } else {
      std::vector<std::string> dropped;
      out.arguments = canonicalize(*verdict_->arguments, bound_def_->roles, &dropped);
      for (const auto& r : dropped) note("warning", "judge", "role \"" + r + "\" is not defined; dropped");
    }
  } else if (state_.task == Task::EAE) {
    out.arguments = std::get<ArgumentAnswer>(abstention());
  }
  return out;
}

namespace {

std::vector<EventMention> merge_records(const std::vector<TriggerAnswer>& triggers,
                                        const std::vector<TaskOutcome>& eae) {
  std::vector<EventMention> events;
  for (std::size_t i = 0; i < triggers.size(); ++i) {
    EventMention m{triggers[i].event_type(), triggers[i].trigger(), {}};
    if (i < eae.size()) {
      for (const auto& row : eae[i].arguments.rows)
        if (row.content) m.arguments.push_back({row.role, *row.content});
    }
    events.push_back(std::move(m));
  }
  return events;
}

}  // namespace

SessionResult run_session(const Sentence& sentence, const SessionContext& ctx,
                          const std::vector<TriggerAnswer>* given_triggers) {
  SessionResult result;
  result.sentence_id = sentence.id;
  try {
    if (!ctx.resources.embedder) throw ConfigError("session has no embedder");
    const Vector query = normalized(ctx.resources.embedder->embed(sentence.text));

    std::vector<TriggerAnswer> triggers;
    if (given_triggers) {
      for (const auto& t : *given_triggers)
        if (t.has_event()) triggers.push_back(t);
      result.ed.kind = triggers.empty() ? JudgeVerdict::Kind::NoEvent : JudgeVerdict::Kind::Agreement;
      result.ed.triggers = triggers;
    } else {
      TaskDebate ed(ctx, sentence, query, Task::ED, std::nullopt, result.transcript, result.risks);
      result.ed = ed.run();
      if (result.ed.kind == JudgeVerdict::Kind::Agreement) triggers = result.ed.triggers;
    }
    if (triggers.empty()) {
      result.transcript.entries.push_back({"ed", result.ed.rounds, "summary", "summarizer", "", "no event; argument extraction skipped", false});
      return result;
    }

    for (const auto& t : triggers) {
      TaskDebate eae(ctx, sentence, query, Task::EAE, t, result.transcript, result.risks);
      result.eae.push_back(eae.run());
    }

    result.events = merge_records(triggers, result.eae);
    if (ctx.config.llm_summarizer) {
      std::string agreed;
      for (std::size_t i = 0; i < triggers.size(); ++i) {
        agreed += "\nDetection: " + render_answer(triggers[i]) + "\nArguments:\n" + render_answer(result.eae[i].arguments);
      }
      std::vector<ChatMessage> msgs{
          {ChatRole::User, render_prompt(PromptId::Summarizer, {{"[SENT]", sentence.text}, {"[AGREED]", agreed}})}};
      const std::string prompt = serialize(msgs);
      const std::string reply = ctx.agents.summarizer.backend->complete(msgs, ctx.agents.summarizer.temperature);
      result.transcript.entries.push_back({"eae", 0, "summary", "summarizer", prompt, reply, true});
      try {
        std::vector<EventMention> merged;
        for (const auto& row : parse_table(reply, {"event type", "event trigger", "argument role", "argument content"})) {
          if (!row[0] || !row[1]) continue;
          auto it = std::find_if(merged.begin(), merged.end(),
                                 [&](const EventMention& m) { return m.event_type == *row[0] && m.trigger == *row[1]; });
          if (it == merged.end()) {
            merged.push_back({*row[0], *row[1], {}});
            it = std::prev(merged.end());
          }
          if (row[2] && row[3]) it->arguments.push_back({*row[2], *row[3]});
        }
        result.events = std::move(merged);
      } catch (const Error& e) {
        result.transcript.entries.push_back({"eae", 0, "warning", "summarizer", "",
                                             std::string("summary did not parse, using merged tables: ") + e.what(), false});
      }
    } else {
      result.transcript.entries.push_back({"eae", 0, "summary", "summarizer", "", "merged agreed tables", false});
    }
  } catch (const BackendError& e) {
    throw SessionAborted(e.what(), std::move(result.transcript));
  }
  return result;
}

std::vector<double> calibration_risks(const std::vector<ReferenceEntry>& calib, Task task, const SessionContext& ctx) {
  const auto& res = ctx.resources;
  if (!res.ontology || !res.index || !res.embedder || !res.scorer) throw ConfigError("session resources are incomplete");
  ctx.config.drag.validate();
  std::vector<double> risks;
  for (const auto& entry : calib) {
    if (entry.annotation.events.empty()) continue;
    const Vector query = normalized(res.embedder->embed(entry.sentence.text));
    for (const auto& ev : entry.annotation.events) {
      const TriggerAnswer gold(ev.event_type, ev.trigger);
      const EventDefinition& def = res.ontology->lookup(ev.event_type);
      RetrievalRequest req;
      req.query = &query;
      req.radius = ctx.config.drag.initial_radius;
      req.exclude_id = entry.sentence.id;
      req.exclude_text = entry.sentence.text;
      req.diverse = ctx.config.use_drag;
      if (task == Task::EAE) req.require_type = ev.event_type;
      const RetrievalResult r = gather_event_info({gold}, *res.ontology, *res.index, req, ctx.config.drag);
      const std::string packet = render_reference_packet(r, task, ev.event_type);
      std::string answer;
      if (task == Task::ED) {
        answer = render_answer(gold);
      } else {
        ArgumentAnswer table{ev.event_type, {}};
        for (const auto& a : ev.arguments) table.rows.push_back({a.role, a.content});
        answer = render_answer(canonicalize(std::move(table), def.roles));
      }
      risks.push_back(risk_score(*res.scorer, risk_input(task, entry.sentence, &gold, &def), packet, answer));
    }
  }
  return risks;
}

}  // namespace dao
