#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dao/adacp.hpp"
#include "dao/answers.hpp"
#include "dao/backends.hpp"
#include "dao/corpus.hpp"
#include "dao/drag.hpp"
#include "dao/errors.hpp"
#include "dao/ontology.hpp"
#include "dao/prompts.hpp"

namespace dao {

struct AgentBinding {
  std::string name;
  ChatBackend* backend = nullptr;
  double temperature = 0.0;
};

/// At least two debaters, one critic, one judge. The summarizer backend is
/// only consulted when SessionConfig::llm_summarizer is set.
struct DebateAgents {
  std::vector<AgentBinding> debaters;
  AgentBinding critic;
  AgentBinding judge;
  AgentBinding summarizer;

  void validate(bool need_summarizer_backend) const;
};

struct SessionConfig {
  std::size_t max_rounds = 3;
  DragConfig drag;
  double ed_threshold = 1.0;   // resolved q_0 for ED
  double eae_threshold = 3.0;  // resolved q_0 for EAE
  double beta = 0.5;
  bool use_drag = true;       // false: nearest-M examples, no clustering or quota
  bool recluster = true;      // false: radius stays at mu_0 every round
  bool use_adacp = true;      // false: every answer passes the gate
  bool freeze_topk = false;   // reuse the round-0 top-K in later rounds
  bool llm_summarizer = false;
  bool single_token_triggers = true;

  void validate() const;
};

struct SessionResources {
  const EventOntology* ontology = nullptr;
  const EmbeddedIndex* index = nullptr;
  EmbeddingBackend* embedder = nullptr;
  ScoringBackend* scorer = nullptr;
};

struct SessionContext {
  SessionResources resources;
  DebateAgents agents;
  SessionConfig config;
};

struct TranscriptEntry {
  std::string task;
  std::size_t round = 0;
  std::string stage;   // opinion, retrieval, gate, critic, cross_examination, judgement, summary, warning
  std::string role;    // debater:A, critic, judge, summarizer, drag, adacp, engine
  std::string prompt;  // serialized messages for backend calls, empty otherwise
  std::string text;
  bool backend_call = false;
};

struct Transcript {
  std::vector<TranscriptEntry> entries;

  /// One JSON object per entry: {sentence_id, task, round, stage, role, prompt_digest, text}.
  std::string to_jsonl(const std::string& sentence_id) const;
};

struct RiskObservation {
  Task task = Task::ED;
  std::size_t round = 0;
  std::string debater;
  std::string stage;  // "opinion" (before cross-examination) or "cross_examination"
  std::string answer;
  double risk = 0.0;
  double threshold = 0.0;
  bool accepted = true;
};

struct DebateState {
  Task task = Task::ED;
  std::size_t round = 0;
  std::size_t max_rounds = 3;
  double radius = 0.0;
  RiskThreshold threshold;
  std::map<std::size_t, Answer> live_opinions;
  std::set<std::size_t> gated_out;
  std::size_t retrieval_calls = 0;
};

struct TaskOutcome {
  JudgeVerdict::Kind kind = JudgeVerdict::Kind::NoEvent;
  std::vector<TriggerAnswer> triggers;  // ED result rows (empty for no event)
  ArgumentAnswer arguments;             // EAE result table
  std::size_t rounds = 0;
  bool forced = false;  // decided by adjudication at the round cap
};

/// Task prompt the scorer conditions on. EAE needs the bound event and its
/// definition.
std::string risk_input(Task task, const Sentence& sentence, const TriggerAnswer* bound,
                       const EventDefinition* definition);

/// Event definitions and examples as shown to debaters and the critic.
std::string render_reference_packet(const RetrievalResult& r, Task task, const EventTypeId& bound_type);

/// One ED or EAE debate over a single sentence. Stage order per round:
/// opinions, retrieval, AdaCP gate, cross-examination, judgement.
class TaskDebate {
 public:
  TaskDebate(const SessionContext& ctx, const Sentence& sentence, const Vector& query, Task task,
             std::optional<TriggerAnswer> bound_trigger, Transcript& transcript,
             std::vector<RiskObservation>& risks);

  /// Runs one round and advances round, radius and threshold.
  JudgeVerdict run_round();
  /// Runs rounds until a verdict or the cap, then adjudicates.
  TaskOutcome run();

  const DebateState& state() const noexcept { return state_; }

 private:
  struct Statement {
    std::size_t debater;
    Answer answer;
    bool parsed;
  };

  std::string call(const AgentBinding& agent, std::vector<ChatMessage>& history, const std::string& stage,
                   const std::string& role);
  void note(const std::string& stage, const std::string& role, const std::string& text);
  Answer parse_reply(std::size_t debater, const std::string& reply);
  Answer abstention() const;
  std::string scoring_input() const;
  std::string initial_prompt(std::size_t debater) const;
  std::string render_packet(const RetrievalResult& r) const;
  std::string scrub(std::string text) const;
  bool gate(std::size_t debater, const Answer& answer, const std::string& packet, const std::string& stage,
            std::optional<double>* risk_out);
  TaskOutcome adjudicate();

  const SessionContext& ctx_;
  const Sentence& sentence_;
  const Vector& query_;
  std::optional<TriggerAnswer> bound_;
  const EventDefinition* bound_def_ = nullptr;
  Transcript& transcript_;
  std::vector<RiskObservation>& risks_;
  DebateState state_;
  std::vector<std::vector<ChatMessage>> debater_histories_;
  std::vector<ChatMessage> critic_history_;
  std::vector<Candidate> frozen_topk_;
  bool have_frozen_ = false;
  std::vector<std::string> retrieval_strings_;  // content never shown to the judge
  std::map<std::size_t, double> last_risks_;    // post-CE risks of accepted answers
  std::optional<JudgeVerdict> verdict_;
};

/// Raised when a backend fails mid-session; carries the partial transcript.
class SessionAborted : public BackendError {
 public:
  SessionAborted(const std::string& what, Transcript transcript)
      : BackendError(what), transcript_(std::move(transcript)) {}
  const Transcript& transcript() const noexcept { return transcript_; }

 private:
  Transcript transcript_;
};

struct SessionResult {
  std::string sentence_id;
  std::vector<EventMention> events;  // empty: no event
  Transcript transcript;
  std::vector<RiskObservation> risks;
  TaskOutcome ed;
  std::vector<TaskOutcome> eae;
};

/// ED debate, then one EAE debate per agreed (type, trigger), then the
/// summarizer. With `given_triggers` the ED debate is skipped (EAE with gold
/// triggers). Throws SessionAborted.
SessionResult run_session(const Sentence& sentence, const SessionContext& ctx,
                          const std::vector<TriggerAnswer>* given_triggers = nullptr);

/// Risks of the gold answers of positive calibration rows, scored the way
/// round-0 gating scores an opinion (one value per gold event).
std::vector<double> calibration_risks(const std::vector<ReferenceEntry>& calib, Task task, const SessionContext& ctx);

}  // namespace dao
