#include "dao/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "dao/debate.hpp"
#include "dao/errors.hpp"
#include "dao/http_backends.hpp"
#include "dao/offline_backends.hpp"
#include "dao/replay.hpp"
#include "dao/text.hpp"

namespace dao {

using json = nlohmann::json;

namespace {

// Shared, read-only state for a command. Backends stored here must be safe
// to call from several workers at once.
struct Environment {
  RunConfig config;
  EventOntology ontology;
  std::optional<ReplayBundle> bundle;
  std::unique_ptr<EmbeddingBackend> embedder;
  std::unique_ptr<ScoringBackend> scorer;
  EmbeddedIndex index;
  std::map<std::string, std::unique_ptr<ChatBackend>> http_chat;  // "<backend>/<model>"
};

std::unique_ptr<Environment> open_environment(const std::filesystem::path& config_path) {
  auto env = std::make_unique<Environment>();
  env->config = load_config(config_path);
  const RunConfig& c = env->config;
  if (c.ontology_path.empty()) throw ConfigError("paths.ontology is not set");
  env->ontology = EventOntology::load(c.resolve(c.ontology_path));
  if (!c.replay_bundle.empty()) env->bundle = load_bundle(c.resolve(c.replay_bundle));

  if (c.embedding.kind == "hash") {
    env->embedder = std::make_unique<HashEmbedder>(c.embedding.dimension);
  } else {
    HttpEndpoint e = c.embedding.endpoint;
    if (e.path.empty()) e.path = "/v1/embeddings";
    env->embedder = std::make_unique<HttpEmbeddingBackend>(e, c.embedding.dimension);
  }
  if (c.scoring.kind == "keyed") {
    env->scorer = env->bundle->make_scorer();
  } else {
    HttpEndpoint e = c.scoring.endpoint;
    if (e.path.empty()) e.path = "/score";
    env->scorer = std::make_unique<HttpScoringBackend>(e);
  }

  std::vector<ReferenceEntry> reference;
  if (!c.reference_path.empty()) reference = filter_split(load_corpus(c.resolve(c.reference_path)), {Split::Train});
  env->index = build_index(std::move(reference), *env->embedder);

  std::vector<const AgentConfig*> agents;
  for (const auto& d : c.debaters) agents.push_back(&d);
  agents.push_back(&c.critic);
  agents.push_back(&c.judge);
  agents.push_back(&c.summarizer);
  for (const auto* a : agents) {
    const BackendConfig& b = c.chat_backends.at(a->backend);
    if (b.kind != "http") continue;
    HttpEndpoint e = b.endpoint;
    if (!a->model.empty()) e.model = a->model;
    if (e.path.empty()) e.path = "/v1/chat/completions";
    auto key = a->backend + "/" + e.model;
    if (!env->http_chat.count(key)) env->http_chat[key] = std::make_unique<HttpChatBackend>(e);
  }
  return env;
}

SessionConfig session_config(const RunConfig& c, bool need_ed) {
  SessionConfig s;
  s.max_rounds = c.max_rounds;
  s.drag = c.drag;
  s.ed_threshold = need_ed ? c.initial_threshold(Task::ED) : 0.0;
  s.eae_threshold = c.initial_threshold(Task::EAE);
  s.beta = c.beta;
  s.use_drag = c.use_drag;
  s.recluster = c.recluster;
  s.use_adacp = c.adacp_enabled;
  s.freeze_topk = c.freeze_topk;
  s.llm_summarizer = c.llm_summarizer;
  s.single_token_triggers = c.single_token_triggers;
  return s;
}

// Agents for one sentence. Replay agents get fresh scripts per sentence, so
// sessions never share consumable state.
struct SessionAgents {
  std::vector<std::unique_ptr<ScriptedChat>> owned;
  DebateAgents agents;

  SessionAgents(const Environment& env, const std::string& sentence_id) {
    const RunConfig& c = env.config;
    auto bind = [&](const AgentConfig& a, const std::string& key) {
      const BackendConfig& b = c.chat_backends.at(a.backend);
      AgentBinding binding{a.name, nullptr, a.temperature};
      if (b.kind == "http") {
        const std::string model = a.model.empty() ? b.endpoint.model : a.model;
        binding.backend = env.http_chat.at(a.backend + "/" + model).get();
      } else {
        owned.push_back(std::make_unique<ScriptedChat>(key, env.bundle->script_for(sentence_id, key)));
        binding.backend = owned.back().get();
      }
      return binding;
    };
    for (const auto& d : c.debaters) agents.debaters.push_back(bind(d, "debater:" + d.name));
    agents.critic = bind(c.critic, "critic");
    agents.judge = bind(c.judge, "judge");
    agents.summarizer = bind(c.summarizer, "summarizer");
  }
};

SessionContext make_context(const Environment& env, DebateAgents agents, bool need_ed) {
  SessionContext ctx;
  ctx.resources = {&env.ontology, &env.index, env.embedder.get(), env.scorer.get()};
  ctx.agents = std::move(agents);
  ctx.config = session_config(env.config, need_ed);
  return ctx;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string format_number(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json histograms_json(const std::vector<std::vector<RiskObservation>>& all, std::size_t bins) {
  json out = {{"bins", bins}, {"ed", json::array()}, {"eae", json::array()}};
  for (Task task : {Task::ED, Task::EAE}) {
    std::map<std::size_t, std::vector<double>> by_round;
    for (const auto& risks : all)
      for (const auto& r : risks)
        if (r.task == task) by_round[r.round].push_back(r.risk);
    for (const auto& [round, risks] : by_round) {
      const RiskHistogram h = risk_histogram(risks, bins);
      out[std::string(to_string(task))].push_back(
          {{"round", round}, {"n", risks.size()}, {"max_risk", h.max_risk}, {"counts", h.counts}});
    }
  }
  return out;
}

}  // namespace

std::vector<CalibrationReport> cmd_calibrate(const std::filesystem::path& config_path,
                                             const std::filesystem::path& corpus, std::ostream& log) {
  auto env = open_environment(config_path);
  RunConfig& c = env->config;

  std::vector<ReferenceEntry> calib = filter_split(load_corpus(corpus), {Split::Calib});
  if (c.calibration_sample > 0 && c.calibration_sample < calib.size()) {
    std::mt19937_64 rng(c.seed);
    std::shuffle(calib.begin(), calib.end(), rng);
    calib.resize(c.calibration_sample);
  }

  SessionContext ctx;
  ctx.resources = {&env->ontology, &env->index, env->embedder.get(), env->scorer.get()};
  ctx.config.drag = c.drag;
  ctx.config.use_drag = c.use_drag;

  std::vector<CalibrationReport> reports;
  for (Task task : {Task::ED, Task::EAE}) {
    ThresholdConfig& t = task == Task::ED ? c.ed : c.eae;
    CalibrationReport r{task, 0, c.delta, 0.0, false};
    if (t.override_value) {
      r.overridden = true;
      r.threshold = *t.override_value;
    } else {
      const std::vector<double> risks = calibration_risks(calib, task, ctx);
      r.n = risks.size();
      r.threshold = calibrate(risks, c.delta).value;
      t.calibrated = r.threshold;
    }
    log << to_string(task) << ": n=" << r.n << " delta=" << format_number(r.delta)
        << " q0=" << format_number(r.threshold) << (r.overridden ? " (override, calibration skipped)" : "") << "\n";
    reports.push_back(r);
  }
  save_config(c, config_path);
  return reports;
}

RunSummary cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& input,
                   const std::filesystem::path& out_dir, RunMode mode, std::ostream& log) {
  auto env = open_environment(config_path);
  const RunConfig& c = env->config;
  const bool need_ed = mode == RunMode::EE;
  session_config(c, need_ed).validate();  // fail on missing thresholds before any backend call

  const std::vector<ReferenceEntry> inputs = load_corpus(input);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  struct Slot {
    std::optional<SessionResult> result;
    std::optional<Transcript> partial;
    std::exception_ptr error;
  };
  std::vector<Slot> slots(inputs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= inputs.size()) return;
      const ReferenceEntry& entry = inputs[i];
      try {
        SessionAgents agents(*env, entry.sentence.id);
        const SessionContext ctx = make_context(*env, agents.agents, need_ed);
        std::vector<TriggerAnswer> given;
        for (const auto& ev : entry.annotation.events) given.emplace_back(ev.event_type, ev.trigger);
        slots[i].result = run_session(entry.sentence, ctx, need_ed ? nullptr : &given);
      } catch (const SessionAborted& e) {
        slots[i].partial = e.transcript();
        slots[i].error = std::current_exception();
        failed = true;
      } catch (...) {
        slots[i].error = std::current_exception();
        failed = true;
      }
    }
  };
  const std::size_t n_workers = std::min<std::size_t>(c.workers, std::max<std::size_t>(inputs.size(), 1));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  RunConfig snapshot = c;
  snapshot.ontology_path = std::filesystem::absolute(c.resolve(c.ontology_path)).lexically_normal().string();
  if (!c.reference_path.empty())
    snapshot.reference_path = std::filesystem::absolute(c.resolve(c.reference_path)).lexically_normal().string();
  if (!c.replay_bundle.empty())
    snapshot.replay_bundle = std::filesystem::absolute(c.resolve(c.replay_bundle)).lexically_normal().string();
  write_file(out_dir / "config.json", dump_config(snapshot));

  RunSummary summary;
  std::string predictions, transcripts;
  std::vector<std::vector<RiskObservation>> risks;
  std::exception_ptr first_error;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    auto& slot = slots[i];
    if (slot.result) {
      const SessionResult& r = *slot.result;
      predictions += to_prediction_json(inputs[i].sentence, r.events) + "\n";
      transcripts += r.transcript.to_jsonl(r.sentence_id);
      risks.push_back(r.risks);
      ++summary.sentences;
      summary.events += r.events.size();
      for (const auto& e : r.transcript.entries) summary.warnings += e.stage == "warning";
    } else if (slot.error && !first_error) {
      first_error = slot.error;
      if (slot.partial) transcripts += slot.partial->to_jsonl(inputs[i].sentence.id);
    }
  }
  write_file(out_dir / "predictions.jsonl", predictions);
  write_file(out_dir / "transcripts.jsonl", transcripts);
  write_file(out_dir / "histograms.json", histograms_json(risks, 20).dump(2) + "\n");
  log << "sentences=" << summary.sentences << " events=" << summary.events << " warnings=" << summary.warnings
      << "\n";
  if (first_error) std::rethrow_exception(first_error);
  return summary;
}

std::optional<EvalTask> parse_eval_task(std::string_view name) {
  if (name == "ed") return EvalTask::ED;
  if (name == "eae") return EvalTask::EAE;
  if (name == "ee") return EvalTask::EE;
  return std::nullopt;
}

std::optional<EvalMetric> parse_eval_metric(std::string_view name) {
  if (name == "exact") return EvalMetric::Exact;
  if (name == "head") return EvalMetric::Head;
  if (name == "types") return EvalMetric::Types;
  return std::nullopt;
}

namespace {

// Predicted spans need not occur in the sentence; such spans keep their
// full text as head so they can only match an identical gold head.
class PredictionHeads : public HeadExtractor {
 public:
  std::string head(const Sentence& sentence, std::string_view span) const override {
    try {
      return head_of_span(sentence, span);
    } catch (const SpanNotInSentence&) {
      return std::string(span);
    }
  }
};

json prf_json(std::string_view level, const PRF& p) {
  return {{"level", level}, {"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1},
          {"tp", p.tp},     {"fp", p.fp},               {"fn", p.fn}};
}

}  // namespace

json cmd_eval(const std::filesystem::path& pred_path, const std::filesystem::path& gold_path, EvalTask task,
              EvalMetric metric) {
  const auto golds = load_corpus(gold_path);
  const auto preds = load_corpus(pred_path, SpanCheck::Lenient);

  json warnings = json::array();
  SentenceMap gold_sentences, pred_sentences;
  for (const auto& e : golds)
    if (!gold_sentences.emplace(e.sentence.id, e.sentence).second)
      throw FormatError(0, gold_path.string() + ": duplicate sentence id " + e.sentence.id);
  for (const auto& e : preds)
    if (!pred_sentences.emplace(e.sentence.id, e.sentence).second)
      throw FormatError(0, pred_path.string() + ": duplicate sentence id " + e.sentence.id);
  auto missing = [](const SentenceMap& from, const SentenceMap& in) {
    std::vector<std::string> ids;
    for (const auto& [id, s] : from)
      if (!in.count(id)) ids.push_back(id);
    return ids;
  };
  auto id_list = [](const std::vector<std::string>& ids) {
    constexpr std::size_t kShown = 5;
    std::vector<std::string> shown(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(std::min(ids.size(), kShown)));
    return join(shown, ", ") + (ids.size() > kShown ? ", ..." : "");
  };
  if (const auto ids = missing(pred_sentences, gold_sentences); !ids.empty())
    warnings.push_back(std::to_string(ids.size()) + " predicted sentence id(s) missing from gold (" + id_list(ids) +
                       "); scored as false positives");
  if (const auto ids = missing(gold_sentences, pred_sentences); !ids.empty())
    warnings.push_back(std::to_string(ids.size()) + " gold sentence id(s) missing from predictions (" + id_list(ids) +
                       "); scored as false negatives");
  SentenceMap sentences = gold_sentences;
  for (const auto& [id, s] : pred_sentences) sentences.emplace(id, s);

  auto trigger_items = [](const std::vector<ReferenceEntry>& entries) {
    std::vector<TriggerItem> out;
    for (const auto& e : entries)
      for (const auto& ev : e.annotation.events) out.push_back({e.sentence.id, ev.event_type, ev.trigger});
    return out;
  };
  auto argument_items = [](const std::vector<ReferenceEntry>& entries) {
    std::vector<ArgumentItem> out;
    for (const auto& e : entries)
      for (const auto& ev : e.annotation.events)
        for (const auto& a : ev.arguments) out.push_back({e.sentence.id, ev.event_type, a.role, a.content});
    return out;
  };
  auto trigger_spans = [](const std::vector<ReferenceEntry>& entries) {
    std::vector<SpanItem> out;
    for (const auto& e : entries)
      for (const auto& ev : e.annotation.events) out.push_back({e.sentence.id, ev.event_type, "", ev.trigger});
    return out;
  };
  auto argument_spans = [](const std::vector<ReferenceEntry>& entries) {
    std::vector<SpanItem> out;
    for (const auto& e : entries)
      for (const auto& ev : e.annotation.events)
        for (const auto& a : ev.arguments) out.push_back({e.sentence.id, ev.event_type, a.role, a.content});
    return out;
  };

  json results = json::array();
  if (task == EvalTask::ED || task == EvalTask::EE) {
    // Triggers are single tokens; the head metric reduces to exact match.
    const PRF p = metric == EvalMetric::Types ? type_overlap_f1(trigger_spans(preds), trigger_spans(golds), sentences)
                                              : trigger_f1(trigger_items(preds), trigger_items(golds));
    results.push_back(prf_json("trigger", p));
  }
  if (task == EvalTask::EAE || task == EvalTask::EE) {
    PRF p;
    switch (metric) {
      case EvalMetric::Exact: p = argument_exact_f1(argument_items(preds), argument_items(golds)); break;
      case EvalMetric::Head: {
        // Gold spans are validated on load, so only predictions need the lenient extractor.
        const PredictionHeads heads;
        p = argument_head_f1(argument_items(preds), argument_items(golds), sentences, heads);
        break;
      }
      case EvalMetric::Types: p = type_overlap_f1(argument_spans(preds), argument_spans(golds), sentences); break;
    }
    results.push_back(prf_json("argument", p));
  }

  static constexpr const char* task_names[] = {"ed", "eae", "ee"};
  static constexpr const char* metric_names[] = {"exact", "head", "types"};
  json report = {{"task", task_names[static_cast<int>(task)]},
                 {"metric", metric_names[static_cast<int>(metric)]},
                 {"results", results},
                 {"warnings", warnings}};
  if (metric == EvalMetric::Types) report["note"] = "types metric: span overlap within (sentence, type, role)";
  return report;
}

std::string format_report(const json& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "task=%s metric=%s\n", report.at("task").get<std::string>().c_str(),
                report.at("metric").get<std::string>().c_str());
  out << line;
  std::snprintf(line, sizeof line, "%-10s %9s %9s %9s %7s %7s %7s\n", "level", "precision", "recall", "f1", "tp", "fp",
                "fn");
  out << line;
  for (const auto& r : report.at("results")) {
    std::snprintf(line, sizeof line, "%-10s %9.4f %9.4f %9.4f %7zu %7zu %7zu\n",
                  r.at("level").get<std::string>().c_str(), r.at("precision").get<double>(),
                  r.at("recall").get<double>(), r.at("f1").get<double>(), r.at("tp").get<std::size_t>(),
                  r.at("fp").get<std::size_t>(), r.at("fn").get<std::size_t>());
    out << line;
  }
  if (report.contains("note")) out << "note: " << report["note"].get<std::string>() << "\n";
  for (const auto& w : report.at("warnings")) out << "warning: " << w.get<std::string>() << "\n";
  return out.str();
}

}  // namespace dao
