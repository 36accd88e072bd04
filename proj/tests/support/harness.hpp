#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dao/debate.hpp"
#include "dao/offline_backends.hpp"
#include "dao/replay.hpp"

namespace testing {

// Offline debate context: hash embeddings, a keyed scorer and one scripted
// chat per agent, bound to the scripts of one sentence of a replay bundle.
struct Harness {
  dao::EventOntology ontology;
  std::unique_ptr<dao::HashEmbedder> embedder;
  dao::EmbeddedIndex index;
  std::unique_ptr<dao::ScoringBackend> scorer;
  std::vector<std::unique_ptr<dao::ScriptedChat>> chats;
  dao::SessionContext ctx;

  Harness(dao::EventOntology onto, std::vector<dao::ReferenceEntry> reference, std::size_t dimension = 256)
      : ontology(std::move(onto)), embedder(std::make_unique<dao::HashEmbedder>(dimension)) {
    index = dao::build_index(std::move(reference), *embedder);
    ctx.resources = {&ontology, &index, embedder.get(), nullptr};
  }

  void set_scorer(std::unique_ptr<dao::ScoringBackend> s) {
    scorer = std::move(s);
    ctx.resources.scorer = scorer.get();
  }

  // Fresh scripted agents for `sentence_id`; debaters are named A, B, ...
  void bind(const dao::ReplayBundle& bundle, const std::string& sentence_id, std::size_t debaters = 2) {
    chats.clear();
    ctx.agents = {};
    auto make = [&](const std::string& key) {
      chats.push_back(std::make_unique<dao::ScriptedChat>(key, bundle.script_for(sentence_id, key)));
      return chats.back().get();
    };
    for (std::size_t i = 0; i < debaters; ++i) {
      const std::string name(1, static_cast<char>('A' + i));
      ctx.agents.debaters.push_back({name, make("debater:" + name), 0.0});
    }
    ctx.agents.critic = {"critic", make("critic"), 0.0};
    ctx.agents.judge = {"judge", make("judge"), 0.0};
    ctx.agents.summarizer = {"summarizer", make("summarizer"), 0.0};
  }

  dao::ScriptedChat& chat(const std::string& key) {
    for (auto& c : chats)
      if (c->name() == key) return *c;
    throw std::out_of_range("no agent " + key);
  }
};

}  // namespace testing
