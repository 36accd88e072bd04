#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dao/commands.hpp"
#include "dao/errors.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent debate engine for event extraction"};
  app.require_subcommand(1);

  std::string config, corpus, input, out_dir, mode = "ee";
  std::string pred, gold, task, metric = "head", report_out;

  auto* calibrate = app.add_subcommand("calibrate", "Calibrate initial risk thresholds from the calib split");
  calibrate->add_option("-c,--config", config, "Run configuration")->required()->check(CLI::ExistingFile);
  calibrate->add_option("--corpus", corpus, "Corpus with calib rows")->required()->check(CLI::ExistingFile);

  auto* run = app.add_subcommand("run", "Run debates over an input corpus");
  run->add_option("-c,--config", config, "Run configuration")->required()->check(CLI::ExistingFile);
  run->add_option("--input", input, "Input corpus")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--mode", mode, "ee: detect then extract; eae: extract for gold triggers")
      ->check(CLI::IsMember({"ee", "eae"}));

  auto* eval = app.add_subcommand("eval", "Score predictions against gold annotations");
  eval->add_option("--pred", pred, "Predictions")->required()->check(CLI::ExistingFile);
  eval->add_option("--gold", gold, "Gold annotations")->required()->check(CLI::ExistingFile);
  eval->add_option("--task", task, "ed, eae or ee")->required()->check(CLI::IsMember({"ed", "eae", "ee"}));
  eval->add_option("--metric", metric, "exact, head or types")->check(CLI::IsMember({"exact", "head", "types"}));
  eval->add_option("--out", report_out, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*calibrate) {
      dao::cmd_calibrate(config, corpus, std::cout);
    } else if (*run) {
      dao::cmd_run(config, input, out_dir, mode == "eae" ? dao::RunMode::EAE : dao::RunMode::EE, std::cout);
    } else if (*eval) {
      const auto report = dao::cmd_eval(pred, gold, *dao::parse_eval_task(task), *dao::parse_eval_metric(metric));
      std::cout << dao::format_report(report);
      if (!report_out.empty()) {
        std::ofstream out(report_out, std::ios::binary | std::ios::trunc);
        out << report.dump(2) << "\n";
        if (!out) throw dao::IoError("cannot write " + report_out);
      }
    }
  } catch (const dao::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
