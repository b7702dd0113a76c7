#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "newsent/error.hpp"
#include "newsent/pipeline.hpp"

#ifndef NEWSENT_DATA_DIR
#define NEWSENT_DATA_DIR "data"
#endif

namespace {

using newsent::Error;
using newsent::ErrorKind;
namespace pl = newsent::pipeline;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

int report_error(const std::string& code, const std::string& message, const std::string& context, int status) {
  std::cerr << nlohmann::json{{"code", code}, {"message", message}, {"context", context}}.dump() << '\n';
  return status;
}

struct Overrides {
  std::string config;
  std::string output_dir;
  std::string data_dir = NEWSENT_DATA_DIR;
  std::optional<std::uint64_t> seed;
  std::string embedding;
  std::string model;
  std::string checkpoint;
};

pl::PipelineConfig load(const Overrides& o) {
  std::ifstream in(o.config);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file", o.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what(), o.config);
  }
  if (!j.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object", o.config);
  const std::filesystem::path cwd = std::filesystem::current_path();
  if (const char* env = std::getenv("OUTPUT_DIR"); env && *env)
    j["output_dir"] = std::filesystem::absolute(cwd / env).string();
  if (!o.output_dir.empty()) j["output_dir"] = std::filesystem::absolute(cwd / o.output_dir).string();
  if (o.seed) j["seed"] = *o.seed;
  if (!o.embedding.empty()) j["embedding"] = o.embedding;
  if (!o.model.empty()) j["model"] = o.model;
  std::filesystem::path base = std::filesystem::path(o.config).parent_path();
  if (base.empty()) base = ".";
  return pl::parse_config(j, base, o.data_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Financial headline sentiment pipeline"};
  app.require_subcommand(1);
  Overrides o;

  using Runner = nlohmann::json (*)(const pl::PipelineConfig&);
  const std::pair<const char*, Runner> simple[] = {
      {"ingest", pl::run_ingest},
      {"clean", pl::run_clean},
      {"score", pl::run_score},
      {"eda", pl::run_eda},
      {"train-embedding", pl::run_train_embedding},
      {"train-model", pl::run_train_model},
      {"signals", pl::run_signals},
      {"grid", pl::run_grid},
  };
  const char* help[] = {
      "Load headline and price files; write cleaned copies and load reports",
      "Run the text-cleaning pipeline over every headline",
      "Score headlines with the sentiment lexicon",
      "Exploratory statistics: frequencies, lengths, sentiment counts",
      "Train or load the configured embedding and export it",
      "Train the configured classifier and save its checkpoint",
      "Join headline scores with prices into buy/sell signals",
      "Run every configured (embedding, model) pair and write comparison.csv",
  };

  std::vector<std::pair<CLI::App*, Runner>> commands;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config, "Pipeline config (JSON)")->required();
    sub->add_option("-o,--output-dir", o.output_dir, "Output directory (overrides config and OUTPUT_DIR)");
    sub->add_option("--data-dir", o.data_dir, "Directory holding the bundled resources");
    sub->add_option("--seed", o.seed, "Master seed override");
    sub->add_option("--embedding", o.embedding, "Embedding override");
    sub->add_option("--model", o.model, "Model override (rnn|lstm)");
  };
  for (std::size_t i = 0; i < std::size(simple); ++i) {
    auto* sub = app.add_subcommand(simple[i].first, help[i]);
    add_common(sub);
    commands.emplace_back(sub, simple[i].second);
  }
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint on the validation split");
  add_common(evaluate);
  evaluate->add_option("--checkpoint", o.checkpoint, "Checkpoint path (default <output>/model.ckpt)");

  auto* synth = app.add_subcommand("make-synthetic", "Write the synthetic long-range recall corpus as headlines");
  std::string synth_out;
  std::size_t synth_n = 2000, synth_steps = 50;
  std::uint64_t synth_seed = 7;
  synth->add_option("--out", synth_out, "Output CSV path")->required();
  synth->add_option("--samples", synth_n, "Number of headlines");
  synth->add_option("--steps", synth_steps, "Tokens per headline");
  synth->add_option("--seed", synth_seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("config", e.what(), "arguments", kExitConfig);
  }

  try {
    if (synth->parsed()) {
      pl::write_synthetic_headlines(synth_out, pl::recall_task(synth_n, synth_steps, synth_seed));
      std::cout << nlohmann::json{{"written", synth_n}, {"path", synth_out}}.dump() << '\n';
      return 0;
    }
    const auto cfg = load(o);
    nlohmann::json summary;
    if (evaluate->parsed()) {
      std::filesystem::path ckpt;
      if (!o.checkpoint.empty()) ckpt = std::filesystem::absolute(o.checkpoint);
      summary = pl::run_evaluate(cfg, ckpt);
    } else {
      for (const auto& [sub, run] : commands)
        if (sub->parsed()) summary = run(cfg);
    }
    std::cout << summary.dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    return report_error(std::string(newsent::to_string(e.kind())), e.what(), e.context(),
                        e.kind() == ErrorKind::Config ? kExitConfig : kExitData);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), "", kExitData);
  }
}
