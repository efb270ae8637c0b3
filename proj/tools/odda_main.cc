//
// Copyright 2026 The ODDA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line driver: odda <command> [flags].

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "odda/commands.h"
#include "odda/config.h"
#include "spdlog/spdlog.h"

namespace {

void ConfigureLogging() {
  spdlog::set_level(spdlog::level::warn);
  const char* level = std::getenv("ODDA_LOG");
  if (level == nullptr) return;
  const std::string name = level;
  if (name == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (name == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (name != "warn") {
    spdlog::warn("ignoring ODDA_LOG={}; expected debug, info or warn", name);
  }
}

struct CommonFlags {
  std::string config;
  std::vector<std::string> overrides;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::string out = "out";
  int threads = 1;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "JSON config or run manifest");
  cmd->add_option("--set", flags.overrides, "dot-path override, e.g. od.tau=2")
      ->allow_extra_args(false);
  cmd->add_option("--seeds", flags.seeds, "comma-separated seeds")
      ->delimiter(',');
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--threads", flags.threads, "worker threads")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureLogging();
  CLI::App app{"Denoising augmented text-classification data"};
  app.require_subcommand(1);

  CommonFlags flags;
  for (const auto& name : odda::CommandNames()) {
    AddCommonFlags(app.add_subcommand(name), flags);
  }
  nlohmann::json args = nlohmann::json::object();

  std::vector<double> p_n = {0.0, 0.1, 0.3, 0.5};
  std::vector<std::string> methods;
  auto* sweep = app.get_subcommand("sweep-noise");
  sweep->add_option("--pn", p_n, "label-flip probabilities")->delimiter(',');
  sweep->add_option("--methods", methods, "methods to compare")->delimiter(',');

  std::vector<double> tau, alpha;
  std::vector<int> m;
  auto* ablate = app.get_subcommand("ablate");
  ablate->add_option("--tau", tau, "temperatures")->delimiter(',');
  ablate->add_option("--alpha", alpha, "SR coefficients")->delimiter(',');
  ablate->add_option("--m", m, "dropout pass counts")->delimiter(',');

  std::string checkpoint, data;
  auto* eval = app.get_subcommand("eval");
  eval->add_option("--checkpoint", checkpoint, "model checkpoint")->required();
  eval->add_option("--data", data, "labeled dataset")->required();

  int n = 500, n_test = 1000, classes = 2, vocab = 100, noise_vocab = 200,
      length = 12, synonyms = 3;
  double signal = 0.15;
  std::uint64_t gen_seed = 1;
  auto* gen = app.get_subcommand("gen-synthetic");
  gen->add_option("--n", n, "training examples");
  gen->add_option("--n-test", n_test, "test examples");
  gen->add_option("--classes", classes, "number of classes");
  gen->add_option("--vocab", vocab, "class tokens per class");
  gen->add_option("--noise-vocab", noise_vocab, "shared noise tokens");
  gen->add_option("--length", length, "tokens per example");
  gen->add_option("--signal-strength", signal, "probability of a class token");
  gen->add_option("--synonyms", synonyms, "lexicon entries per token");
  gen->add_option("--seed", gen_seed, "generator seed");

  std::string manifest;
  std::string replay_out = "out";
  int replay_threads = 0;
  auto* replay = app.add_subcommand("replay", "rerun a manifest.json");
  replay->add_option("manifest", manifest, "manifest path")->required();
  replay->add_option("--out", replay_out, "output directory");
  replay->add_option("--threads", replay_threads, "override worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the config-error status.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    odda::CommandRequest request;
    std::string out = flags.out;
    if (replay->parsed()) {
      request = odda::LoadManifest(manifest);
      if (replay_threads > 0) request.threads = replay_threads;
      out = replay_out;
    } else {
      CLI::App* cmd = app.get_subcommands().front();
      request.command = cmd->get_name();
      request.config = odda::ResolveConfig(flags.config, flags.overrides);
      request.seeds = flags.seeds;
      request.threads = flags.threads;
      if (cmd == sweep) {
        args["p_n"] = p_n;
        if (!methods.empty()) args["methods"] = methods;
      } else if (cmd == ablate) {
        if (!tau.empty()) args["tau"] = tau;
        if (!alpha.empty()) args["alpha"] = alpha;
        if (!m.empty()) args["m"] = m;
      } else if (cmd == eval) {
        args = {{"checkpoint", checkpoint}, {"data", data}};
      } else if (cmd == gen) {
        args = {{"n", n},
                {"n_test", n_test},
                {"classes", classes},
                {"vocab", vocab},
                {"noise_vocab", noise_vocab},
                {"length", length},
                {"signal_strength", signal},
                {"synonyms", synonyms},
                {"seed", gen_seed}};
      }
      request.args = args;
    }
    std::cout << odda::RunCommand(request, out);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "odda: " << e.what() << "\n";
    return odda::ExitCodeFor(e);
  }
}
