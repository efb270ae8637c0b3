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

// Python bindings for the core operations. Datasets cross the boundary as
// JSON text; the odda package turns them into plain dicts.

#include <fstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "odda/augment.h"
#include "odda/commands.h"
#include "odda/errors.h"
#include "odda/experiment.h"
#include "odda/featurizer.h"
#include "odda/losses.h"
#include "odda/metrics.h"
#include "odda/synthetic.h"

namespace py = pybind11;
using nlohmann::json;

namespace {

using Vec = std::vector<double>;

json DatasetToJson(const odda::Dataset& d) {
  json examples = json::array();
  for (const auto& e : d.examples) {
    json x = {{"id", e.id}, {"text", e.text}, {"label", e.label}};
    if (e.origin_id) x["origin_id"] = *e.origin_id;
    examples.push_back(std::move(x));
  }
  return {{"label_names", d.label_names}, {"examples", std::move(examples)}};
}

odda::Dataset DatasetFromJson(const std::string& text) {
  const json j = json::parse(text);
  odda::Dataset d;
  d.label_names = j.at("label_names").get<std::vector<std::string>>();
  for (const auto& x : j.at("examples")) {
    odda::Example e;
    e.id = x.at("id").get<std::int64_t>();
    e.text = x.at("text").get<std::string>();
    e.label = x.at("label").get<int>();
    if (x.contains("origin_id") && !x.at("origin_id").is_null()) {
      e.origin_id = x.at("origin_id").get<std::int64_t>();
    }
    d.examples.push_back(std::move(e));
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_odda, m) {
  m.doc() = "Denoising augmented text-classification data";

  py::register_exception<odda::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<odda::DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<odda::NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def(
      "featurize",
      [](const std::string& text, int hash_bits, int ngram_max) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        for (const auto& [bucket, count] :
             odda::Featurize(text, hash_bits, ngram_max).entries) {
          out.emplace_back(bucket, count);
        }
        return out;
      },
      py::arg("text"), py::arg("hash_bits") = 18, py::arg("ngram_max") = 2);

  m.def(
      "temperature_softmax",
      [](const Vec& z, double tau) { return odda::TemperatureSoftmax(z, tau); },
      py::arg("logits"), py::arg("tau") = 1.0);
  m.def(
      "hard_ce", [](const Vec& p, int y) { return odda::HardCe(p, y); },
      py::arg("p"), py::arg("label"));
  m.def(
      "soft_ce", [](const Vec& p, const Vec& q) { return odda::SoftCe(p, q); },
      py::arg("p"), py::arg("q"));
  m.def(
      "od_loss",
      [](const Vec& s, const Vec& t, double tau) { return odda::OdLoss(s, t, tau); },
      py::arg("student_logits"), py::arg("teacher_logits"), py::arg("tau") = 1.0);
  m.def(
      "sr_loss", [](const std::vector<Vec>& probs) { return odda::SrLoss(probs); },
      py::arg("probs"));
  m.def(
      "reweight_factors",
      [](const Vec& losses, double lambda) {
        return odda::ReweightFactors(losses, lambda);
      },
      py::arg("losses"), py::arg("lambda_") = 1.0);
  m.def(
      "consistency_loss",
      [](const Vec& orig, const std::vector<Vec>& aug, double alpha_c) {
        return odda::ConsistencyLoss(orig, aug, alpha_c);
      },
      py::arg("orig_prob"), py::arg("aug_probs"), py::arg("alpha_c") = 10.0);
  m.def(
      "kl_divergence", [](const Vec& p, const Vec& q) { return odda::KlDivergence(p, q); },
      py::arg("p"), py::arg("q"));
  m.def(
      "macro_f1",
      [](const std::vector<int>& preds, const std::vector<int>& golds, int num_classes) {
        return odda::MacroF1(preds, golds, num_classes);
      },
      py::arg("preds"), py::arg("golds"), py::arg("num_classes"));

  m.def(
      "_load_dataset",
      [](const std::filesystem::path& path, const std::string& format) {
        const auto f = format.empty() ? odda::FormatFromPath(path)
                                      : odda::ParseDataFormat(format);
        return DatasetToJson(odda::LoadDataset(path, f)).dump();
      },
      py::arg("path"), py::arg("format") = "");
  m.def(
      "_eda_augment",
      [](const std::string& dataset, int k, double p_sr, double p_ri, double p_rs,
         double p_rd, std::uint64_t seed, const std::string& lexicon,
         const std::string& stopwords) {
        odda::EdaConfig config;
        config.k = k;
        config.p_sr = p_sr;
        config.p_ri = p_ri;
        config.p_rs = p_rs;
        config.p_rd = p_rd;
        if (!lexicon.empty()) config.lexicon = odda::LoadLexicon(lexicon);
        if (!stopwords.empty()) {
          for (auto& w : odda::LoadWordList(stopwords)) config.stopwords.insert(w);
        }
        config.Validate();
        return DatasetToJson(odda::EdaAugment(DatasetFromJson(dataset), config, seed))
            .dump();
      },
      py::arg("dataset"), py::arg("k"), py::arg("p_sr"), py::arg("p_ri"),
      py::arg("p_rs"), py::arg("p_rd"), py::arg("seed"), py::arg("lexicon"),
      py::arg("stopwords"));
  m.def(
      "_flip_labels",
      [](const std::string& dataset, double p_n, std::uint64_t seed) {
        return DatasetToJson(odda::FlipLabels(DatasetFromJson(dataset), {p_n, seed}))
            .dump();
      },
      py::arg("dataset"), py::arg("p_n"), py::arg("seed"));
  m.def(
      "_run_experiment",
      [](const std::string& config_json, const std::vector<std::uint64_t>& seeds,
         int threads) {
        json merged = odda::ToJson(odda::ExperimentConfig{});
        merged.merge_patch(json::parse(config_json));
        const auto config = odda::ExperimentConfigFromJson(merged);
        config.Validate();
        py::gil_scoped_release release;
        const auto inputs = odda::LoadExperimentInputs(config);
        odda::ExperimentOptions options;
        options.threads = threads;
        return odda::ToJson(odda::RunExperiment(inputs, config, seeds, options)).dump();
      },
      py::arg("config"), py::arg("seeds"), py::arg("threads") = 1);
  m.def(
      "_gen_synthetic",
      [](const std::string& spec_json, const std::filesystem::path& out) {
        odda::CommandRequest request;
        request.command = "gen-synthetic";
        request.args = json::parse(spec_json);
        odda::RunCommand(request, out);
        return json::parse(std::ifstream(out / "manifest.json")).at("bayes_accuracy")
            .get<double>();
      },
      py::arg("spec"), py::arg("out"));
}
