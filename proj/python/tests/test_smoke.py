#
# Copyright 2026 The ODDA Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
import math

import pytest

import odda


def test_loss_oracles():
    q = odda.temperature_softmax([1.0, 2.0, 3.0], 2.0)
    assert q == pytest.approx([0.186323723225847577, 0.307195885718498397,
                               0.506480391055654026], abs=1e-12)
    assert odda.sr_loss([[0.6, 0.4], [0.4, 0.6]]) == pytest.approx(
        0.0204109972601275648, abs=1e-12)
    assert odda.reweight_factors([1.0, 2.0], lambda_=1.0) == pytest.approx(
        [0.268941421369995121, 0.731058578630004879], abs=1e-12)
    assert odda.kl_divergence([0.5, 0.5], [0.25, 0.75]) == pytest.approx(
        0.143841036225890464, abs=1e-12)
    assert odda.od_loss([0.0, 0.0], [1.0, 2.0], 2.0) == pytest.approx(math.log(2))
    assert odda.consistency_loss([0.5, 0.5], [[0.25, 0.75]], 10.0) == pytest.approx(
        1.43841036225890464)
    assert odda.macro_f1([0, 1, 0, 1], [0, 0, 1, 1], 2) == pytest.approx(0.5)


def test_featurize_counts():
    assert odda.featurize("") == []
    (bucket, count), = odda.featurize("a a", hash_bits=12, ngram_max=1)
    assert count == 2 and 0 <= bucket < 4096


def test_errors_map_to_python_exceptions(tmp_path):
    with pytest.raises(ValueError):
        odda.temperature_softmax([1.0], 0.0)
    with pytest.raises(odda.DataError):
        odda.load_dataset(tmp_path / "missing.tsv")
    with pytest.raises(odda.ConfigError):
        odda.run_experiment({"od": {"temperature": 2}}, seeds=[1])


def test_pipeline(tmp_path):
    bayes = odda.gen_synthetic(tmp_path, n=80, n_test=40, signal_strength=0.4)
    assert 0.5 < bayes <= 1.0
    data = odda.load_dataset(tmp_path / "train.tsv")
    assert len(data["examples"]) == 80

    aug = odda.eda_augment(data, k=2, seed=3, lexicon=tmp_path / "lexicon.tsv")
    assert len(aug["examples"]) == 160
    assert all("origin_id" in e for e in aug["examples"])
    noisy = odda.flip_labels(aug, p_n=1.0, seed=1)
    assert all(a["label"] != b["label"]
               for a, b in zip(aug["examples"], noisy["examples"]))

    config = {
        "data": {"train": str(tmp_path / "train.tsv"),
                 "test": str(tmp_path / "test.tsv")},
        "augment": {"lexicon": str(tmp_path / "lexicon.tsv")},
        "model": {"architecture": "linear", "hash_bits": 12},
        "train": {"teacher_steps": 20, "student_steps": 20,
                  "eval_interval": 10, "lr": 1.0},
    }
    report = odda.run_experiment(config, seeds=[1, 2])
    assert [s["seed"] for s in report["per_seed"]] == [1, 2]
    assert 0.0 <= report["mean_macro_f1"] <= 1.0
    assert odda.run_experiment(config, seeds=[1, 2]) == report
