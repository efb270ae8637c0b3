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
"""Denoising automatically augmented text-classification data."""

import json
import os

from odda._odda import (
    ConfigError,
    DataError,
    NumericError,
    consistency_loss,
    featurize,
    hard_ce,
    kl_divergence,
    macro_f1,
    od_loss,
    reweight_factors,
    soft_ce,
    sr_loss,
    temperature_softmax,
)
from odda import _odda

__all__ = [
    "ConfigError",
    "DataError",
    "NumericError",
    "consistency_loss",
    "eda_augment",
    "featurize",
    "flip_labels",
    "gen_synthetic",
    "hard_ce",
    "kl_divergence",
    "load_dataset",
    "macro_f1",
    "od_loss",
    "reweight_factors",
    "run_experiment",
    "soft_ce",
    "sr_loss",
    "temperature_softmax",
]


def load_dataset(path, format=""):
    """Returns {"label_names": [...], "examples": [{"id", "text", "label"}]}."""
    return json.loads(_odda._load_dataset(os.fspath(path), format))


def eda_augment(dataset, k=3, p_sr=0.05, p_ri=0.05, p_rs=0.05, p_rd=0.05,
                seed=1, lexicon="", stopwords=""):
    out = _odda._eda_augment(json.dumps(dataset), k, p_sr, p_ri, p_rs, p_rd,
                             seed, os.fspath(lexicon), os.fspath(stopwords))
    return json.loads(out)


def flip_labels(dataset, p_n, seed=1):
    return json.loads(_odda._flip_labels(json.dumps(dataset), p_n, seed))


def run_experiment(config, seeds=(1, 2, 3, 4, 5), threads=1):
    """Runs the full pipeline per seed; `config` is a (partial) config dict."""
    out = _odda._run_experiment(json.dumps(config), list(seeds), threads)
    return json.loads(out)


def gen_synthetic(out, **spec):
    """Writes a synthetic corpus to `out`; returns its Bayes accuracy."""
    return _odda._gen_synthetic(json.dumps(spec), os.fspath(out))
