"""Sequential prediction and memory inference for stationary ergodic processes."""

import json as _json

from ._core import (
    ConfigError,
    ConvergenceError,
    InputError,
    ProcessModel,
    UnsupportedOracle,
    bernoulli,
    chi,
    entropy_rate,
    example1,
    flip_chain,
    fm,
    forward_memory,
    forward_series,
    geometric_renewal,
    markov_qhat,
    memory_length,
    ntest,
    ordest,
    predict_backward,
    predict_forward,
    sample_path,
    stoptime,
    to_csv,
    true_conditional,
)
from ._core import run_experiment as _run_experiment
from ._core import summarize as _summarize
from ._core import model_from_json as _model_from_json

__version__ = "0.1.0"


def model_from_dict(config):
    """Build a model from the same JSON object the CLI accepts."""
    return _model_from_json(_json.dumps(config))


def run_experiment(config, base_dir=""):
    """Run an experiment config (dict); returns (columns, rows, metadata dict)."""
    columns, rows, meta = _run_experiment(_json.dumps(config), str(base_dir))
    return columns, rows, _json.loads(meta)


def summarize(columns, rows, quantiles=(0.1, 0.5, 0.9)):
    """Long-format summary of a trace; returns (columns, rows)."""
    return _summarize(list(columns), [list(r) for r in rows], list(quantiles))
