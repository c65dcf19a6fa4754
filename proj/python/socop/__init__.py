"""Singleton-optimized conformal prediction.

Thin Python layer over the C++ core in ``socop._core``.
"""

import json

from ._core import (  # noqa: F401
    CalibrationResult,
    ConfigError,
    EvalReport,
    HullProfile,
    ScoreConfig,
    SortedDist,
    ValidationError,
    build_hull,
    calibrate,
    default_lambda_grid,
    evaluate,
    excess_mass_delta,
    generate_synthetic,
    kappa_at,
    knee_point,
    plugin_set,
    predict_generic,
    predict_socop,
    score_batch_las,
    score_batch_singleton,
    score_batch_socop,
    score_for_rank,
    socop_label_scores,
    socop_score,
    sort_dist,
    sweep_lambda,
)
from ._core import run_experiment_json as _run_experiment_json


def run_experiment(probs, labels, *, method="socop", alpha=0.1, lam=0.1, k0=1,
                   splits=None, seed=0, trials=1):
    """Run the split protocol and return the report as a dict.

    ``lam=None`` selects lambda at the knee of a sweep on the tuning split.
    ``splits`` is ``(n_tune, n_cal, n_eval)``; by default the data is halved
    into calibration and evaluation.
    """
    n = len(probs)
    if splits is None:
        splits = (0, n // 2, n - n // 2)
    return json.loads(_run_experiment_json(probs, labels, method, alpha, lam, k0,
                                           tuple(splits), seed, trials))


__all__ = [name for name in dir() if not name.startswith("_")]
