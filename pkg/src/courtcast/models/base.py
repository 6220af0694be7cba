"""Shared model plumbing: kinds, the train/predict contract, tie rule, save/load.

All four classifiers consume the same instance shape — a numeric feature
vector plus the 3-valued game-site categorical — and produce a win
probability for the first team.  Exactly at p = 0.5 the tie is broken the
way the simplest baseline would: take the home team, and at a neutral site
the first (lexicographically smaller) team.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from courtcast.features import (
    SITE_ORDER,
    FeatureScheme,
    Label,
    MatchInstance,
    feature_names,
    to_arrays,
)
from courtcast.stats import Site


class ModelError(ValueError):
    """Raised for invalid training data, hyperparameters, or predict inputs."""


class ModelKind(str, Enum):
    NAIVE_BAYES_KDE = "naive_bayes_kde"
    MLP = "mlp"
    DECISION_TREE = "decision_tree"
    RANDOM_FOREST = "random_forest"


@dataclass(frozen=True)
class TrainedModel:
    """A fitted classifier: kind, the exact feature contract, and parameters.

    ``class_counts`` records the training class balance (the prior
    information several kinds use); ``params`` is kind-specific and opaque
    to everything except the kind's own predict/serialize routines.
    """

    kind: ModelKind
    scheme: FeatureScheme
    feature_names: tuple[str, ...]
    class_counts: dict[str, int]
    hyper: dict[str, Any]
    params: Any


def resolve_label(p_win: float, location: Site) -> Label:
    """Decision threshold 0.5 with the home-team tie rule at exactly 0.5."""
    if p_win > 0.5:
        return Label.WIN
    if p_win < 0.5:
        return Label.LOSS
    return Label.WIN if location in (Site.HOME, Site.NEUTRAL) else Label.LOSS


def check_training_data(instances: list[MatchInstance]) -> tuple[np.ndarray, np.ndarray, np.ndarray, FeatureScheme]:
    """Validate and stack training instances; returns (X, site, y, scheme)."""
    if not instances:
        raise ModelError("no training instances")
    scheme = instances[0].scheme
    if any(inst.scheme is not scheme for inst in instances):
        raise ModelError("mixed feature schemes in training data")
    if any(inst.label is None for inst in instances):
        raise ModelError("unlabeled instance in training data")
    X, site, y = to_arrays(instances)
    if not np.all(np.isfinite(X)):
        raise ModelError("non-finite feature value in training data")
    classes = set(y.tolist())
    if classes != {0, 1}:
        raise ModelError(
            f"training data must contain both classes, got only "
            f"{'wins' if classes == {1} else 'losses'}")
    return X, site, y, scheme


def check_predict_input(model: TrainedModel, instance: MatchInstance) -> tuple[np.ndarray, int]:
    names = feature_names(instance.scheme)
    if names != model.feature_names:
        raise ModelError(
            f"feature names do not match: model was trained on "
            f"{model.feature_names}, instance carries {names}")
    x = np.asarray(instance.features, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ModelError("non-finite feature value in predict input")
    return x, SITE_ORDER.index(instance.location)


def resolve_hyper(defaults: dict[str, Any], hyper: dict[str, Any] | None,
                  kind: ModelKind) -> dict[str, Any]:
    merged = dict(defaults)
    for key, value in (hyper or {}).items():
        if key not in defaults:
            raise ModelError(f"unknown hyperparameter {key!r} for {kind.value} "
                             f"(valid: {sorted(defaults)})")
        merged[key] = value
    return merged


# ---------------------------------------------------------------------------
# Serialization: a small versioned JSON text format.  Floats are written via
# repr (shortest round-trip), so save -> load -> save is byte-identical.

FORMAT_NAME = "courtcast-model"
FORMAT_VERSION = 1


def save_model(model: TrainedModel, path: str | Path,
               encode_params) -> None:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "kind": model.kind.value,
        "scheme": model.scheme.value,
        "feature_names": list(model.feature_names),
        "class_counts": model.class_counts,
        "hyper": model.hyper,
        "params": encode_params(model.params),
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n",
                          encoding="utf-8")


def load_model_doc(path: str | Path) -> dict:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != FORMAT_NAME:
        raise ModelError(f"{path}: not a {FORMAT_NAME} file")
    if doc.get("version") != FORMAT_VERSION:
        raise ModelError(f"{path}: unsupported format version {doc.get('version')}")
    return doc
