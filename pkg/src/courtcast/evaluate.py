"""Walk-forward evaluation and the accuracy-ceiling experiment.

Evaluation is strictly time-ordered: a model trains on all seasons before
the test season and predicts each test game from pre-match snapshots only.
Reports carry every prediction, the cumulative in-season accuracy series,
and the resolved configuration, and serialize byte-identically for fixed
seeds.

The ceiling experiment runs a (model kind x feature scheme) grid on a
synthetic league whose best achievable accuracy is known, reporting each
cell's gap to that bound.
"""

from __future__ import annotations

import datetime as dt
import json
import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable, Mapping, Sequence

from courtcast.adjust import (
    AdjustConfig,
    AveragingScheme,
    SeasonRun,
    Seeding,
    run_seasons,
)
from courtcast.baselines import PythagParams, pythag_pair_prob
from courtcast.features import FeatureScheme, Label, MatchInstance, build_dataset
from courtcast.ingest import SeasonStore
from courtcast.models import ModelKind, predict, resolve_label, train
from courtcast.stats import Site
from courtcast.synthetic import SyntheticLeagueSpec, generate_league


class EvalError(ValueError):
    """Raised for invalid evaluation inputs."""


#: Predictor kinds that need no training beyond the snapshot pipeline.
BASELINE_KINDS = ("home_wins", "pythag")

PredictFn = Callable[[MatchInstance], tuple[Label, float]]


def binomial_halfwidth(p: float, n: int, confidence: float = 0.99) -> float:
    """Normal-approximation half-width of a binomial proportion CI."""
    if not 0.0 <= p <= 1.0:
        raise EvalError(f"proportion must be in [0, 1], got {p}")
    if n < 1:
        raise EvalError(f"sample size must be positive, got {n}")
    z = NormalDist().inv_cdf(0.5 * (1.0 + confidence))
    return z * math.sqrt(p * (1.0 - p) / n)


@dataclass(frozen=True)
class Prediction:
    date: dt.date
    team_first: str
    team_second: str
    location: Site
    predicted: Label
    actual: Label
    p_win: float

    @property
    def correct(self) -> bool:
        return self.predicted is self.actual


@dataclass(frozen=True)
class EvalReport:
    """One walk-forward cell: every prediction plus summary statistics."""

    test_season: int
    kind: str
    scheme: str
    averaging: str
    seeding: str
    seed: int
    n_train: int
    n_test: int
    accuracy: float
    confusion: dict[str, int]
    predictions: tuple[Prediction, ...]
    series: tuple[tuple[dt.date, float], ...]
    config: dict[str, object]

    def as_dict(self) -> dict:
        return {
            "test_season": self.test_season, "kind": self.kind,
            "scheme": self.scheme, "averaging": self.averaging,
            "seeding": self.seeding, "seed": self.seed,
            "n_train": self.n_train, "n_test": self.n_test,
            "accuracy": self.accuracy, "confusion": dict(self.confusion),
            "config": dict(self.config),
            "series": [[d.isoformat(), acc] for d, acc in self.series],
            "predictions": [
                [p.date.isoformat(), p.team_first, p.team_second,
                 p.location.value, p.predicted.value, p.actual.value, p.p_win]
                for p in self.predictions],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=1) + "\n"


def evaluate_predictor(instances: Sequence[MatchInstance], predict_fn: PredictFn,
                       *, test_season: int, kind: str, scheme: str,
                       averaging: str, seeding: str, seed: int,
                       n_train: int, config: Mapping[str, object]) -> EvalReport:
    """Score a predictor on labeled instances and assemble the report.

    Instances are processed in canonical (date, teams) order regardless of
    the order given, so the report never depends on evaluation order.
    """
    if not instances:
        raise EvalError("nothing to evaluate")
    if any(inst.label is None for inst in instances):
        raise EvalError("evaluation instances must be labeled")
    ordered = sorted(instances, key=lambda i: (i.date, i.team_first, i.team_second))

    preds = []
    confusion = {"pred_win_actual_win": 0, "pred_win_actual_loss": 0,
                 "pred_loss_actual_win": 0, "pred_loss_actual_loss": 0}
    for inst in ordered:
        predicted, p = predict_fn(inst)
        confusion[f"pred_{predicted.value}_actual_{inst.label.value}"] += 1
        preds.append(Prediction(
            date=inst.date, team_first=inst.team_first, team_second=inst.team_second,
            location=inst.location, predicted=predicted, actual=inst.label,
            p_win=float(p)))

    n = len(preds)
    n_correct = sum(p.correct for p in preds)
    series, seen, hits = [], 0, 0
    for i, p in enumerate(preds):
        seen, hits = seen + 1, hits + p.correct
        last_of_day = i + 1 == n or preds[i + 1].date != p.date
        if last_of_day:
            series.append((p.date, hits / seen))

    return EvalReport(
        test_season=test_season, kind=kind, scheme=scheme, averaging=averaging,
        seeding=seeding, seed=seed, n_train=n_train, n_test=n,
        accuracy=n_correct / n, confusion=confusion,
        predictions=tuple(preds), series=tuple(series), config=dict(config))


def accuracy_curve(report: EvalReport) -> list[tuple[dt.date, float]]:
    """Cumulative accuracy by date; the last point equals the report total."""
    if not report.predictions:
        raise EvalError("report holds no predictions")
    return list(report.series)


def _baseline_predict_fn(kind: str, hyper: Mapping[str, object] | None,
                         run: SeasonRun) -> tuple[PredictFn, dict]:
    if kind == "home_wins":
        if hyper:
            raise EvalError(f"home_wins takes no hyperparameters, got {sorted(hyper)}")

        def home_fn(inst: MatchInstance) -> tuple[Label, float]:
            p = {Site.HOME: 1.0, Site.AWAY: 0.0, Site.NEUTRAL: 0.5}[inst.location]
            return resolve_label(p, inst.location), p

        return home_fn, {}

    if kind == "pythag":
        unknown = set(hyper or {}) - {"y"}
        if unknown:
            raise EvalError(f"unknown hyperparameter {sorted(unknown)} for pythag "
                            f"(valid: ['y'])")
        resolved = {"y": float((hyper or {}).get("y", 11.5))}
        params = PythagParams(y=resolved["y"])

        def pythag_fn(inst: MatchInstance) -> tuple[Label, float]:
            snap_a, snap_b = run.pre_match[(inst.date, inst.team_first, inst.team_second)]
            p = pythag_pair_prob(snap_a, snap_b, params)
            return resolve_label(p, inst.location), p

        return pythag_fn, resolved

    raise EvalError(f"unknown predictor kind {kind!r}; "
                    f"expected a model kind or one of {BASELINE_KINDS}")


def _resolve_kind(kind: ModelKind | str) -> ModelKind | str:
    if isinstance(kind, ModelKind) or kind in BASELINE_KINDS:
        return kind
    try:
        return ModelKind(kind)
    except ValueError:
        raise EvalError(f"unknown predictor kind {kind!r}; expected one of "
                        f"{[k.value for k in ModelKind] + list(BASELINE_KINDS)}") from None


def _evaluate_cell(runs: dict[int, SeasonRun],
                   train_set: list[MatchInstance], test_set: list[MatchInstance],
                   test_season: int, kind: ModelKind | str, scheme: FeatureScheme,
                   averaging: AveragingScheme, seeding: Seeding,
                   config: AdjustConfig, seed: int,
                   hyper: Mapping[str, object] | None) -> EvalReport:
    kind = _resolve_kind(kind)
    if isinstance(kind, ModelKind):
        model = train(train_set, kind, hyper=dict(hyper) if hyper else None, seed=seed)
        predict_fn: PredictFn = lambda inst: predict(model, inst)
        kind_name, resolved = model.kind.value, dict(model.hyper)
    else:
        predict_fn, resolved = _baseline_predict_fn(kind, hyper, runs[test_season])
        kind_name = kind

    echo = {"alpha": config.alpha, "ft_weight": config.ft_weight,
            "navg_source": config.navg_source, "hyper": resolved}
    return evaluate_predictor(
        test_set, predict_fn, test_season=test_season, kind=kind_name,
        scheme=scheme.value, averaging=averaging.value, seeding=seeding.value,
        seed=seed, n_train=len(train_set), config=echo)


def walk_forward_evaluate(store: SeasonStore, test_season: int,
                          kind: ModelKind | str, scheme: FeatureScheme,
                          averaging: AveragingScheme = AveragingScheme.ALPHA,
                          seeding: Seeding = Seeding.PRIOR_SEASON, *,
                          seed: int = 0, config: AdjustConfig | None = None,
                          hyper: Mapping[str, object] | None = None) -> EvalReport:
    """Train on all seasons before ``test_season``, score on its games.

    ``kind`` is a trainable :class:`ModelKind` or one of the baseline
    strings in :data:`BASELINE_KINDS` ("home_wins" picks the home side,
    "pythag" compares rating-derived win probabilities).
    """
    config = config or AdjustConfig()
    scheme = FeatureScheme(scheme)
    runs = run_seasons(store, AveragingScheme(averaging), Seeding(seeding),
                       config, through=test_season)
    train_set, test_set = build_dataset(store, runs, scheme, test_season)
    return _evaluate_cell(runs, train_set, test_set, test_season, kind,
                          scheme, AveragingScheme(averaging), Seeding(seeding),
                          config, seed, hyper)


# ---------------------------------------------------------------------------
# Accuracy-ceiling experiment

@dataclass(frozen=True)
class CeilingCell:
    kind: str
    scheme: str
    accuracy: float
    gap: float      # accuracy - bound; positive means the bound was beaten
    n_test: int


@dataclass(frozen=True)
class CeilingReport:
    """Accuracy grid on a league with a known best achievable accuracy."""

    bound: float
    halfwidth: float          # 99% binomial half-width at the bound
    n_test: int
    test_season: int
    cells: tuple[CeilingCell, ...]
    config: dict[str, object]

    def cell(self, kind: str, scheme: str) -> CeilingCell:
        for c in self.cells:
            if c.kind == str(kind) and c.scheme == str(scheme):
                return c
        raise KeyError((kind, scheme))

    def as_dict(self) -> dict:
        return {
            "bound": self.bound, "halfwidth": self.halfwidth,
            "n_test": self.n_test, "test_season": self.test_season,
            "config": dict(self.config),
            "cells": [[c.kind, c.scheme, c.accuracy, c.gap, c.n_test]
                      for c in self.cells],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=1) + "\n"


def glass_ceiling_experiment(
        spec: SyntheticLeagueSpec,
        kinds: Sequence[ModelKind | str],
        schemes: Sequence[FeatureScheme],
        averaging: AveragingScheme = AveragingScheme.ALPHA,
        seeding: Seeding = Seeding.PRIOR_SEASON, *,
        seed: int = 0, config: AdjustConfig | None = None,
        hyper_overrides: Mapping[str, Mapping[str, object]] | None = None,
        bayes_sims: int = 100_000, test_season: int | None = None) -> CeilingReport:
    """Run every (kind, scheme) cell against a known accuracy bound.

    The league is generated from ``spec`` (its last season is the test
    season unless given), each cell is a full walk-forward evaluation, and
    the recorded best achievable accuracy becomes the bound every cell is
    compared to.  ``hyper_overrides`` maps a kind name to hyperparameter
    overrides for that kind's training runs.
    """
    if spec.n_seasons < 2 and test_season is None:
        raise EvalError("the experiment needs at least one season before the test season")
    store, truth = generate_league(spec, bayes_sims=bayes_sims)
    if test_season is None:
        test_season = spec.first_season + spec.n_seasons - 1
    config = config or AdjustConfig()
    averaging, seeding = AveragingScheme(averaging), Seeding(seeding)
    overrides = {str(getattr(k, "value", k)): dict(v)
                 for k, v in (hyper_overrides or {}).items()}

    runs = run_seasons(store, averaging, seeding, config, through=test_season)
    cells = []
    n_test = 0
    for scheme in (FeatureScheme(s) for s in schemes):
        train_set, test_set = build_dataset(store, runs, scheme, test_season)
        n_test = len(test_set)
        for kind in kinds:
            kind_name = str(getattr(kind, "value", kind))
            report = _evaluate_cell(
                runs, train_set, test_set, test_season, kind, scheme,
                averaging, seeding, config, seed, overrides.get(kind_name))
            cells.append(CeilingCell(
                kind=report.kind, scheme=report.scheme, accuracy=report.accuracy,
                gap=report.accuracy - truth.bayes_accuracy, n_test=report.n_test))

    echo = {"alpha": config.alpha, "ft_weight": config.ft_weight,
            "navg_source": config.navg_source, "seed": seed,
            "averaging": averaging.value, "seeding": seeding.value,
            "hyper_overrides": overrides, "bayes_sims": bayes_sims,
            "spec": {"n_teams": spec.n_teams, "games_per_team": spec.games_per_team,
                     "noise": spec.noise, "home_advantage": spec.home_advantage,
                     "strength_spread": spec.strength_spread,
                     "imbalance": spec.imbalance,
                     "n_seasons": spec.n_seasons, "first_season": spec.first_season,
                     "seed": spec.seed}}
    return CeilingReport(
        bound=truth.bayes_accuracy,
        halfwidth=binomial_halfwidth(truth.bayes_accuracy, n_test),
        n_test=n_test, test_season=test_season, cells=tuple(cells), config=echo)
