"""Command-line front end: each pipeline stage as a reproducible subcommand.

Configuration is resolved in three layers — built-in defaults, then a flat
``key = value`` config file (``--config``), then command-line flags — and
the fully resolved configuration is echoed into every artifact as
``#``-prefixed header lines (or a ``run_config`` object inside JSON
artifacts).  Every command also writes ``run_config.cfg`` next to its
artifacts; feeding that file back through ``--config`` reproduces the run.
Nothing written depends on wall-clock time or unordered iteration, so two
runs with the same configuration produce byte-identical artifacts.

Exit codes: 0 success, 1 usage error, 2 data error (naming the offending
file, with a line number where one applies), 3 internal fault.

The single environment input is ``COURTCAST_DATA_DIR``: the directory the
default ``--data`` path is resolved against.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import datetime as dt
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Callable, Sequence

from courtcast.adjust import (
    AdjustConfig,
    AveragingScheme,
    SeasonRun,
    Seeding,
    TeamSnapshot,
    run_seasons,
)
from courtcast.baselines import (
    PythagParams,
    model_predictor,
    pythag_pair_prob,
    pythag_predictor,
    round_robin_rank,
    rpi,
)
from courtcast.evaluate import BASELINE_KINDS, walk_forward_evaluate
from courtcast.features import (
    FeatureScheme,
    Label,
    MatchInstance,
    build_dataset,
    encode_match,
    encode_pairing,
    feature_names,
)
from courtcast.ingest import (
    GameLogError,
    SeasonStore,
    parse_game_log,
    parse_roster,
    write_game_log,
)
from courtcast.models import (
    ModelKind,
    load_model,
    predict,
    resolve_label,
    save_model,
    train,
)
from courtcast.stats import FourFactors, Site, game_stats
from courtcast.synthetic import (
    SyntheticLeagueSpec,
    calibrate_noise,
    generate_league,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3

COMMANDS = ("ingest", "stats", "adjust", "features", "train", "predict",
            "rank", "evaluate", "simulate", "glass-ceiling")


class UsageError(ValueError):
    """Bad invocation: unknown names, malformed values, missing arguments."""


@dataclass(frozen=True)
class RunConfig:
    """Every knob of a run.  Field names double as config-file keys and as
    command-line flags (underscores become dashes); the defaults below are
    the authoritative documentation."""

    data: str = ""               # game-log CSV; "" -> <COURTCAST_DATA_DIR>/games.csv
    roster: str = ""             # optional roster CSV filter; "" -> none
    out: str = "out"             # artifact directory
    scheme: str = "adj_eff"      # feature scheme for features/train/evaluate
    averaging: str = "alpha"     # seasonal averaging: alpha | explicit
    seeding: str = "prior_season"   # season seeding: prior_season | from_scratch
    alpha: float = 0.2           # weight of the newest game under alpha averaging
    ft_weight: float = 0.475     # free-throw weight in the possession formula
    navg_source: str = "raw"     # national-average source: raw | adjusted
    kind: str = "naive_bayes_kde"   # model kind or baseline (home_wins, pythag; rank also takes rpi)
    hyper: str = ""              # hyperparameter overrides "key=value[,key=value...]"
    pythag_y: float = 11.5       # rating exponent for the pythag baseline
    seed: int = 0                # the only randomness source of a run
    test_season: int = 0         # season to evaluate/predict against; 0 -> latest
    team_first: str = ""         # predict: first team of the pairing
    team_second: str = ""        # predict: second team of the pairing
    location: str = "neutral"    # predict: site from team_first's view (home|away|neutral)
    date: str = ""               # predict: ISO snapshot date; "" -> day after the last game
    model: str = ""              # model file for predict/rank; "" -> <out>/model.json
    n_teams: int = 8             # simulate/glass-ceiling: league size (even)
    games_per_team: int = 14     # simulate/glass-ceiling: games per team per season
    n_seasons: int = 2           # simulate/glass-ceiling: seasons to generate
    noise: float = 6.0           # simulate/glass-ceiling: per-game efficiency noise
    home_advantage: float = 0.0  # simulate/glass-ceiling: home efficiency offset
    imbalance: float = 0.0       # simulate/glass-ceiling: fraction of strength-tiered rounds
    strength_spread: float = 10.0   # simulate/glass-ceiling: latent strength spread
    bayes_target: float = 0.0    # >0: calibrate noise so best achievable accuracy ~= this
    kinds: str = ""              # glass-ceiling: comma-separated kinds; "" -> all models
    schemes: str = ""            # glass-ceiling: comma-separated schemes; "" -> adj_eff,adj_four_factors,raw


_CONVERTERS: dict[str, Callable[[str], object]] = {
    f.name: type(f.default) for f in fields(RunConfig)
}


def _coerce(key: str, raw: str) -> object:
    conv = _CONVERTERS.get(key)
    if conv is None:
        raise UsageError(f"unknown config key {key!r} "
                         f"(valid: {', '.join(sorted(_CONVERTERS))})")
    try:
        return conv(raw)
    except ValueError:
        raise UsageError(f"bad value for {key}: {raw!r} "
                         f"(expected {conv.__name__})") from None


def parse_config_file(path: str | Path) -> dict[str, object]:
    """Flat config format: one ``key = value`` per line, ``#`` comments."""
    path = Path(path)
    if not path.exists():
        raise UsageError(f"config file not found: {path}")
    out: dict[str, object] = {}
    for n, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{n}: expected 'key = value', got {line!r}")
        out[key.strip()] = _coerce(key.strip(), value.strip())
    return out


def resolve_config(file_values: dict[str, object],
                   flag_values: dict[str, object]) -> RunConfig:
    """defaults < config file < flags; validates the closed-choice fields."""
    merged = {**file_values, **flag_values}
    cfg = RunConfig(**merged)
    if not cfg.data:
        root = os.environ.get("COURTCAST_DATA_DIR", ".")
        cfg = dataclasses.replace(cfg, data=os.path.join(root, "games.csv"))
    for field, enum in (("scheme", FeatureScheme), ("averaging", AveragingScheme),
                        ("seeding", Seeding), ("location", Site)):
        try:
            enum(getattr(cfg, field))
        except ValueError:
            raise UsageError(
                f"{field} must be one of {[e.value for e in enum]}, "
                f"got {getattr(cfg, field)!r}") from None
    try:
        AdjustConfig(ft_weight=cfg.ft_weight, alpha=cfg.alpha,
                     navg_source=cfg.navg_source)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if cfg.date:
        try:
            dt.date.fromisoformat(cfg.date)
        except ValueError:
            raise UsageError(f"date must be ISO formatted, got {cfg.date!r}") from None
    return cfg


def parse_hyper(text: str) -> dict[str, object]:
    """``k=v,k2=v2`` with values read as int, then float, then string."""
    out: dict[str, object] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = part.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"hyper entries look like key=value, got {part!r}")
        for conv in (int, float, str):
            try:
                out[key.strip()] = conv(value.strip())
                break
            except ValueError:
                continue
    return out


# ---------------------------------------------------------------------------
# Artifact plumbing

def config_echo(cfg: RunConfig) -> list[str]:
    return [f"# {f.name} = {getattr(cfg, f.name)}" for f in fields(cfg)]


def _write_csv(path: Path, cfg: RunConfig, header: Sequence[str],
               rows: Sequence[Sequence[object]],
               extra_comments: Sequence[str] = ()) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        for line in config_echo(cfg):
            fh.write(line + "\n")
        for line in extra_comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_run_config(cfg: RunConfig, out: Path) -> None:
    lines = [f"{f.name} = {getattr(cfg, f.name)}" for f in fields(cfg)]
    (out / "run_config.cfg").write_text("\n".join(lines) + "\n", encoding="utf-8")


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_run_config(cfg, out)
    return out


def _say(path: Path, detail: str = "") -> None:
    print(f"wrote {path}" + (f" ({detail})" if detail else ""))


# ---------------------------------------------------------------------------
# Shared loading steps

def _load_store(cfg: RunConfig) -> SeasonStore:
    rosters = parse_roster(cfg.roster) if cfg.roster else None
    return parse_game_log(cfg.data, rosters)


def _adjust_config(cfg: RunConfig) -> AdjustConfig:
    return AdjustConfig(ft_weight=cfg.ft_weight, alpha=cfg.alpha,
                        navg_source=cfg.navg_source)


def _resolve_test_season(cfg: RunConfig, store: SeasonStore) -> int:
    if not cfg.test_season:
        return store.seasons[-1]
    if cfg.test_season not in store.seasons:
        raise GameLogError(f"season {cfg.test_season} not in {cfg.data} "
                           f"(have {store.seasons})")
    return cfg.test_season


def _runs(cfg: RunConfig, store: SeasonStore,
          through: int | None = None) -> dict[int, SeasonRun]:
    return run_seasons(store, AveragingScheme(cfg.averaging), Seeding(cfg.seeding),
                       _adjust_config(cfg), through=through)


def _league_spec(cfg: RunConfig) -> SyntheticLeagueSpec:
    try:
        spec = SyntheticLeagueSpec(
            n_teams=cfg.n_teams, games_per_team=cfg.games_per_team,
            strength_spread=cfg.strength_spread, noise=cfg.noise,
            home_advantage=cfg.home_advantage, imbalance=cfg.imbalance,
            n_seasons=cfg.n_seasons, seed=cfg.seed)
        if cfg.bayes_target:
            spec = dataclasses.replace(spec,
                                       noise=calibrate_noise(spec, cfg.bayes_target))
    except ValueError as err:
        raise UsageError(str(err)) from None
    return spec


def _model_kind(cfg: RunConfig) -> ModelKind:
    try:
        return ModelKind(cfg.kind)
    except ValueError:
        raise UsageError(f"kind must be one of {[k.value for k in ModelKind]}, "
                         f"got {cfg.kind!r}") from None


def _load_model_file(cfg: RunConfig):
    requested = _model_kind(cfg)
    path = Path(cfg.model) if cfg.model else Path(cfg.out) / "model.json"
    if not path.exists():
        raise GameLogError(f"model file not found: {path} (run `train` first)")
    model = load_model(path)
    if model.kind is not requested:
        raise GameLogError(
            f"model file {path} holds kind {model.kind.value!r}, not {cfg.kind!r}")
    return model


# ---------------------------------------------------------------------------
# Subcommands

def cmd_ingest(cfg: RunConfig) -> None:
    store = _load_store(cfg)
    out = _out_dir(cfg)
    path = out / "games.csv"
    write_game_log(store, path, header_comments=config_echo(cfg))
    n_teams = len({t for s in store.seasons for t in store.teams(s)})
    _say(path, f"{store.n_games} games, seasons {store.seasons}, {n_teams} teams")


def cmd_stats(cfg: RunConfig) -> None:
    store = _load_store(cfg)
    out = _out_dir(cfg)
    factor_cols = list(FourFactors.field_names())
    header = (["date", "season", "team", "opponent", "site", "won",
               "points", "poss", "oe", "de"]
              + [f"off_{c}" for c in factor_cols] + [f"def_{c}" for c in factor_cols])
    rows = []
    for g in store.all_games():
        for side in game_stats(g, cfg.ft_weight):
            rows.append([side.date.isoformat(), side.season, side.team,
                         side.opponent, side.site.value, int(side.won),
                         side.box.points, side.poss, side.oe, side.de]
                        + [getattr(side.off_factors, c) for c in factor_cols]
                        + [getattr(side.def_factors, c) for c in factor_cols])
    path = out / "game_stats.csv"
    _write_csv(path, cfg, header, rows)
    _say(path, f"{len(rows)} team-game rows")


_SNAPSHOT_COLS = (["adj_oe", "adj_de"]
                  + [f"adj_off_{c}" for c in FourFactors.field_names()]
                  + [f"adj_def_{c}" for c in FourFactors.field_names()]
                  + [f"avg_off_{c}" for c in FourFactors.field_names()]
                  + [f"avg_def_{c}" for c in FourFactors.field_names()])


def _snapshot_row(snap: TeamSnapshot) -> list[object]:
    vals: list[object] = [snap.adj_oe, snap.adj_de]
    for prefix in ("adj_off", "adj_def", "avg_off", "avg_def"):
        block = getattr(snap, f"{prefix}_factors")
        vals.extend(getattr(block, c) for c in FourFactors.field_names())
    return vals


def cmd_adjust(cfg: RunConfig) -> None:
    store = _load_store(cfg)
    runs = _runs(cfg, store)
    out = _out_dir(cfg)
    header = ["season", "team", "games_played"] + _SNAPSHOT_COLS
    rows = []
    for season in sorted(runs):
        final = runs[season].final
        for team in sorted(final):
            snap = final[team]
            rows.append([season, team, snap.games_played] + _snapshot_row(snap))
    path = out / "snapshots.csv"
    _write_csv(path, cfg, header, rows)
    _say(path, f"{len(rows)} team-season snapshots")


def cmd_features(cfg: RunConfig) -> None:
    store = _load_store(cfg)
    runs = _runs(cfg, store)
    scheme = FeatureScheme(cfg.scheme)
    out = _out_dir(cfg)
    header = (["date", "season", "team_first", "team_second", "location", "label"]
              + list(feature_names(scheme)))
    rows = []
    for g in store.all_games():
        snap_a, snap_b = runs[g.season].pre_match[(g.date, g.team_a, g.team_b)]
        inst = encode_match(g, snap_a, snap_b, scheme)
        rows.append([inst.date.isoformat(), inst.season, inst.team_first,
                     inst.team_second, inst.location.value, inst.label.value]
                    + list(inst.features))
    path = out / "features.csv"
    _write_csv(path, cfg, header, rows)
    _say(path, f"{len(rows)} instances, scheme {scheme.value}")


def cmd_train(cfg: RunConfig) -> None:
    kind = _model_kind(cfg)
    store = _load_store(cfg)
    test_season = _resolve_test_season(cfg, store)
    runs = _runs(cfg, store, through=test_season)
    train_set, _ = build_dataset(store, runs, FeatureScheme(cfg.scheme), test_season)
    model = train(train_set, kind, hyper=parse_hyper(cfg.hyper) or None,
                  seed=cfg.seed)
    out = _out_dir(cfg)
    path = out / "model.json"
    save_model(model, path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    doc["run_config"] = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    _say(path, f"{kind.value} on {len(train_set)} instances "
               f"from seasons before {test_season}")


def cmd_predict(cfg: RunConfig) -> None:
    if not cfg.team_first or not cfg.team_second:
        raise UsageError("predict needs --team-first and --team-second")
    if cfg.team_first == cfg.team_second:
        raise UsageError("a team cannot play itself")
    store = _load_store(cfg)
    test_season = _resolve_test_season(cfg, store)
    for team in (cfg.team_first, cfg.team_second):
        if team not in store.teams(test_season):
            raise GameLogError(
                f"team {team!r} not in season {test_season} of {cfg.data}")
    runs = _runs(cfg, store, through=test_season)
    run = runs[test_season]
    date = (dt.date.fromisoformat(cfg.date) if cfg.date
            else max(g.date for g in store.games(test_season)) + dt.timedelta(days=1))
    snap_a = run.snapshot_at(cfg.team_first, date)
    snap_b = run.snapshot_at(cfg.team_second, date)
    location = Site(cfg.location)

    if cfg.kind == "pythag":
        p = pythag_pair_prob(snap_a, snap_b, PythagParams(y=cfg.pythag_y))
        kind_name = "pythag"
    elif cfg.kind == "home_wins":
        p = {Site.HOME: 1.0, Site.AWAY: 0.0, Site.NEUTRAL: 0.5}[location]
        kind_name = "home_wins"
    else:
        model = _load_model_file(cfg)
        inst = MatchInstance(
            scheme=model.scheme, location=location,
            features=encode_pairing(snap_a, snap_b, model.scheme),
            label=None, date=date, season=test_season,
            team_first=cfg.team_first, team_second=cfg.team_second)
        _, p = predict(model, inst)
        kind_name = model.kind.value
    label = resolve_label(p, location)
    winner = cfg.team_first if label is Label.WIN else cfg.team_second

    out = _out_dir(cfg)
    path = out / "prediction.csv"
    _write_csv(path, cfg,
               ["date", "team_first", "team_second", "location", "predictor",
                "predicted_winner", "p_first_wins"],
               [[date.isoformat(), cfg.team_first, cfg.team_second,
                 location.value, kind_name, winner, p]])
    _say(path, f"{winner} (p_first={p:.3f})")


def cmd_rank(cfg: RunConfig) -> None:
    store = _load_store(cfg)
    test_season = _resolve_test_season(cfg, store)
    runs = _runs(cfg, store, through=test_season)
    run = runs[test_season]
    snapshots = [run.final[t] for t in sorted(run.final)]
    out = _out_dir(cfg)
    path = out / "rankings.csv"

    if cfg.kind == "rpi":
        games = list(store.games(test_season))
        scores = sorted(((team, rpi(team, games)) for team in sorted(run.final)),
                        key=lambda kv: (-kv[1], kv[0]))
        rows = [[n, team, score] for n, (team, score) in enumerate(scores, start=1)]
    else:
        if cfg.kind == "pythag":
            predictor = pythag_predictor(PythagParams(y=cfg.pythag_y))
        elif cfg.kind == "home_wins":
            raise UsageError("home_wins cannot rank neutral-site pairings")
        else:
            _model_kind(cfg)  # validates the name
            predictor = model_predictor(_load_model_file(cfg))
        ranking = round_robin_rank(predictor, snapshots)
        rows = [[e.rank, e.team, e.score] for e in ranking.entries]

    _write_csv(path, cfg, ["rank", "team", "score"], rows,
               extra_comments=[f"season = {test_season}", f"rater = {cfg.kind}"])
    _say(path, f"{len(rows)} teams, season {test_season}, rater {cfg.kind}")


def cmd_evaluate(cfg: RunConfig) -> None:
    store = _load_store(cfg)
    test_season = _resolve_test_season(cfg, store)
    hyper = parse_hyper(cfg.hyper)
    if cfg.kind == "home_wins" and hyper:
        raise UsageError("home_wins takes no hyperparameters")
    if cfg.kind == "pythag":
        if not set(hyper) <= {"y"}:
            raise UsageError(f"pythag accepts only the hyperparameter 'y', "
                             f"got {sorted(hyper)}")
        hyper = hyper or {"y": cfg.pythag_y}
    kind: ModelKind | str
    if cfg.kind in BASELINE_KINDS:
        kind = cfg.kind
    else:
        try:
            kind = ModelKind(cfg.kind)
        except ValueError:
            valid = [k.value for k in ModelKind] + list(BASELINE_KINDS)
            raise UsageError(f"kind must be one of {valid}, "
                             f"got {cfg.kind!r}") from None
    report = walk_forward_evaluate(
        store, test_season, kind, FeatureScheme(cfg.scheme),
        AveragingScheme(cfg.averaging), Seeding(cfg.seeding),
        seed=cfg.seed, config=_adjust_config(cfg), hyper=hyper or None)

    out = _out_dir(cfg)
    summary = [f"kind = {report.kind}", f"scheme = {report.scheme}",
               f"test_season = {report.test_season}",
               f"n_train = {report.n_train}", f"n_test = {report.n_test}",
               f"accuracy = {report.accuracy}"]
    summary += [f"confusion {k} = {v}" for k, v in sorted(report.confusion.items())]
    report_path = out / "eval_report.csv"
    _write_csv(report_path, cfg,
               ["date", "team_first", "team_second", "location",
                "predicted", "actual", "p_win"],
               [[p.date.isoformat(), p.team_first, p.team_second, p.location.value,
                 p.predicted.value, p.actual.value, p.p_win]
                for p in report.predictions],
               extra_comments=summary)
    curve_path = out / "eval_curve.csv"
    _write_csv(curve_path, cfg, ["date", "cumulative_accuracy"],
               [[d.isoformat(), acc] for d, acc in report.series])
    _say(report_path, f"accuracy {report.accuracy:.4f} on {report.n_test} games")
    _say(curve_path)


def cmd_simulate(cfg: RunConfig) -> None:
    spec = _league_spec(cfg)
    store, truth = generate_league(spec)
    out = _out_dir(cfg)
    games_path = out / "games.csv"
    write_game_log(store, games_path, header_comments=config_echo(cfg))
    truth_path = out / "league_truth.csv"
    rows = [[team, off, deff, off - deff]
            for team, (off, deff) in sorted(truth.strengths.items())]
    _write_csv(truth_path, cfg, ["team", "off_strength", "def_strength", "net"],
               rows, extra_comments=[f"noise = {truth.noise}",
                                     f"bayes_accuracy = {truth.bayes_accuracy}",
                                     f"bayes_sims = {truth.bayes_sims}"])
    _say(games_path, f"{store.n_games} games, seasons {store.seasons}")
    _say(truth_path, f"best achievable accuracy {truth.bayes_accuracy:.4f}")


def _ceiling_kinds(cfg: RunConfig) -> list[ModelKind | str]:
    if not cfg.kinds:
        return list(ModelKind)
    out: list[ModelKind | str] = []
    valid = [k.value for k in ModelKind] + list(BASELINE_KINDS)
    for name in filter(None, (p.strip() for p in cfg.kinds.split(","))):
        if name in BASELINE_KINDS:
            out.append(name)
        elif name in [k.value for k in ModelKind]:
            out.append(ModelKind(name))
        else:
            raise UsageError(f"unknown kind {name!r} in kinds (valid: {valid})")
    return out


def _ceiling_schemes(cfg: RunConfig) -> list[FeatureScheme]:
    if not cfg.schemes:
        return [FeatureScheme.ADJ_EFF, FeatureScheme.ADJ_FOUR_FACTORS,
                FeatureScheme.RAW]
    try:
        return [FeatureScheme(p.strip())
                for p in cfg.schemes.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"schemes must come from "
                         f"{[s.value for s in FeatureScheme]}, got {cfg.schemes!r}") from None


def _hyper_overrides(cfg: RunConfig) -> dict[str, dict[str, object]]:
    """Glass-ceiling hyper entries are kind-qualified: ``kind.key=value``."""
    out: dict[str, dict[str, object]] = {}
    for key, value in parse_hyper(cfg.hyper).items():
        kind, sep, param = key.partition(".")
        if not sep:
            raise UsageError(
                f"glass-ceiling hyper keys are kind-qualified "
                f"(e.g. decision_tree.min_node_fraction=0.05), got {key!r}")
        out.setdefault(kind, {})[param] = value
    return out


def cmd_glass_ceiling(cfg: RunConfig) -> None:
    from courtcast.evaluate import glass_ceiling_experiment

    spec = _league_spec(cfg)
    report = glass_ceiling_experiment(
        spec, _ceiling_kinds(cfg), _ceiling_schemes(cfg),
        AveragingScheme(cfg.averaging), Seeding(cfg.seeding),
        seed=cfg.seed, config=_adjust_config(cfg),
        hyper_overrides=_hyper_overrides(cfg) or None)
    out = _out_dir(cfg)
    path = out / "ceiling.csv"
    _write_csv(path, cfg, ["kind", "scheme", "accuracy", "gap", "n_test"],
               [[c.kind, c.scheme, c.accuracy, c.gap, c.n_test]
                for c in report.cells],
               extra_comments=[f"bound = {report.bound}",
                               f"halfwidth = {report.halfwidth}",
                               f"n_test = {report.n_test}",
                               f"test_season = {report.test_season}"])
    print(f"bound {report.bound:.4f} (99% halfwidth {report.halfwidth:.4f}, "
          f"n_test {report.n_test})")
    for c in report.cells:
        print(f"  {c.kind:18s} {c.scheme:18s} {c.accuracy:.4f} ({c.gap:+.4f})")
    _say(path)


_DISPATCH: dict[str, Callable[[RunConfig], None]] = {
    "ingest": cmd_ingest, "stats": cmd_stats, "adjust": cmd_adjust,
    "features": cmd_features, "train": cmd_train, "predict": cmd_predict,
    "rank": cmd_rank, "evaluate": cmd_evaluate, "simulate": cmd_simulate,
    "glass-ceiling": cmd_glass_ceiling,
}


# ---------------------------------------------------------------------------
# Argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="FILE",
                        help="flat key = value config file (defaults < file < flags)")
    for f in fields(RunConfig):
        flag = "--" + f.name.replace("_", "-")
        common.add_argument(flag, dest=f.name, default=argparse.SUPPRESS,
                            type=_CONVERTERS[f.name], metavar=f.name.upper(),
                            help=f"default: {f.default!r}")

    parser = _Parser(prog="courtcast",
                     description="Possession-based team ratings and match "
                                 "outcome prediction pipeline.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    helps = {
        "ingest": "validate a game log and write the normalized copy",
        "stats": "per-game possessions, efficiencies, and four factors",
        "adjust": "season-long opponent-adjusted team snapshots",
        "features": "encode every game as a model-ready instance",
        "train": "fit a classifier on seasons before the test season",
        "predict": "predict one hypothetical pairing from snapshots",
        "rank": "round-robin ranking (pythag, rpi, or a trained model)",
        "evaluate": "walk-forward accuracy report plus in-season curve",
        "simulate": "generate a synthetic league with known ground truth",
        "glass-ceiling": "model-x-scheme accuracy grid against a known bound",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name],
                       description=helps[name])
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            parser.print_help()
            return EXIT_USAGE
        flag_values = {k: v for k, v in vars(ns).items()
                       if k not in ("command", "config")}
        file_values = parse_config_file(ns.config) if ns.config else {}
        cfg = resolve_config(file_values, flag_values)
        _DISPATCH[ns.command](cfg)
        return EXIT_OK
    except SystemExit as exc:  # argparse --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as err:
        # domain errors all derive from ValueError and carry file/line context
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except Exception as err:  # pragma: no cover - reached only via a bug
        print(f"internal error: {err!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
