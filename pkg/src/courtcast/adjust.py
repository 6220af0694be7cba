"""Opponent adjustment and seasonal averaging, computed day by day.

A team's per-game efficiency says little on its own: 110 points per 100
possessions against a porous defense is less impressive than the same line
against a stingy one.  Each game value is therefore rescaled by

    adjusted = raw * national_average / opponent_counter_statistic

where the opponent's counter-statistic is their *averaged adjusted* value on
the other side of the ball (their adjusted defensive efficiency when
adjusting an offensive efficiency, and vice versa; same pattern factor by
factor).  The league definition is circular, so it is resolved forward in
time: every game on date d is adjusted against opponent averages and
national averages as of the *morning* of d — only games strictly before d
contribute.  That makes the whole series deterministic and leakage-free.

Two seasonal averaging schemes fold the per-game adjusted values into a
running team average:

  * ``alpha``    — exponential update, post = (1-a)*pre + a*game (a = 0.2);
  * ``explicit`` — weighted mean where the pre-season seed has weight 1 and
                   the i-th game of the season (1-based) has weight i+1, so
                   recent games count more and the seed fades.

The seed is either the team's end-of-prior-season averages (``prior_season``)
or the national average on the morning of the team's first game
(``from_scratch``).

Floating-point note: all accumulators fold values in one canonical order
(games by (date, team_a, team_b), side a before side b), so a run is exactly
reproducible operation by operation, not merely to rounding error.
"""

from __future__ import annotations

import bisect
import datetime as dt
from dataclasses import dataclass, field
from enum import Enum

from courtcast.ingest import GameRecord, SeasonStore
from courtcast.stats import (
    DEFAULT_FT_WEIGHT,
    FourFactors,
    GameStats,
    game_stats,
)


class AdjustmentError(ValueError):
    """Raised when an adjustment divisor or multiplier is not positive."""


class AveragingScheme(str, Enum):
    ALPHA = "alpha"
    EXPLICIT = "explicit"


class Seeding(str, Enum):
    PRIOR_SEASON = "prior_season"
    FROM_SCRATCH = "from_scratch"


@dataclass(frozen=True)
class AdjustConfig:
    """Knobs for the adjustment pipeline.

    ``navg_source`` picks what the daily national average is computed from:
    ``"raw"`` (season-to-date per-game values; the default) or ``"adjusted"``
    (the mean of current team averaged adjusted values).  The choice is
    exposed because either reading is defensible; downstream defaults never
    rely on ``"adjusted"``.
    """

    ft_weight: float = DEFAULT_FT_WEIGHT
    alpha: float = 0.2
    navg_source: str = "raw"

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise AdjustmentError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.navg_source not in ("raw", "adjusted"):
            raise AdjustmentError(f"navg_source must be 'raw' or 'adjusted', got {self.navg_source!r}")


@dataclass(frozen=True)
class LeagueMeans:
    """League-wide mean efficiencies and factors as of some morning."""

    oe: float
    de: float
    factors: FourFactors


# Used only before any game has been played (no data to average yet):
# round league-typical values, identical for every team, so they cancel in
# any within-day comparison.
NEUTRAL_BASELINE = LeagueMeans(
    oe=100.0, de=100.0,
    factors=FourFactors(efg=0.5, to_pct=0.2, or_pct=1.0 / 3.0, ftr=1.0 / 3.0),
)


@dataclass(frozen=True)
class RawMeans:
    """Season-to-date per-game means of counting stats plus points for/against.

    All zeros before a team's first game (there is nothing to average);
    callers that feed these to a model must tolerate the cold start.
    """

    fgm: float = 0.0
    fga: float = 0.0
    fgm3: float = 0.0
    ft: float = 0.0
    fta: float = 0.0
    or_: float = 0.0
    dr: float = 0.0
    to: float = 0.0
    stl: float = 0.0
    blk: float = 0.0
    ppg: float = 0.0
    pag: float = 0.0

    @staticmethod
    def field_names() -> tuple[str, ...]:
        return ("fgm", "fga", "fgm3", "ft", "fta", "or_", "dr", "to", "stl", "blk", "ppg", "pag")


@dataclass(frozen=True)
class TeamSnapshot:
    """One team's averaged profile as of a date (morning-of; pre-game).

    Built from games strictly before ``date`` only.  ``games_played`` counts
    this season's games folded in so far; at 0 every averaged field equals
    the seed.
    """

    team: str
    season: int
    date: dt.date
    games_played: int
    adj_oe: float
    adj_de: float
    adj_off_factors: FourFactors
    adj_def_factors: FourFactors
    avg_off_factors: FourFactors
    avg_def_factors: FourFactors
    raw_means: RawMeans


def adjust_value(raw: float, national_avg: float, opp_adjusted_counter: float) -> float:
    """Rescale a raw per-game value by league context and opponent quality."""
    if national_avg <= 0.0:
        raise AdjustmentError(f"national average must be positive, got {national_avg}")
    if opp_adjusted_counter <= 0.0:
        raise AdjustmentError(
            f"opponent counter-statistic must be positive, got {opp_adjusted_counter}")
    return raw * national_avg / opp_adjusted_counter


def alpha_update(pre: float, game_value: float, alpha: float) -> float:
    """Exponentially-weighted update of a running average."""
    if not 0.0 <= alpha <= 1.0:
        raise AdjustmentError(f"alpha must be in [0, 1], got {alpha}")
    return (1.0 - alpha) * pre + alpha * game_value


def explicit_weighted_average(prior_season_value: float, game_values: list[float]) -> float:
    """Weighted mean where the seed has weight 1 and game i (1-based) weight i+1."""
    num = prior_season_value
    den = 1.0
    for i, v in enumerate(game_values):
        w = float(i + 2)
        num += w * v
        den += w
    return num / den


# Keys for every seasonally-averaged quantity a team carries.
_FACTORS = FourFactors.field_names()
_ADJ_KEYS = (("adj_oe", "adj_de")
             + tuple(f"adj_off_{f}" for f in _FACTORS)
             + tuple(f"adj_def_{f}" for f in _FACTORS))
_UNADJ_KEYS = (tuple(f"avg_off_{f}" for f in _FACTORS)
               + tuple(f"avg_def_{f}" for f in _FACTORS))
_ALL_KEYS = _ADJ_KEYS + _UNADJ_KEYS
_COUNT_FIELDS = ("fgm", "fga", "fgm3", "ft", "fta", "or_", "dr", "to", "stl", "blk")


def _seed_from_means(means: LeagueMeans) -> dict[str, float]:
    seed = {"adj_oe": means.oe, "adj_de": means.de}
    for f in _FACTORS:
        v = getattr(means.factors, f)
        seed[f"adj_off_{f}"] = v
        seed[f"adj_def_{f}"] = v
        seed[f"avg_off_{f}"] = v
        seed[f"avg_def_{f}"] = v
    return seed


class _TeamState:
    """Mutable per-team accumulator for one season."""

    __slots__ = ("seed", "n", "cur", "num", "den", "raw_sums", "pts_for", "pts_against")

    def __init__(self, seed: dict[str, float]):
        self.seed = dict(seed)
        self.n = 0
        self.cur = dict(seed)            # alpha scheme state
        self.num = dict(seed)            # explicit scheme numerators (seed carries weight 1)
        self.den = 1.0
        self.raw_sums = {f: 0.0 for f in _COUNT_FIELDS}
        self.pts_for = 0.0
        self.pts_against = 0.0

    def value(self, key: str, scheme: AveragingScheme) -> float:
        if scheme is AveragingScheme.ALPHA:
            return self.cur[key]
        return self.num[key] / self.den

    def fold(self, game_values: dict[str, float], stats: GameStats,
             scheme: AveragingScheme, alpha: float) -> None:
        self.n += 1
        if scheme is AveragingScheme.ALPHA:
            for key in _ALL_KEYS:
                self.cur[key] = alpha_update(self.cur[key], game_values[key], alpha)
        else:
            w = float(self.n + 1)        # game i (1-based) carries weight i+1
            for key in _ALL_KEYS:
                self.num[key] += w * game_values[key]
            self.den += w
        for f in _COUNT_FIELDS:
            self.raw_sums[f] += getattr(stats.box, f)
        self.pts_for += stats.box.points
        self.pts_against += stats.opp_box.points

    def raw_means(self) -> RawMeans:
        if self.n == 0:
            return RawMeans()
        n = float(self.n)
        means = {f: self.raw_sums[f] / n for f in _COUNT_FIELDS}
        return RawMeans(ppg=self.pts_for / n, pag=self.pts_against / n, **means)

    def snapshot(self, team: str, season: int, date: dt.date,
                 scheme: AveragingScheme) -> TeamSnapshot:
        v = {key: self.value(key, scheme) for key in _ALL_KEYS}
        return TeamSnapshot(
            team=team, season=season, date=date, games_played=self.n,
            adj_oe=v["adj_oe"], adj_de=v["adj_de"],
            adj_off_factors=FourFactors(*(v[f"adj_off_{f}"] for f in _FACTORS)),
            adj_def_factors=FourFactors(*(v[f"adj_def_{f}"] for f in _FACTORS)),
            avg_off_factors=FourFactors(*(v[f"avg_off_{f}"] for f in _FACTORS)),
            avg_def_factors=FourFactors(*(v[f"avg_def_{f}"] for f in _FACTORS)),
            raw_means=self.raw_means(),
        )


class _NationalSums:
    """Running league-wide sums of raw per-game observations."""

    __slots__ = ("count", "oe", "de", "factors")

    def __init__(self):
        self.count = 0
        self.oe = 0.0
        self.de = 0.0
        self.factors = {f: 0.0 for f in _FACTORS}

    def fold(self, stats: GameStats) -> None:
        self.count += 1
        self.oe += stats.oe
        self.de += stats.de
        for f in _FACTORS:
            self.factors[f] += getattr(stats.off_factors, f)

    def means(self) -> LeagueMeans | None:
        if self.count == 0:
            return None
        n = float(self.count)
        return LeagueMeans(
            oe=self.oe / n, de=self.de / n,
            factors=FourFactors(*(self.factors[f] / n for f in _FACTORS)),
        )


@dataclass
class NationalAverages:
    """Daily league means for one season, queryable for any morning.

    ``as_of(d)`` returns the means over all games strictly before ``d``
    (the neutral baseline before any game has been played).
    """

    season: int
    dates: list[dt.date] = field(default_factory=list)
    morning: list[LeagueMeans] = field(default_factory=list)
    end_of_season: LeagueMeans | None = None

    def as_of(self, date: dt.date) -> LeagueMeans:
        i = bisect.bisect_left(self.dates, date)
        if i < len(self.dates):
            return self.morning[i]
        if self.end_of_season is not None:
            return self.end_of_season
        return NEUTRAL_BASELINE


@dataclass
class SeasonRun:
    """Everything produced by one season's day-by-day pass.

    ``series`` holds each team's pre-match snapshots in chronological order;
    ``pre_match`` joins them to games; ``final`` is each team's state after
    its last game (the next season's seed under prior_season seeding).
    """

    season: int
    scheme: AveragingScheme
    seeding: Seeding
    config: AdjustConfig
    series: dict[str, list[TeamSnapshot]]
    pre_match: dict[tuple[dt.date, str, str], tuple[TeamSnapshot, TeamSnapshot]]
    final: dict[str, TeamSnapshot]
    national: NationalAverages
    _post: dict[str, list[TeamSnapshot]]
    _seeds: dict[str, dict[str, float]]
    _prior_finals: dict[str, dict[str, float]]

    def snapshot_at(self, team: str, date: dt.date) -> TeamSnapshot:
        """Team state on the morning of ``date`` (games strictly before it).

        Teams with no games by then report their seed; under from_scratch
        seeding that is the national average as of the queried morning.
        """
        played = [s for s in self._post.get(team, []) if s.date < date]
        if played:
            return _redate(played[-1], date)
        seed = self._seeds.get(team)
        if seed is None:
            if self.seeding is Seeding.PRIOR_SEASON and team in self._prior_finals:
                seed = self._prior_finals[team]
            else:
                seed = _seed_from_means(self.national.as_of(date))
        state = _TeamState(seed)
        return state.snapshot(team, self.season, date, self.scheme)

    def teams(self) -> list[str]:
        pool = set(self.series) | set(self._seeds) | set(self._prior_finals)
        return sorted(pool)


def _redate(snap: TeamSnapshot, date: dt.date) -> TeamSnapshot:
    return TeamSnapshot(**{**snap.__dict__, "date": date})


def _final_values(snap: TeamSnapshot) -> dict[str, float]:
    vals = {"adj_oe": snap.adj_oe, "adj_de": snap.adj_de}
    for f in _FACTORS:
        vals[f"adj_off_{f}"] = getattr(snap.adj_off_factors, f)
        vals[f"adj_def_{f}"] = getattr(snap.adj_def_factors, f)
        vals[f"avg_off_{f}"] = getattr(snap.avg_off_factors, f)
        vals[f"avg_def_{f}"] = getattr(snap.avg_def_factors, f)
    return vals


def _adjusted_source_means(states: dict[str, _TeamState],
                           scheme: AveragingScheme) -> LeagueMeans | None:
    played = sorted(t for t, s in states.items() if s.n > 0)
    if not played:
        return None
    n = float(len(played))
    oe = de = 0.0
    fac = {f: 0.0 for f in _FACTORS}
    for t in played:
        st = states[t]
        oe += st.value("adj_oe", scheme)
        de += st.value("adj_de", scheme)
        for f in _FACTORS:
            fac[f] += st.value(f"adj_off_{f}", scheme)
            fac[f] += st.value(f"adj_def_{f}", scheme)
    return LeagueMeans(oe=oe / n, de=de / n,
                       factors=FourFactors(*(fac[f] / (2.0 * n) for f in _FACTORS)))


def run_season(store: SeasonStore, season: int,
               scheme: AveragingScheme = AveragingScheme.EXPLICIT,
               seeding: Seeding = Seeding.PRIOR_SEASON,
               config: AdjustConfig = AdjustConfig(),
               _prior_finals: dict[str, dict[str, float]] | None = None) -> SeasonRun:
    """Process one season chronologically into pre-match snapshots.

    Under prior_season seeding, earlier stored seasons are processed first
    (earliest season first, each seeding the next); teams with no prior
    history fall back to from_scratch seeding individually.
    """
    if _prior_finals is None:
        if seeding is Seeding.PRIOR_SEASON:
            _prior_finals = {}
            for prev in [s for s in store.seasons if s < season]:
                prev_run = run_season(store, prev, scheme, seeding, config,
                                      _prior_finals=_prior_finals)
                _prior_finals = {t: _final_values(s) for t, s in prev_run.final.items()}
        else:
            _prior_finals = {}

    games = store.games(season)
    states: dict[str, _TeamState] = {}
    series: dict[str, list[TeamSnapshot]] = {}
    post: dict[str, list[TeamSnapshot]] = {}
    pre_match: dict[tuple[dt.date, str, str], tuple[TeamSnapshot, TeamSnapshot]] = {}
    seeds_used: dict[str, dict[str, float]] = {}
    nat_sums = _NationalSums()
    national = NationalAverages(season=season)

    def morning_means() -> LeagueMeans:
        if config.navg_source == "adjusted":
            means = _adjusted_source_means(states, scheme)
        else:
            means = nat_sums.means()
        return means if means is not None else NEUTRAL_BASELINE

    def ensure_seeded(team: str, navg: LeagueMeans) -> _TeamState:
        state = states.get(team)
        if state is None:
            if seeding is Seeding.PRIOR_SEASON and team in _prior_finals:
                seed = dict(_prior_finals[team])
            else:
                seed = _seed_from_means(navg)
            state = _TeamState(seed)
            states[team] = state
            seeds_used[team] = dict(seed)
            series[team] = []
            post[team] = []
        return state

    i = 0
    while i < len(games):
        date = games[i].date
        day = []
        while i < len(games) and games[i].date == date:
            day.append(games[i])
            i += 1

        navg = morning_means()
        national.dates.append(date)
        national.morning.append(navg)

        # Morning pass: snapshots and adjusted game values, all against
        # morning state (same-day games never see each other).
        folds: list[tuple[str, dict[str, float], GameStats]] = []
        for g in day:
            state_a = ensure_seeded(g.team_a, navg)
            state_b = ensure_seeded(g.team_b, navg)
            snap_a = state_a.snapshot(g.team_a, season, date, scheme)
            snap_b = state_b.snapshot(g.team_b, season, date, scheme)
            pre_match[(date, g.team_a, g.team_b)] = (snap_a, snap_b)
            series[g.team_a].append(snap_a)
            series[g.team_b].append(snap_b)
            stats_a, stats_b = game_stats(g, config.ft_weight)
            for stats, opp_snap in ((stats_a, snap_b), (stats_b, snap_a)):
                gv = {
                    "adj_oe": adjust_value(stats.oe, navg.oe, opp_snap.adj_de),
                    "adj_de": adjust_value(stats.de, navg.de, opp_snap.adj_oe),
                }
                for f in _FACTORS:
                    n_f = getattr(navg.factors, f)
                    gv[f"adj_off_{f}"] = adjust_value(
                        getattr(stats.off_factors, f), n_f,
                        getattr(opp_snap.adj_def_factors, f))
                    gv[f"adj_def_{f}"] = adjust_value(
                        getattr(stats.def_factors, f), n_f,
                        getattr(opp_snap.adj_off_factors, f))
                    gv[f"avg_off_{f}"] = getattr(stats.off_factors, f)
                    gv[f"avg_def_{f}"] = getattr(stats.def_factors, f)
                folds.append((stats.team, gv, stats))

        # Evening pass: fold the day's games into team states and league sums.
        for team, gv, stats in folds:
            states[team].fold(gv, stats, scheme, config.alpha)
            post[team].append(states[team].snapshot(team, season, date, scheme))
        for _, _, stats in folds:
            nat_sums.fold(stats)

    national.end_of_season = (nat_sums.means() if config.navg_source != "adjusted"
                              else _adjusted_source_means(states, scheme)) or NEUTRAL_BASELINE

    final = {team: (post[team][-1] if post[team]
                    else states[team].snapshot(team, season,
                                               national.dates[-1] if national.dates
                                               else dt.date(season, 6, 30), scheme))
             for team in states}
    return SeasonRun(
        season=season, scheme=scheme, seeding=seeding, config=config,
        series=series, pre_match=pre_match, final=final, national=national,
        _post=post, _seeds=seeds_used, _prior_finals=_prior_finals,
    )


def run_seasons(store: SeasonStore,
                scheme: AveragingScheme = AveragingScheme.EXPLICIT,
                seeding: Seeding = Seeding.PRIOR_SEASON,
                config: AdjustConfig = AdjustConfig(),
                through: int | None = None) -> dict[int, SeasonRun]:
    """Run every stored season in order, chaining seeds when applicable."""
    runs: dict[int, SeasonRun] = {}
    prior_finals: dict[str, dict[str, float]] = {}
    for season in store.seasons:
        if through is not None and season > through:
            break
        run = run_season(store, season, scheme, seeding, config,
                         _prior_finals=prior_finals if seeding is Seeding.PRIOR_SEASON else {})
        runs[season] = run
        prior_finals = {t: _final_values(s) for t, s in run.final.items()}
    return runs
