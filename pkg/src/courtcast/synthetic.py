"""Synthetic leagues with known latent structure.

Each team carries an offensive and a defensive strength on the efficiency
scale (100 = average).  A game draws each side's realized efficiency around
``off * opp_def / 100`` (plus a home offset and Gaussian noise), converts it
to integer points on a fixed possession budget, and then builds a full box
score consistent with those points — so the possession and efficiency
formulas applied to the generated data recover the latent structure.

Because the winner is a deterministic function of the two point totals, the
generator can also grade itself: for every distinct matchup it records the
exact win probability (by Monte Carlo over the same outcome function) and
from those the best accuracy any predictor could reach on the schedule.
No model evaluated on the league should beat that number by more than
sampling error.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from courtcast.ingest import BoxScore, GameRecord, Location, SeasonStore
from courtcast.stats import PACE_FACTOR


class SyntheticError(ValueError):
    """Raised for infeasible league specifications."""


# Per-side possession budget (before the pace factor).  Points scale is
# points ~= eff * POINTS_PER_EFF, so one point ~ 2.6 efficiency units.
RAW_POSS = 40
POINTS_PER_EFF = PACE_FACTOR * RAW_POSS / 100.0


def team_names(n: int) -> tuple[str, ...]:
    width = max(2, len(str(n - 1)))
    return tuple(f"t{i:0{width}d}" for i in range(n))


def spread_strengths(n: int, spread: float = 10.0) -> tuple[tuple[float, float], ...]:
    """Evenly spaced (off, def) strengths: net strength spans +-2*spread.

    Assigned in weak/strong alternation so that team-id order carries no
    strength information (the canonical first team of a pairing must not be
    systematically the weaker side, or labels would be single-class).
    """
    deltas = np.linspace(-spread, spread, n)
    lo, hi, zigzag = 0, n - 1, []
    while lo <= hi:
        zigzag.append(deltas[lo])
        lo += 1
        if lo <= hi:
            zigzag.append(deltas[hi])
            hi -= 1
    return tuple((100.0 + d, 100.0 - d) for d in zigzag)


@dataclass(frozen=True)
class SyntheticLeagueSpec:
    """Parameters of a generated league.

    ``strengths`` holds one (offensive, defensive) pair per team; when
    omitted, teams are evenly spaced over ``+-strength_spread``.  ``noise``
    is the standard deviation of each side's per-game efficiency draw, and
    ``home_advantage`` is added to the home side's expected efficiency.
    """

    n_teams: int
    games_per_team: int
    strengths: tuple[tuple[float, float], ...] | None = None
    strength_spread: float = 10.0
    noise: float = 6.0
    home_advantage: float = 0.0
    # fraction of rounds played within strength-tiered halves of the league;
    # 0 is a balanced rotation, higher values skew schedule strength so that
    # raw scoring averages mislead and opponent adjustment has work to do
    imbalance: float = 0.0
    n_seasons: int = 1
    first_season: int = 2021
    seed: int = 0

    def __post_init__(self):
        if self.n_teams < 2:
            raise SyntheticError(f"need at least 2 teams, got {self.n_teams}")
        if self.n_teams % 2:
            raise SyntheticError(
                f"odd team count {self.n_teams}: every team plays each round")
        if self.games_per_team < 1:
            raise SyntheticError("games_per_team must be >= 1")
        if self.noise < 0:
            raise SyntheticError(f"noise must be >= 0, got {self.noise}")
        if not 0.0 <= self.imbalance <= 1.0:
            raise SyntheticError(f"imbalance must be in [0, 1], got {self.imbalance}")
        if self.imbalance > 0 and self.n_teams % 4:
            raise SyntheticError(
                f"tiered scheduling splits the league into two even halves; "
                f"{self.n_teams} teams cannot form them")
        if self.n_seasons < 1:
            raise SyntheticError("n_seasons must be >= 1")
        if self.strengths is not None:
            if len(self.strengths) != self.n_teams:
                raise SyntheticError(
                    f"{len(self.strengths)} strength pairs for {self.n_teams} teams")
            for o, d in self.strengths:
                if o <= 0 or d <= 0:
                    raise SyntheticError(f"strengths must be positive, got ({o}, {d})")

    def resolved_strengths(self) -> dict[str, tuple[float, float]]:
        pairs = self.strengths or spread_strengths(self.n_teams, self.strength_spread)
        return dict(zip(team_names(self.n_teams), pairs))


@dataclass(frozen=True)
class LeagueTruth:
    """Hidden generative ground truth, kept out of the game log."""

    strengths: dict[str, tuple[float, float]]
    noise: float
    home_advantage: float
    bayes_accuracy: float     # mean over scheduled games of max(p, 1-p)
    bayes_sims: int
    matchup_probs: dict[tuple[str, str, Location], float]  # p(team_a wins)

    def net_order(self) -> list[str]:
        return sorted(self.strengths,
                      key=lambda t: (-(self.strengths[t][0] - self.strengths[t][1]), t))

    def favorite(self, team_a: str, team_b: str, location: Location) -> str:
        p = self.matchup_probs[(team_a, team_b, location)]
        return team_a if p >= 0.5 else team_b


def _circle_round(members: list[int], r: int) -> list[tuple[int, int, bool]]:
    """Round r of a circle-method rotation over ``members``.

    Each member plays exactly once; pairings repeat with home and away
    swapped once a full cycle of len-1 rounds is exhausted.
    """
    n = len(members)
    others = members[1:]
    shift = r % (n - 1)
    cycle = r // (n - 1)
    line = [members[0]] + others[shift:] + others[:shift]
    return [(line[k], line[n - 1 - k], (k + cycle) % 2 == 0)
            for k in range(n // 2)]


def _schedule(spec: SyntheticLeagueSpec) -> list[list[tuple[int, int, bool]]]:
    """Rounds of (i, j, home_is_i) index triples, one game per team per round.

    A fraction ``spec.imbalance`` of rounds is played within strength-tiered
    halves (top half vs itself, bottom half vs itself); the rest rotate over
    the whole league, which keeps the schedule graph connected.
    """
    strengths = list(spec.resolved_strengths().values())
    by_net = sorted(range(spec.n_teams),
                    key=lambda i: (-(strengths[i][0] - strengths[i][1]), i))
    top, bottom = by_net[:spec.n_teams // 2], by_net[spec.n_teams // 2:]

    rounds, err, r_tier, r_full = [], 0.0, 0, 0
    for _ in range(spec.games_per_team):
        err += spec.imbalance
        if err >= 1.0 - 1e-9:
            err -= 1.0
            rounds.append(_circle_round(top, r_tier) + _circle_round(bottom, r_tier))
            r_tier += 1
        else:
            rounds.append(_circle_round(list(range(spec.n_teams)), r_full))
            r_full += 1
    return rounds


def expected_efficiency(off: float, opp_def: float, home_edge: float = 0.0) -> float:
    return off * opp_def / 100.0 + home_edge


def _points_from_effs(eff_a, eff_b, mu_a: float, mu_b: float):
    """Map realized efficiencies to integer points; ties go to the higher
    expectation (the first side when expectations are equal).  Works on
    scalars and on numpy arrays alike."""
    pa = np.maximum(np.rint(np.asarray(eff_a) * POINTS_PER_EFF), 4.0)
    pb = np.maximum(np.rint(np.asarray(eff_b) * POINTS_PER_EFF), 4.0)
    tie = pa == pb
    if mu_a >= mu_b:
        pa = pa + tie
    else:
        pb = pb + tie
    return pa, pb


def _offense_line(points: int) -> dict[str, int]:
    """Shooting and turnover counts consistent with an integer point total.

    Rates are tied to the realized efficiency so that each factor carries
    signal: better offenses shoot a higher eFG% and turn the ball over less.
    The offensive rebound count is whatever the possession identity demands:
        RAW_POSS = fga - or - to + 0.475 * fta.
    """
    eff = points / POINTS_PER_EFF
    fta = round(0.25 * RAW_POSS)
    ft = min(round(0.2 * points), fta, points)
    field = points - ft
    fgm3 = min(round(field / 7.5), field // 3)
    if (field - 3 * fgm3) % 2:
        if 3 * (fgm3 + 1) <= field:
            fgm3 += 1
        elif fgm3 >= 1:
            fgm3 -= 1
        else:  # field == 1: shift the odd point onto the free-throw line
            ft, field = (ft + 1, field - 1) if ft < fta else (ft - 1, field + 1)
    fgm2 = (field - 3 * fgm3) // 2
    fgm = fgm2 + fgm3
    efg = 0.15 * (1.0 + eff / 100.0)
    fga = max(fgm, round((fgm + 0.5 * fgm3) / efg))
    to = max(2, round((0.26 - 0.08 * eff / 100.0) * RAW_POSS))
    or_ = max(2, round(fga - to + 0.475 * fta - RAW_POSS))
    return {"fgm": fgm, "fga": fga, "fgm3": fgm3, "ft": ft, "fta": fta,
            "or_": or_, "to": to, "points": points}


def _boxes(points_a: int, points_b: int) -> tuple[BoxScore, BoxScore]:
    a, b = _offense_line(points_a), _offense_line(points_b)
    stl, blk = round(0.07 * RAW_POSS), round(0.05 * RAW_POSS)
    box_a = BoxScore(dr=max(0, (b["fga"] - b["fgm"]) - b["or_"]), stl=stl, blk=blk, **a)
    box_b = BoxScore(dr=max(0, (a["fga"] - a["fgm"]) - a["or_"]), stl=stl, blk=blk, **b)
    box_a.validate()
    box_b.validate()
    return box_a, box_b


def _matchup_prob(mu_a: float, mu_b: float, noise: float,
                  rng: np.random.Generator, sims: int) -> float:
    """P(side a wins) under the exact outcome function, by Monte Carlo."""
    if noise == 0.0:
        pa, pb = _points_from_effs(mu_a, mu_b, mu_a, mu_b)
        return 1.0 if pa > pb else 0.0
    draws = rng.standard_normal((2, sims))
    pa, pb = _points_from_effs(mu_a + noise * draws[0], mu_b + noise * draws[1],
                               mu_a, mu_b)
    return float(np.mean(pa > pb))


def generate_league(spec: SyntheticLeagueSpec,
                    bayes_sims: int = 100_000) -> tuple[SeasonStore, LeagueTruth]:
    """Simulate a league and record its generative ground truth.

    Returns the game log as a :class:`SeasonStore` plus a
    :class:`LeagueTruth` carrying the latent strengths, the exact win
    probability of every scheduled matchup, and the schedule-weighted best
    achievable accuracy (``bayes_sims`` Monte-Carlo outcomes per distinct
    matchup; at least 1e5 for a trustworthy third digit).
    """
    if bayes_sims < 1:
        raise SyntheticError("bayes_sims must be >= 1")
    names = team_names(spec.n_teams)
    strengths = spec.resolved_strengths()
    rounds = _schedule(spec)
    ss = np.random.SeedSequence(spec.seed)
    rng_games, rng_bayes = (np.random.default_rng(s) for s in ss.spawn(2))

    # Expected efficiencies depend only on (matchup, site), not the season:
    # collect the distinct classes first so simulation effort is shared.
    classes: dict[tuple[str, str, Location], tuple[float, float]] = {}
    schedule: list[tuple[int, dt.date, str, str, Location]] = []
    for season_idx in range(spec.n_seasons):
        season = spec.first_season + season_idx
        start = dt.date(season, 11, 1)
        for r, games in enumerate(rounds):
            date = start + dt.timedelta(days=2 * r)
            for i, j, home_is_i in games:
                first, second = names[i], names[j]
                loc = Location.HOME_A if home_is_i else Location.HOME_B
                if first > second:
                    first, second = second, first
                    loc = loc.swapped()
                key = (first, second, loc)
                if key not in classes:
                    off_a, def_a = strengths[first]
                    off_b, def_b = strengths[second]
                    edge_a = spec.home_advantage if loc is Location.HOME_A else 0.0
                    edge_b = spec.home_advantage if loc is Location.HOME_B else 0.0
                    classes[key] = (expected_efficiency(off_a, def_b, edge_a),
                                    expected_efficiency(off_b, def_a, edge_b))
                schedule.append((season, date, first, second, loc))

    records = []
    for season, date, first, second, loc in schedule:
        mu_a, mu_b = classes[(first, second, loc)]
        if spec.noise == 0.0:
            eff_a, eff_b = mu_a, mu_b
        else:
            z = rng_games.standard_normal(2)
            eff_a, eff_b = mu_a + spec.noise * z[0], mu_b + spec.noise * z[1]
        pa, pb = _points_from_effs(eff_a, eff_b, mu_a, mu_b)
        box_a, box_b = _boxes(int(pa), int(pb))
        records.append(GameRecord(date, season, first, second, loc, box_a, box_b))

    # distinct matchups often share an expected-efficiency pair (equal-strength
    # leagues collapse to a handful), so simulate once per (mu_a, mu_b)
    by_mu: dict[tuple[float, float], float] = {}
    for key, (mu_a, mu_b) in sorted(classes.items()):
        if (mu_a, mu_b) not in by_mu:
            if (mu_b, mu_a) in by_mu and mu_a != mu_b:
                by_mu[(mu_a, mu_b)] = 1.0 - by_mu[(mu_b, mu_a)]
            else:
                by_mu[(mu_a, mu_b)] = _matchup_prob(
                    mu_a, mu_b, spec.noise, rng_bayes, bayes_sims)
    probs = {key: by_mu[mus] for key, mus in sorted(classes.items())}
    per_game = [max(probs[(a, b, loc)], 1.0 - probs[(a, b, loc)])
                for _, _, a, b, loc in schedule]
    truth = LeagueTruth(
        strengths=strengths, noise=spec.noise, home_advantage=spec.home_advantage,
        bayes_accuracy=float(np.mean(per_game)), bayes_sims=bayes_sims,
        matchup_probs=probs)
    return SeasonStore(records), truth


# ---------------------------------------------------------------------------
# Calibration

def _favorite_prob(abs_mu_gap: float, noise: float) -> float:
    # ties go to the favorite, hence the +0.5 continuity correction on the
    # integer point margin
    margin_sd = noise * POINTS_PER_EFF * math.sqrt(2.0)
    return NormalDist().cdf((abs_mu_gap * POINTS_PER_EFF + 0.5) / margin_sd)


def calibrate_noise(spec: SyntheticLeagueSpec, target: float) -> float:
    """Noise level at which the schedule's best achievable accuracy ~= target.

    Uses the Gaussian form of the integer point margin; the Monte-Carlo
    number recorded at generation time lands within a few thousandths.
    """
    if not 0.5 < target < 1.0:
        raise SyntheticError(f"target accuracy must be in (0.5, 1), got {target}")
    strengths = spec.resolved_strengths()
    rounds = _schedule(spec)
    names = team_names(spec.n_teams)
    gaps = []
    for games in rounds:
        for i, j, home_is_i in games:
            off_i, def_i = strengths[names[i]]
            off_j, def_j = strengths[names[j]]
            mu_i = expected_efficiency(off_i, def_j, spec.home_advantage if home_is_i else 0.0)
            mu_j = expected_efficiency(off_j, def_i, 0.0 if home_is_i else spec.home_advantage)
            gaps.append(abs(mu_i - mu_j))
    gaps = np.asarray(gaps)

    def mean_acc(noise: float) -> float:
        return float(np.mean([_favorite_prob(g, noise) for g in gaps]))

    lo, hi = 1e-6, 1.0
    if mean_acc(lo) < target:
        raise SyntheticError("strength gaps too small to reach the target accuracy")
    while mean_acc(hi) > target:
        hi *= 2.0
        if hi > 1e6:
            raise SyntheticError("target accuracy unreachable")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mean_acc(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def calibrate_home_advantage(noise: float, target_home_rate: float) -> float:
    """Home-efficiency offset giving the target home-win rate when all
    teams are equally strong (point-margin ties go to the home side)."""
    if noise <= 0:
        raise SyntheticError("home-rate calibration needs noise > 0")
    if not 0.5 <= target_home_rate < 1.0:
        raise SyntheticError(f"target rate must be in [0.5, 1), got {target_home_rate}")
    margin_sd = noise * POINTS_PER_EFF * math.sqrt(2.0)
    z = NormalDist().inv_cdf(target_home_rate)
    return (z * margin_sd - 0.5) / POINTS_PER_EFF
