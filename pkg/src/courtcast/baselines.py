"""Non-ML reference predictors and team rankings.

Pythagorean expectation turns a team's averaged efficiencies into a win
probability:  oe^y / (oe^y + de^y)  with exponent y = 11.5 by default.
RPI blends a team's winning percentage with its opponents' and its
opponents' opponents' (0.25/0.50/0.25), excluding games against the rated
team from each opponent's record.  Rankings come from predicting every
hypothetical pairing once, at a neutral site, and counting predicted wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from courtcast.adjust import TeamSnapshot
from courtcast.features import FeatureScheme, Label, MatchInstance, encode_pairing
from courtcast.ingest import GameRecord
from courtcast.stats import FourFactors, Site


class BaselineError(ValueError):
    """Raised for invalid ratings inputs (non-positive efficiencies, no games)."""


@dataclass(frozen=True)
class PythagParams:
    """Exponent for the Pythagorean expectation; higher = more decisive."""

    y: float = 11.5

    def __post_init__(self):
        if self.y <= 0:
            raise BaselineError(f"exponent must be positive, got {self.y}")


def pythag_rating(snap: TeamSnapshot, params: PythagParams = PythagParams()) -> float:
    """Win probability proxy from averaged adjusted efficiencies.

    Computed so that swapping offense and defense yields the exact
    complement: the weaker side's share is divided once and the stronger
    side is literally 1.0 minus it.
    """
    if snap.adj_oe <= 0 or snap.adj_de <= 0:
        raise BaselineError(
            f"{snap.team}: efficiencies must be positive "
            f"(adj_oe={snap.adj_oe}, adj_de={snap.adj_de})")
    x = snap.adj_oe ** params.y
    z = snap.adj_de ** params.y
    if x <= z:
        return x / (x + z)
    return 1.0 - z / (z + x)


def pythag_pair_prob(snap_a: TeamSnapshot, snap_b: TeamSnapshot,
                     params: PythagParams = PythagParams()) -> float:
    """Head-to-head win probability for a from two Pythagorean ratings.

    Classic log-odds combination: p = ra(1-rb) / (ra(1-rb) + rb(1-ra)).
    Equal ratings give 0.5; a rating of 1.0 wins with certainty.
    """
    ra, rb = pythag_rating(snap_a, params), pythag_rating(snap_b, params)
    num = ra * (1.0 - rb)
    den = num + rb * (1.0 - ra)
    if den == 0.0:  # both ratings are exactly 0 or exactly 1
        return 0.5
    return num / den


def predict_match_pythag(snap_a: TeamSnapshot, snap_b: TeamSnapshot,
                         params: PythagParams = PythagParams(),
                         location: Site = Site.NEUTRAL) -> tuple[str, float]:
    """(predicted winner, rating margin) for a hypothetical pairing.

    The higher-rated team wins; an exact rating tie goes to the home team,
    or to the first (lexicographically smaller) team at a neutral site.
    ``location`` is the site from snap_a's perspective.
    """
    ra, rb = pythag_rating(snap_a, params), pythag_rating(snap_b, params)
    if ra > rb:
        winner = snap_a.team
    elif rb > ra:
        winner = snap_b.team
    elif location is Site.AWAY:
        winner = snap_b.team
    else:
        winner = snap_a.team
    return winner, ra - rb


def home_boost(snap: TeamSnapshot, multiplier: float = 1.014) -> TeamSnapshot:
    """Scale a snapshot's offensive quantities by a home-court multiplier.

    Off by default everywhere; provided for users who want to replicate the
    practice of crediting the home side a ~1.4% offensive bump.
    """
    if multiplier <= 0:
        raise BaselineError("multiplier must be positive")

    def scale(ff: FourFactors) -> FourFactors:
        return FourFactors(*(getattr(ff, f) * multiplier for f in FourFactors.field_names()))

    return TeamSnapshot(
        team=snap.team, season=snap.season, date=snap.date,
        games_played=snap.games_played,
        adj_oe=snap.adj_oe * multiplier, adj_de=snap.adj_de,
        adj_off_factors=scale(snap.adj_off_factors),
        adj_def_factors=snap.adj_def_factors,
        avg_off_factors=scale(snap.avg_off_factors),
        avg_def_factors=snap.avg_def_factors,
        raw_means=snap.raw_means,
    )


# ---------------------------------------------------------------------------
# RPI

def _records(games: Sequence[GameRecord]) -> dict[str, list[tuple[str, bool]]]:
    rec: dict[str, list[tuple[str, bool]]] = {}
    for g in games:
        winner = g.winner()
        rec.setdefault(g.team_a, []).append((g.team_b, winner == g.team_a))
        rec.setdefault(g.team_b, []).append((g.team_a, winner == g.team_b))
    return rec


def _wp(rec: dict[str, list[tuple[str, bool]]], team: str,
        exclude: str | None = None) -> float:
    games = [(opp, won) for opp, won in rec.get(team, []) if opp != exclude]
    if not games:
        return 0.5  # exclusion emptied the record: carries no information
    return sum(won for _, won in games) / len(games)


def rpi(team: str, games: Sequence[GameRecord]) -> float:
    """0.25*WP + 0.50*OWP + 0.25*OOWP over one season's results.

    Opponents' winning percentages exclude their games against ``team``;
    each opponent counts once per game played (multiplicity matters).
    """
    rec = _records(games)
    own = rec.get(team)
    if not own:
        raise BaselineError(f"{team} played no games")

    def owp(t: str) -> float:
        opponents = [opp for opp, _ in rec[t]]
        return sum(_wp(rec, opp, exclude=t) for opp in opponents) / len(opponents)

    wp = _wp(rec, team)
    o_wp = owp(team)
    oo_wp = sum(owp(opp) for opp, _ in own) / len(own)
    return 0.25 * wp + 0.50 * o_wp + 0.25 * oo_wp


# ---------------------------------------------------------------------------
# Ranking by hypothetical round robin

# A pair predictor maps (first, second) snapshots to p(first wins) at a
# neutral site, with first the lexicographically smaller team.
PairPredictor = Callable[[TeamSnapshot, TeamSnapshot], float]


@dataclass(frozen=True)
class RankEntry:
    rank: int
    team: str
    score: float      # predicted wins across all pairings
    mean_p: float     # mean predicted win probability (tie-break key)


@dataclass(frozen=True)
class Ranking:
    entries: tuple[RankEntry, ...]

    def order(self) -> list[str]:
        return [e.team for e in self.entries]


def pythag_predictor(params: PythagParams = PythagParams()) -> PairPredictor:
    return lambda a, b: pythag_pair_prob(a, b, params)


def model_predictor(model) -> PairPredictor:
    """Adapt a trained classifier to hypothetical neutral-site pairings."""
    from courtcast.models import predict

    def prob(first: TeamSnapshot, second: TeamSnapshot) -> float:
        inst = MatchInstance(
            scheme=FeatureScheme(model.scheme), location=Site.NEUTRAL,
            features=encode_pairing(first, second, model.scheme),
            label=None, date=first.date, season=first.season,
            team_first=first.team, team_second=second.team)
        return predict(model, inst)[1]

    return prob


def round_robin_rank(predictor: PairPredictor,
                     snapshots: Sequence[TeamSnapshot]) -> Ranking:
    """Rank teams by predicted wins over every hypothetical pairing.

    Each unordered pair is predicted exactly once, at a neutral site, in
    canonical orientation (smaller team id first).  Ties in predicted wins
    break by mean win probability, then by team id.
    """
    snaps = sorted(snapshots, key=lambda s: s.team)
    if len(snaps) < 2:
        raise BaselineError("ranking needs at least two teams")
    names = [s.team for s in snaps]
    if len(set(names)) != len(names):
        raise BaselineError("duplicate team in snapshot set")

    wins = {t: 0 for t in names}
    prob_sum = {t: 0.0 for t in names}
    for i in range(len(snaps)):
        for j in range(i + 1, len(snaps)):
            first, second = snaps[i], snaps[j]
            p = predictor(first, second)
            if not 0.0 <= p <= 1.0:
                raise BaselineError(f"predictor returned invalid probability {p}")
            prob_sum[first.team] += p
            prob_sum[second.team] += 1.0 - p
            if p > 0.5:
                wins[first.team] += 1
            elif p < 0.5:
                wins[second.team] += 1
            else:  # exactly 0.5 at a neutral site: first team takes it
                wins[first.team] += 1

    n_pairings = len(snaps) - 1
    order = sorted(names, key=lambda t: (-wins[t], -prob_sum[t] / n_pairings, t))
    entries = tuple(
        RankEntry(rank=i + 1, team=t, score=float(wins[t]),
                  mean_p=prob_sum[t] / n_pairings)
        for i, t in enumerate(order))
    return Ranking(entries=entries)
