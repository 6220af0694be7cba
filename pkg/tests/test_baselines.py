"""Pythagorean ratings, RPI, and round-robin rankings."""

import dataclasses
import datetime as dt
import math

import numpy as np
import pytest

from courtcast.baselines import (
    BaselineError,
    PythagParams,
    Ranking,
    home_boost,
    model_predictor,
    predict_match_pythag,
    pythag_pair_prob,
    pythag_predictor,
    pythag_rating,
    round_robin_rank,
    rpi,
)
from courtcast.ingest import GameRecord, Location
from courtcast.models import ModelKind, train
from courtcast.stats import Site
from tests.conftest import BOX_A, BOX_B
from tests.test_features import make_snap


def snap(team, oe, de):
    return dataclasses.replace(make_snap(team, 100.0), adj_oe=oe, adj_de=de)


def neutral_game(a, b, a_wins, day, month=1):
    return GameRecord(
        date=dt.date(2011, month, day), season=2011, team_a=a, team_b=b,
        location=Location.NEUTRAL,
        box_a=BOX_A if a_wins else BOX_B,
        box_b=BOX_B if a_wins else BOX_A)


class TestPythagRating:
    def test_worked_example(self):
        r = pythag_rating(snap("t", oe=110.0, de=100.0), PythagParams(y=11.5))
        expected = 110.0**11.5 / (110.0**11.5 + 100.0**11.5)
        assert r == pytest.approx(expected, abs=1e-9)
        assert r == 0.7495224674791585

    def test_equal_efficiencies_is_half(self):
        assert pythag_rating(snap("t", oe=104.25, de=104.25)) == 0.5

    def test_exact_complement(self):
        # swapping offense and defense must give 1 - rating, bit for bit
        rng = np.random.default_rng(7)
        for _ in range(200):
            oe, de = rng.uniform(60.0, 140.0, size=2)
            y = rng.uniform(0.5, 30.0)
            params = PythagParams(y=y)
            r = pythag_rating(snap("t", oe, de), params)
            r_swapped = pythag_rating(snap("t", de, oe), params)
            assert r + r_swapped == 1.0

    @pytest.mark.parametrize("y", [1.0, 11.5, 50.0])
    def test_monotone_in_offense(self, y):
        params = PythagParams(y=y)
        ratings = [pythag_rating(snap("t", oe, 100.0), params)
                   for oe in (90.0, 95.0, 100.0, 105.0, 110.0)]
        assert all(a < b for a, b in zip(ratings, ratings[1:]))

    def test_scale_invariance(self):
        # the rating depends only on the oe/de ratio
        params = PythagParams(y=11.5)
        base = pythag_rating(snap("t", 108.0, 97.0), params)
        for c in (0.5, 2.0, 10.0):
            scaled = pythag_rating(snap("t", 108.0 * c, 97.0 * c), params)
            assert math.isclose(scaled, base, rel_tol=1e-9)

    def test_higher_exponent_more_decisive(self):
        mild = pythag_rating(snap("t", 110.0, 100.0), PythagParams(y=1.0))
        sharp = pythag_rating(snap("t", 110.0, 100.0), PythagParams(y=50.0))
        assert 0.5 < mild < sharp

    def test_invalid_inputs(self):
        with pytest.raises(BaselineError):
            PythagParams(y=0.0)
        with pytest.raises(BaselineError):
            PythagParams(y=-2.0)
        with pytest.raises(BaselineError):
            pythag_rating(snap("t", 0.0, 100.0))
        with pytest.raises(BaselineError):
            pythag_rating(snap("t", 100.0, -5.0))


class TestPairProbability:
    def test_equal_ratings_half(self):
        assert pythag_pair_prob(snap("a", 105.0, 95.0), snap("b", 105.0, 95.0)) == 0.5

    def test_ordering_matches_ratings(self):
        stronger = snap("a", 112.0, 96.0)
        weaker = snap("b", 101.0, 103.0)
        assert pythag_pair_prob(stronger, weaker) > 0.5
        assert pythag_pair_prob(weaker, stronger) < 0.5

    def test_complementary(self):
        p = pythag_pair_prob(snap("a", 108.0, 99.0), snap("b", 97.0, 104.0))
        q = pythag_pair_prob(snap("b", 97.0, 104.0), snap("a", 108.0, 99.0))
        assert p + q == pytest.approx(1.0, abs=1e-12)


class TestPredictMatch:
    def test_higher_rating_wins(self):
        a, b = snap("a", 112.0, 96.0), snap("b", 101.0, 103.0)
        winner, margin = predict_match_pythag(a, b)
        assert winner == "a"
        assert margin == pytest.approx(
            pythag_rating(a) - pythag_rating(b), abs=1e-15)
        winner_rev, margin_rev = predict_match_pythag(b, a)
        assert winner_rev == "a"
        assert margin_rev == -margin

    def test_rating_tie_goes_to_home_else_first(self):
        a, b = snap("a", 105.0, 95.0), snap("b", 105.0, 95.0)
        assert predict_match_pythag(a, b, location=Site.NEUTRAL)[0] == "a"
        assert predict_match_pythag(a, b, location=Site.HOME)[0] == "a"
        assert predict_match_pythag(a, b, location=Site.AWAY)[0] == "b"


class TestHomeBoost:
    def test_scales_offense_only(self):
        s = snap("t", 100.0, 100.0)
        boosted = home_boost(s, 1.014)
        assert boosted.adj_oe == pytest.approx(101.4, abs=1e-12)
        assert boosted.adj_de == s.adj_de
        assert boosted.adj_off_factors.efg == pytest.approx(
            s.adj_off_factors.efg * 1.014, abs=1e-15)
        assert boosted.adj_def_factors == s.adj_def_factors
        assert boosted.raw_means == s.raw_means

    def test_flips_a_near_even_matchup(self):
        a, b = snap("a", 100.0, 100.0), snap("b", 100.5, 100.0)
        assert predict_match_pythag(a, b)[0] == "b"
        assert predict_match_pythag(home_boost(a), b)[0] == "a"

    def test_invalid_multiplier(self):
        with pytest.raises(BaselineError):
            home_boost(snap("t", 100.0, 100.0), 0.0)


class TestRpi:
    @pytest.fixture()
    def triangle(self):
        # x beat y and z; y beat z
        return [neutral_game("x", "y", True, 1),
                neutral_game("x", "z", True, 2),
                neutral_game("y", "z", True, 3)]

    def test_hand_computed_triangle(self, triangle):
        # x: WP 1.0, OWP (1.0 + 0.0)/2, OOWP 0.5 -> 0.625
        assert rpi("x", triangle) == pytest.approx(0.625, abs=1e-12)
        assert rpi("y", triangle) == pytest.approx(0.500, abs=1e-12)
        assert rpi("z", triangle) == pytest.approx(0.375, abs=1e-12)

    def test_repeat_games_count_per_game(self):
        games = [neutral_game("x", "y", True, 1),
                 neutral_game("x", "y", True, 2),
                 neutral_game("y", "z", True, 3)]
        # y's record vs everyone-but-x is 1-0, and it appears twice in x's OWP
        assert rpi("x", games) == pytest.approx(0.875, abs=1e-12)
        assert rpi("y", games) == pytest.approx(0.500, abs=1e-12)
        assert rpi("z", games) == pytest.approx(0.125, abs=1e-12)

    def test_uniform_league_is_half(self):
        # double round robin, every pair splits: all components are .500
        teams = ["e1", "e2", "e3", "e4"]
        games, day = [], 1
        for i in range(4):
            for j in range(i + 1, 4):
                games.append(neutral_game(teams[i], teams[j], True, day))
                games.append(neutral_game(teams[i], teams[j], False, day + 1))
                day += 2
        for t in teams:
            assert abs(rpi(t, games) - 0.5) <= 1e-12

    def test_unknown_team_errors(self, triangle):
        with pytest.raises(BaselineError, match="played no games"):
            rpi("w", triangle)
        with pytest.raises(BaselineError):
            rpi("x", [])


class TestRoundRobinRank:
    def test_two_teams(self):
        ranking = round_robin_rank(
            pythag_predictor(), [snap("weak", 98.0, 104.0), snap("strong", 112.0, 95.0)])
        assert ranking.order() == ["strong", "weak"]
        assert [e.score for e in ranking.entries] == [1.0, 0.0]
        assert [e.rank for e in ranking.entries] == [1, 2]

    def test_matches_rating_order_on_random_sets(self):
        rng = np.random.default_rng(42)
        for trial in range(10):
            snaps = [snap(f"t{i:02d}", rng.uniform(85.0, 120.0), rng.uniform(85.0, 120.0))
                     for i in range(10)]
            ranking = round_robin_rank(pythag_predictor(), snaps)
            by_rating = sorted(snaps, key=lambda s: (-pythag_rating(s), s.team))
            assert ranking.order() == [s.team for s in by_rating]
            # a totally ordered field: k-th team wins exactly n-1-k pairings
            assert [e.score for e in ranking.entries] == [9.0 - k for k in range(10)]

    def test_exact_tie_goes_to_first_team(self):
        snaps = [snap("a", 105.0, 95.0), snap("b", 105.0, 95.0), snap("c", 90.0, 110.0)]
        ranking = round_robin_rank(pythag_predictor(), snaps)
        assert ranking.order() == ["a", "b", "c"]
        assert [e.score for e in ranking.entries] == [2.0, 1.0, 0.0]

    def test_cycle_breaks_by_mean_probability(self):
        table = {("a", "b"): 0.9, ("b", "c"): 0.8, ("a", "c"): 0.1}

        def predictor(first, second):
            return table[(first.team, second.team)]

        snaps = [snap("a", 100.0, 100.0), snap("b", 100.0, 100.0), snap("c", 100.0, 100.0)]
        ranking = round_robin_rank(predictor, snaps)
        # everyone 1-1; mean probabilities: c 0.55, a 0.50, b 0.45
        assert ranking.order() == ["c", "a", "b"]
        assert [e.mean_p for e in ranking.entries] == pytest.approx([0.55, 0.5, 0.45])

    def test_input_validation(self):
        with pytest.raises(BaselineError, match="at least two"):
            round_robin_rank(pythag_predictor(), [snap("a", 100.0, 100.0)])
        with pytest.raises(BaselineError, match="duplicate"):
            round_robin_rank(pythag_predictor(),
                             [snap("a", 100.0, 100.0), snap("a", 101.0, 99.0)])
        with pytest.raises(BaselineError, match="invalid probability"):
            round_robin_rank(lambda a, b: 1.5,
                             [snap("a", 100.0, 100.0), snap("b", 100.0, 100.0)])

    def test_model_predictor_ranks_by_strength(self):
        from tests.test_models import separable_instances

        model = train(separable_instances(200, seed=3), ModelKind.NAIVE_BAYES_KDE)
        snaps = [snap("mid", 100.0, 100.0), snap("top", 114.0, 92.0),
                 snap("low", 90.0, 112.0)]
        ranking = round_robin_rank(model_predictor(model), snaps)
        assert ranking.order() == ["top", "mid", "low"]
