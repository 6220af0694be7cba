"""
From box scores to opponent-adjusted team ratings
=================================================

"""

# A synthetic league stands in for real data: twelve teams with hidden
# offensive/defensive strengths play a double-season schedule, and the
# generator hands back both the game log and the truth it was drawn from.
from courtcast import SyntheticLeagueSpec, generate_league

spec = SyntheticLeagueSpec(n_teams=12, games_per_team=22, n_seasons=2,
                           noise=6.0, seed=42)
store, truth = generate_league(spec)
print(f"{store.n_games} games across seasons {store.seasons}")

# Every game yields two per-team stat lines: possessions, points per 100
# possessions on offense and defense, and the four factors.
from courtcast import game_stats

first = store.all_games()[0]
for side in game_stats(first):
    print(f"  {side.team:>4} {side.poss:5.1f} poss  oe {side.oe:6.1f}  "
          f"de {side.de:6.1f}  efg {side.off_factors.efg:.3f}")

# Raw efficiency rewards teams with soft schedules.  The adjustment engine
# replays the season day by day, scaling each game's numbers by how the
# opponent had looked coming in, and folds them into a running average.
from courtcast import AdjustConfig, AveragingScheme, Seeding, run_seasons

runs = run_seasons(store, AveragingScheme.ALPHA, Seeding.PRIOR_SEASON,
                   AdjustConfig())
final = runs[store.seasons[-1]].final

# Sorting teams by end-of-season net adjusted efficiency recovers most of
# the hidden strength order, which no per-game stat ever saw directly.
by_net = sorted(final, key=lambda t: final[t].adj_de - final[t].adj_oe)
print("\nrank  team   adj_oe  adj_de   hidden net")
for i, team in enumerate(by_net, start=1):
    snap = final[team]
    off, dfn = truth.strengths[team]
    print(f"{i:4d}  {team:>4}  {snap.adj_oe:6.1f}  {snap.adj_de:6.1f}   {off - dfn:+6.1f}")

agree = sum(a == b for a, b in zip(by_net, truth.net_order()))
print(f"\n{agree}/{len(by_net)} positions match the hidden ordering exactly")
