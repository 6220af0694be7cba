"""Game-log ingestion: parsing, validation, and season partitioning.

The data layer works from a flat CSV game log, one row per completed game
with both teams' box scores on the row:

    date,season,team_a,team_b,location,
    fgma,fgaa,fgm3a,fta,ftaa,ora,dra,toa,stla,blka,ptsa,
    fgmb,fgab,fgm3b,ftb,ftab,orb,drb,tob,stlb,blkb,ptsb

``date`` is ISO-8601 (YYYY-MM-DD), ``season`` an integer year label, and
``location`` one of ``home_a``, ``home_b``, ``neutral``.  Games are stored
in canonical orientation: the lexicographically smaller team id is always
``team_a`` (box scores and home/away flags are swapped on ingestion when a
row arrives the other way around).

An optional roster file (CSV ``season,team``) restricts each season to a
known pool of teams; games involving an off-roster side are dropped so that
exhibition-style matches cannot distort the averages downstream.
"""

from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence


class GameLogError(ValueError):
    """Raised for malformed or inconsistent game-log input.

    Carries the offending file, line number, and field so callers can point
    at the exact cell that failed validation.
    """

    def __init__(self, message: str, *, path: str | None = None,
                 line: int | None = None, field: str | None = None):
        self.path = path
        self.line = line
        self.field = field
        prefix = ""
        if path is not None:
            prefix = f"{path}:{line}: " if line is not None else f"{path}: "
        if field is not None:
            message = f"field '{field}': {message}"
        super().__init__(prefix + message)


class Location(str, Enum):
    """Game site, relative to the stored (canonical) team order."""

    HOME_A = "home_a"
    HOME_B = "home_b"
    NEUTRAL = "neutral"

    def swapped(self) -> "Location":
        if self is Location.HOME_A:
            return Location.HOME_B
        if self is Location.HOME_B:
            return Location.HOME_A
        return Location.NEUTRAL


# Column order for one side's box score in the CSV schema.
BOX_FIELDS = ("fgm", "fga", "fgm3", "ft", "fta", "or_", "dr", "to", "stl", "blk", "points")
_BOX_SUFFIX = {"or_": "or", "points": "pts"}


def _box_columns(side: str) -> list[str]:
    return [f"{_BOX_SUFFIX.get(f, f)}{side}" for f in BOX_FIELDS]


HEADER = ["date", "season", "team_a", "team_b", "location"] + _box_columns("a") + _box_columns("b")


@dataclass(frozen=True)
class BoxScore:
    """One team's raw counting statistics for one game."""

    fgm: int
    fga: int
    fgm3: int
    ft: int
    fta: int
    or_: int
    dr: int
    to: int
    stl: int
    blk: int
    points: int

    def validate(self) -> None:
        """Check internal consistency; raise :class:`GameLogError` if violated."""
        for name in BOX_FIELDS:
            if getattr(self, name) < 0:
                raise GameLogError(f"negative count {getattr(self, name)}", field=name)
        if self.fgm > self.fga:
            raise GameLogError(f"fgm={self.fgm} exceeds fga={self.fga}", field="fgm")
        if self.fgm3 > self.fgm:
            raise GameLogError(f"fgm3={self.fgm3} exceeds fgm={self.fgm}", field="fgm3")
        if self.ft > self.fta:
            raise GameLogError(f"ft={self.ft} exceeds fta={self.fta}", field="ft")
        computed = 2 * (self.fgm - self.fgm3) + 3 * self.fgm3 + self.ft
        if computed != self.points:
            raise GameLogError(
                f"stated points {self.points} do not match the box "
                f"(2*(fgm-fgm3) + 3*fgm3 + ft = {computed})",
                field="points",
            )


@dataclass(frozen=True)
class GameRecord:
    """A completed match in canonical orientation (team_a < team_b)."""

    date: dt.date
    season: int
    team_a: str
    team_b: str
    location: Location
    box_a: BoxScore
    box_b: BoxScore

    def __post_init__(self):
        if self.team_a == self.team_b:
            raise GameLogError(f"team plays itself: {self.team_a}", field="team_b")
        if self.team_a > self.team_b:
            raise GameLogError(
                f"not canonically oriented: {self.team_a!r} > {self.team_b!r}",
                field="team_a",
            )

    @staticmethod
    def oriented(date: dt.date, season: int, first: str, second: str,
                 location: Location, box_first: BoxScore, box_second: BoxScore) -> "GameRecord":
        """Build a record from either team order, canonicalizing as needed."""
        if first > second:
            first, second = second, first
            box_first, box_second = box_second, box_first
            location = location.swapped()
        return GameRecord(date, season, first, second, location, box_first, box_second)

    def winner(self) -> str:
        return self.team_a if self.box_a.points > self.box_b.points else self.team_b

    def home_team(self) -> str | None:
        if self.location is Location.HOME_A:
            return self.team_a
        if self.location is Location.HOME_B:
            return self.team_b
        return None


def _sort_key(g: GameRecord):
    return (g.date, g.team_a, g.team_b)


class SeasonStore:
    """Immutable-after-construction container of game records by season.

    Games within a season are sorted by date, with ties ordered by the
    (team_a, team_b) pair so day-by-day processing is deterministic.
    """

    def __init__(self, games: Iterable[GameRecord],
                 rosters: dict[int, set[str]] | None = None):
        by_season: dict[int, list[GameRecord]] = {}
        for g in games:
            by_season.setdefault(g.season, []).append(g)
        for season, rows in by_season.items():
            rows.sort(key=_sort_key)
        self._by_season = {s: tuple(by_season[s]) for s in sorted(by_season)}
        if rosters is not None:
            self._rosters = {s: frozenset(t) for s, t in rosters.items()}
        else:
            self._rosters = {
                s: frozenset(t for g in rows for t in (g.team_a, g.team_b))
                for s, rows in self._by_season.items()
            }

    @property
    def seasons(self) -> list[int]:
        return list(self._by_season)

    def games(self, season: int) -> tuple[GameRecord, ...]:
        return self._by_season.get(season, ())

    def all_games(self) -> list[GameRecord]:
        return [g for s in self._by_season for g in self._by_season[s]]

    def teams(self, season: int) -> frozenset[str]:
        return self._rosters.get(season, frozenset())

    @property
    def n_games(self) -> int:
        return sum(len(v) for v in self._by_season.values())

    def truncated(self, season: int, last_date: dt.date) -> "SeasonStore":
        """Copy of the store with every game in ``season`` after ``last_date`` removed."""
        kept = [g for g in self.all_games()
                if g.season != season or g.date <= last_date]
        return SeasonStore(kept, rosters=dict(self._rosters))


def _parse_int(raw: str, *, path: str, line: int, field: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise GameLogError(f"expected integer, got {raw!r}",
                           path=path, line=line, field=field) from None


def _parse_row(row: dict[str, str], path: str, line: int) -> GameRecord:
    try:
        date = dt.date.fromisoformat(row["date"])
    except ValueError:
        raise GameLogError(f"bad ISO date {row['date']!r}",
                           path=path, line=line, field="date") from None
    season = _parse_int(row["season"], path=path, line=line, field="season")
    first, second = row["team_a"].strip(), row["team_b"].strip()
    if not first or not second:
        raise GameLogError("empty team id", path=path, line=line, field="team_a")
    try:
        location = Location(row["location"])
    except ValueError:
        raise GameLogError(
            f"location must be one of home_a/home_b/neutral, got {row['location']!r}",
            path=path, line=line, field="location") from None

    boxes = []
    for side in ("a", "b"):
        counts = {}
        for attr, col in zip(BOX_FIELDS, _box_columns(side)):
            counts[attr] = _parse_int(row[col], path=path, line=line, field=col)
        box = BoxScore(**counts)
        try:
            box.validate()
        except GameLogError as e:
            raise GameLogError(str(e), path=path, line=line, field=e.field) from None
        boxes.append(box)

    if boxes[0].points == boxes[1].points:
        raise GameLogError(
            f"tied score {boxes[0].points}-{boxes[1].points}; games cannot end tied",
            path=path, line=line, field="ptsb")
    return GameRecord.oriented(date, season, first, second, location, boxes[0], boxes[1])


def parse_roster(path: str | Path) -> dict[int, set[str]]:
    """Read a roster CSV (``season,team``) into season -> team-id sets."""
    path = Path(path)
    rosters: dict[int, set[str]] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != ["season", "team"]:
            raise GameLogError(f"roster header must be 'season,team', got {reader.fieldnames}",
                               path=str(path), line=1)
        for line, row in enumerate(reader, start=2):
            season = _parse_int(row["season"], path=str(path), line=line, field="season")
            team = row["team"].strip()
            if not team:
                raise GameLogError("empty team id", path=str(path), line=line, field="team")
            rosters.setdefault(season, set()).add(team)
    return rosters


def parse_game_log(path: str | Path,
                   rosters: dict[int, set[str]] | None = None) -> SeasonStore:
    """Parse and validate a game-log CSV into a :class:`SeasonStore`.

    Every row is validated (counts, points consistency, no ties, no
    duplicates) and canonically oriented.  Lines starting with ``#`` are
    comments (artifacts carry their run configuration that way); reported
    line numbers always refer to the physical file.  When ``rosters`` is
    given, games with an off-roster team are dropped; the count of dropped
    rows is available as ``store.off_roster_dropped``.
    """
    path = Path(path)
    if not path.exists():
        raise GameLogError("file not found", path=str(path))
    games: list[GameRecord] = []
    seen: set[tuple[dt.date, str, str]] = set()
    dropped = 0
    with path.open(newline="", encoding="utf-8") as fh:
        data = [(n, ln) for n, ln in enumerate(fh, start=1)
                if not ln.startswith("#")]
    reader = csv.DictReader(ln for _, ln in data)
    if reader.fieldnames is None:
        raise GameLogError("empty file, header required", path=str(path), line=1)
    got = [c.strip() for c in reader.fieldnames]
    if got != HEADER:
        raise GameLogError(
            f"bad header: expected {','.join(HEADER)}", path=str(path), line=data[0][0])
    for j, row in enumerate(reader, start=1):
        line = data[j][0]
        if any(v is None for v in row.values()) or None in row:
            raise GameLogError(f"expected {len(HEADER)} columns",
                               path=str(path), line=line)
        record = _parse_row(row, str(path), line)
        key = (record.date, record.team_a, record.team_b)
        if key in seen:
            raise GameLogError(
                f"duplicate game {record.team_a} vs {record.team_b} on {record.date}",
                path=str(path), line=line, field="team_a")
        seen.add(key)
        if rosters is not None:
            pool = rosters.get(record.season, set())
            if record.team_a not in pool or record.team_b not in pool:
                dropped += 1
                continue
        games.append(record)
    store = SeasonStore(games, rosters=rosters)
    store.off_roster_dropped = dropped  # type: ignore[attr-defined]
    return store


def write_game_log(store: SeasonStore, path: str | Path,
                   header_comments: Sequence[str] = ()) -> None:
    """Serialize a store back to the game-log CSV schema (round-trip safe).

    ``header_comments`` lines (already ``#``-prefixed) go above the header;
    :func:`parse_game_log` skips them on the way back in.
    """
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        for comment in header_comments:
            fh.write(comment + "\n")
        writer = csv.writer(fh)
        writer.writerow(HEADER)
        for g in store.all_games():
            row: list = [g.date.isoformat(), g.season, g.team_a, g.team_b, g.location.value]
            for box in (g.box_a, g.box_b):
                row.extend(getattr(box, f) for f in BOX_FIELDS)
            writer.writerow(row)


def write_roster(rosters: dict[int, Sequence[str] | set[str]], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["season", "team"])
        for season in sorted(rosters):
            for team in sorted(rosters[season]):
                writer.writerow([season, team])


def season_partition(store: SeasonStore, test_season: int) -> tuple[list[GameRecord], list[GameRecord]]:
    """Split into (train, test): all earlier seasons train, ``test_season`` tests.

    Training data accumulates from the earliest stored season, so advancing
    the test season one year grows the training set by exactly the previous
    test set.
    """
    if test_season not in store.seasons:
        raise GameLogError(f"season {test_season} not in store (have {store.seasons})")
    earlier = [s for s in store.seasons if s < test_season]
    if not earlier:
        raise GameLogError(f"no training data: {test_season} is the earliest stored season")
    train = [g for s in earlier for g in store.games(s)]
    test = list(store.games(test_season))
    return train, test
