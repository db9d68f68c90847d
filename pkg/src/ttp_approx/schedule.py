"""Schedule representation, feasibility validators and travel distances.

Teams are 0-based internally.  The text format (and table-style game
strings such as ``"3H"``) use 1-based team numbers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from .instance import Instance, Number


class Game(NamedTuple):
    opponent: int
    home: bool

    def __str__(self) -> str:
        return f"{self.opponent + 1}{'H' if self.home else 'A'}"

    @classmethod
    def parse(cls, token: str) -> "Game":
        token = token.strip()
        if len(token) < 2 or token[-1].upper() not in "HA":
            raise ScheduleFormatError(f"bad game token {token!r}")
        try:
            opp = int(token[:-1])
        except ValueError:
            raise ScheduleFormatError(f"bad game token {token!r}") from None
        return cls(opp - 1, token[-1].upper() == "H")


class ScheduleFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Schedule:
    rows: tuple[tuple[Game, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def num_slots(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def game(self, team: int, slot: int) -> Game:
        return self.rows[team][slot]

    def venues(self, team: int) -> str:
        return "".join("H" if g.home else "A" for g in self.rows[team])

    def slots(self, start: int, stop: int) -> "Schedule":
        return Schedule(tuple(row[start:stop] for row in self.rows))

    def relabel(self, team_of: Sequence[int]) -> "Schedule":
        """Map team ``k`` of this schedule to team ``team_of[k]``."""
        rows: list = [None] * self.n
        for k, row in enumerate(self.rows):
            rows[team_of[k]] = tuple(Game(team_of[g.opponent], g.home) for g in row)
        return Schedule(tuple(rows))

    def to_text(self) -> str:
        return "".join(",".join(str(g) for g in row) + "\n" for row in self.rows)

    @classmethod
    def from_strings(cls, table: Sequence[str]) -> "Schedule":
        """Build from table-style rows such as ``"3H 4A 5H"`` (1-based)."""
        return cls(tuple(tuple(Game.parse(tok) for tok in row.replace(",", " ").split())
                         for row in table))


def concat(*parts: Schedule) -> Schedule:
    n = parts[0].n
    return Schedule(tuple(sum((p.rows[t] for p in parts), ()) for t in range(n)))


def parse_schedule(text: str) -> Schedule:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append(tuple(Game.parse(tok) for tok in line.split(",")))
        except ScheduleFormatError as exc:
            raise ScheduleFormatError(f"line {lineno}: {exc}") from None
    if not rows:
        raise ScheduleFormatError("empty schedule")
    if len({len(r) for r in rows}) != 1:
        raise ScheduleFormatError("rows have different slot counts")
    for t, row in enumerate(rows):
        for g in row:
            if not 0 <= g.opponent < len(rows) or g.opponent == t:
                raise ScheduleFormatError(f"team {t + 1}: invalid opponent {g.opponent + 1}")
    return Schedule(tuple(rows))


def load_schedule(path) -> Schedule:
    with open(path, encoding="utf-8") as fh:
        return parse_schedule(fh.read())


class ScheduleBuilder:
    """Mutable slot grid; every game is entered for both teams at once."""

    def __init__(self, n: int, num_slots: int):
        self.n = n
        self.grid: list[list[Optional[Game]]] = [[None] * num_slots for _ in range(n)]

    def put(self, slot: int, home: int, away: int) -> None:
        if home == away:
            raise ValueError(f"team {home + 1} cannot play itself")
        for team in (home, away):
            if self.grid[team][slot] is not None:
                raise ValueError(f"team {team + 1} already plays in slot {slot + 1}")
        self.grid[home][slot] = Game(away, True)
        self.grid[away][slot] = Game(home, False)

    def place(self, team: int, slot: int, game: Game) -> None:
        if game.home:
            self.put(slot, team, game.opponent)
        else:
            self.put(slot, game.opponent, team)

    def build(self) -> Schedule:
        for t, row in enumerate(self.grid):
            for s, g in enumerate(row):
                if g is None:
                    raise ValueError(f"team {t + 1} has no game in slot {s + 1}")
        return Schedule(tuple(tuple(row) for row in self.grid))


@dataclass
class Report:
    check: str
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        if self.ok:
            return [f"{self.check}: ok"]
        return [f"{self.check}: {v}" for v in self.violations]


def check_consistency(s: Schedule) -> Report:
    rep = Report("consistency")
    for t, row in enumerate(s.rows):
        if len(row) != s.num_slots:
            rep.violations.append(f"team {t + 1} has {len(row)} slots")
            continue
        for slot, g in enumerate(row):
            if g.opponent == t or not 0 <= g.opponent < s.n:
                rep.violations.append(f"team {t + 1} slot {slot + 1}: bad opponent")
                continue
            back = s.rows[g.opponent][slot]
            if back.opponent != t or back.home == g.home:
                rep.violations.append(
                    f"slot {slot + 1}: team {t + 1} has {g} but team "
                    f"{g.opponent + 1} has {back}")
    return rep


def validate_drr(s: Schedule) -> Report:
    """Every ordered pair (i, j) occurs exactly once as a home game of i."""
    rep = Report("double round-robin")
    if s.num_slots != 2 * (s.n - 1):
        rep.violations.append(f"{s.num_slots} slots, expected {2 * (s.n - 1)}")
    rep.violations.extend(check_consistency(s).violations)
    count: dict[tuple[int, int], int] = {}
    for t, row in enumerate(s.rows):
        for g in row:
            if g.home:
                count[(t, g.opponent)] = count.get((t, g.opponent), 0) + 1
    for i in range(s.n):
        for j in range(s.n):
            if i == j:
                continue
            c = count.get((i, j), 0)
            if c == 0:
                rep.violations.append(f"missing home game ({i + 1},{j + 1})")
            elif c > 1:
                rep.violations.append(f"duplicate home game ({i + 1},{j + 1}) x{c}")
    return rep


def check_no_repeater(s: Schedule) -> Report:
    rep = Report("no-repeater")
    for t, row in enumerate(s.rows):
        for slot in range(1, len(row)):
            if row[slot].opponent == row[slot - 1].opponent:
                rep.violations.append(
                    f"team {t + 1} meets team {row[slot].opponent + 1} "
                    f"in slots {slot} and {slot + 1}")
    return rep


def runs(pattern: str) -> list[tuple[str, int, int]]:
    """Maximal runs as (venue, first slot, length), slots 0-based."""
    out = []
    start = 0
    for k in range(1, len(pattern) + 1):
        if k == len(pattern) or pattern[k] != pattern[start]:
            out.append((pattern[start], start, k - start))
            start = k
    return out


def check_at_most(s: Schedule, k: int = 2) -> Report:
    rep = Report(f"at-most-{k}")
    for t in range(s.n):
        for venue, start, length in runs(s.venues(t)):
            if length > k:
                kind = "home" if venue == "H" else "away"
                rep.violations.append(
                    f"team {t + 1}: {length} consecutive {kind} games "
                    f"in slots {start + 1}-{start + length}")
    return rep


def feasibility_reports(s: Schedule, k: int = 2) -> list[Report]:
    return [validate_drr(s), check_no_repeater(s), check_at_most(s, k)]


def is_feasible(s: Schedule, k: int = 2) -> bool:
    return all(r.ok for r in feasibility_reports(s, k))


@dataclass(frozen=True)
class Itinerary:
    venues: tuple[int, ...]  # venue = team whose home it is; starts/ends at own home


def _stops(s: Schedule, team: int) -> list[int]:
    stops = [team]
    for g in s.rows[team]:
        here = team if g.home else g.opponent
        if here != stops[-1]:
            stops.append(here)
    if stops[-1] != team:
        stops.append(team)
    return stops


def per_team_itinerary(s: Schedule, inst: Instance, team: int) -> tuple[Itinerary, Number]:
    stops = _stops(s, team)
    dist = sum(inst.d[a][b] for a, b in zip(stops, stops[1:]))
    return Itinerary(tuple(stops)), dist


def team_distances(s: Schedule, inst: Instance) -> list[Number]:
    return [per_team_itinerary(s, inst, t)[1] for t in range(s.n)]


def total_distance(s: Schedule, inst: Instance) -> Number:
    return sum(team_distances(s, inst))


def legs(s: Schedule, team: int) -> list[tuple[int, int]]:
    """Venue hops (from, to) of ``team``'s itinerary, home-to-home."""
    stops = _stops(s, team)
    return list(zip(stops, stops[1:]))
