"""Second phase: the last 14 slots, built as a 7-slot half plus its mirror.

T1 (labels 1..n-8) and T2 (labels n-7..n) are scheduled independently.  T2
uses a fixed 8-team single round-robin.  T1 plays the seven opponents it has
not met yet; the half-schedule follows a period-two template along the
vertex cycle and only the four teams around the wrap (labels n-9, n-8, 1, 2)
are scheduled by backtracking.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Optional

from .schedule import Game, Schedule, ScheduleBuilder, check_at_most, check_no_repeater


class SearchExhausted(RuntimeError):
    pass


class JunctionViolation(ValueError):
    pass


T2_TABLE = (
    "3H 4A 5H 2A 6A 8H 7H",
    "4H 3A 6A 1H 5H 7A 8H",
    "1A 2H 7H 4A 8A 6H 5A",
    "2A 1H 8A 3H 7H 5A 6A",
    "7H 8A 1A 6H 2A 4H 3H",
    "8H 7A 2H 5A 1H 3A 4H",
    "5A 6H 3A 8H 4A 2H 1A",
    "6A 5H 4H 7A 3H 1A 2A",
)


def _check_size(n: int) -> None:
    if n % 4 != 2 or n < 30:
        raise ValueError(f"construction needs n = 4m + 2 >= 30, got {n}")


def remaining_opponents(n: int) -> dict[int, frozenset[int]]:
    """Label -> the seven T1 labels it still has to meet after phase 1.

    Labels are 1-based and reduced cyclically into 1..n-8.
    """
    _check_size(n)
    size = n - 8

    def wrap(x: int) -> int:
        return (x - 1) % size + 1

    out = {}
    for lab in range(1, size + 1):
        if lab % 2:
            i = (lab + 1) // 2
            raw = (2*i - 4, 2*i - 3, 2*i - 2, 2*i, 2*i + 1, 2*i + 2, 2*i + 4)
        else:
            i = lab // 2
            raw = (2*i - 5, 2*i - 3, 2*i - 2, 2*i - 1, 2*i + 1, 2*i + 2, 2*i + 3)
        out[lab] = frozenset(wrap(x) for x in raw)
    return out


# Edge classes over vertex index i (a_i = label 2i+1, b_i = label 2i+2):
# (kind of u, shift of u, kind of v, shift of v).
_CLASSES = (
    ("a", 0, "b", 0),
    ("a", 0, "b", 1),
    ("b", 0, "a", 1),
    ("a", 0, "a", 1),
    ("b", 0, "b", 1),
    ("a", 0, "b", 2),
    ("b", 0, "a", 2),
)
# class -> (slot, venue of the a-team) for the translation-invariant classes
_AB_TEMPLATE = {0: (2, "H"), 1: (3, "A"), 2: (5, "H"), 5: (4, "H"), 6: (6, "A")}


def _template_game(cls: int, i: int) -> tuple[int, bool]:
    """(slot, u plays at home) of class ``cls`` edge at index ``i``."""
    if cls in _AB_TEMPLATE:
        slot, a_venue = _AB_TEMPLATE[cls]
        u_is_a = _CLASSES[cls][0] == "a"
        return slot, (a_venue == "H") == u_is_a
    # the two odd cycles alternate between slots 0 and 1, lower index at home
    if cls == 3:
        return (0 if i % 2 == 0 else 1), True
    return (1 if i % 2 == 0 else 0), True


def half_pattern_ok(p: list[Optional[str]]) -> bool:
    """Partial venue string of a T1 half: no three in a row, slots 1/2 and
    6/7 differ."""
    if p[0] and p[0] == p[1]:
        return False
    if p[5] and p[5] == p[6]:
        return False
    return not any(p[s] and p[s] == p[s + 1] == p[s + 2] for s in range(5))


def _search_t1(n: int, window: list[int]) -> Optional[Schedule]:
    size = n - 8
    K = size // 2

    def team(kind: str, i: int) -> int:
        i %= K
        return 2 * i if kind == "a" else 2 * i + 1

    opp: list[list[Optional[int]]] = [[None] * 7 for _ in range(size)]
    ven: list[list[Optional[str]]] = [[None] * 7 for _ in range(size)]
    free_teams = {team(kind, v) for v in window for kind in "ab"}
    free: list[tuple[int, int]] = []

    def put(u, v, slot, u_home):
        opp[u][slot], opp[v][slot] = v, u
        ven[u][slot], ven[v][slot] = ("H", "A") if u_home else ("A", "H")

    def clear(u, v, slot):
        opp[u][slot] = opp[v][slot] = ven[u][slot] = ven[v][slot] = None

    for i in range(K):
        for cls, (ku, su, kv, sv) in enumerate(_CLASSES):
            u, v = team(ku, i + su), team(kv, i + sv)
            if u in free_teams or v in free_teams:
                free.append((u, v))
                continue
            slot, u_home = _template_game(cls, i)
            if opp[u][slot] is not None or opp[v][slot] is not None:
                return None
            put(u, v, slot, u_home)
    if not all(half_pattern_ok(ven[t]) for t in range(size)):
        return None

    def options(edge):
        u, v = edge
        out = []
        for slot in range(7):
            if opp[u][slot] is None and opp[v][slot] is None:
                for u_home in (True, False):
                    put(u, v, slot, u_home)
                    if half_pattern_ok(ven[u]) and half_pattern_ok(ven[v]):
                        out.append((slot, u_home))
                    clear(u, v, slot)
        return out

    def solve(rest: list[tuple[int, int]]) -> bool:
        if not rest:
            return True
        # most constrained edge first; ties keep list order
        best_edge, best_opts = None, None
        for e in rest:
            opts = options(e)
            if best_opts is None or len(opts) < len(best_opts):
                best_edge, best_opts = e, opts
                if len(opts) <= 1:
                    break
        remaining = [e for e in rest if e != best_edge]
        u, v = best_edge
        for slot, u_home in best_opts:
            put(u, v, slot, u_home)
            if solve(remaining):
                return True
            clear(u, v, slot)
        return False

    if not solve(free):
        return None
    return Schedule(tuple(tuple(Game(o, h == "H") for o, h in zip(opp[t], ven[t]))
                          for t in range(size)))


@lru_cache(maxsize=None)
def build_t1(n: int) -> Schedule:
    """7-slot half-schedule on labels 1..n-8 (0-based teams 0..n-9)."""
    _check_size(n)
    K = (n - 8) // 2
    # widen the irregular window around the wrap until the search succeeds
    for width in range(2, K + 1):
        window = [(w - width // 2) % K for w in range(width)]
        half = _search_t1(n, window)
        if half is not None:
            verify_t1(n, half)
            return half
    raise SearchExhausted(f"no T1 half-schedule found for n = {n}")


def verify_t1(n: int, half: Schedule) -> None:
    rem = remaining_opponents(n)
    for t, row in enumerate(half.rows):
        opps = {g.opponent + 1 for g in row}
        if len(row) != 7 or opps != rem[t + 1]:
            raise SearchExhausted(f"label {t + 1} does not play its remaining opponents")
        pat = half.venues(t)
        if not half_pattern_ok(list(pat)):
            raise SearchExhausted(f"label {t + 1} has venue pattern {pat}")
        if row[0].opponent == row[6].opponent:
            raise SearchExhausted(f"label {t + 1} meets the same team in slots 1 and 7")
        for s, g in enumerate(row):
            back = half.rows[g.opponent][s]
            if back.opponent != t or back.home == g.home:
                raise SearchExhausted(f"slot {s + 1}: label {t + 1} inconsistent")


def build_t2() -> Schedule:
    """The fixed 7-slot single round-robin for eight teams."""
    return Schedule.from_strings(T2_TABLE)


def mirror_concat(half: Schedule) -> Schedule:
    """Append the half with every venue flipped; reject unsafe junctions."""
    rows = []
    for t, row in enumerate(half.rows):
        if row[-1].opponent == row[0].opponent:
            raise JunctionViolation(
                f"team {t + 1} meets team {row[0].opponent + 1} in slots "
                f"{len(row)} and {len(row) + 1}")
        rows.append(row + tuple(Game(g.opponent, not g.home) for g in row))
    full = Schedule(tuple(rows))
    for rep in (check_no_repeater(full), check_at_most(full, 2)):
        if not rep.ok:
            raise JunctionViolation("; ".join(rep.violations))
    return full


@lru_cache(maxsize=None)
def build_phase2(n: int) -> Schedule:
    """Label-space 14-slot schedule for all n teams."""
    _check_size(n)
    t1 = mirror_concat(build_t1(n))
    t2 = mirror_concat(build_t2())
    sb = ScheduleBuilder(n, 14)
    base = n - 8
    for t, row in enumerate(t1.rows):
        for s, g in enumerate(row):
            if g.home:
                sb.put(s, t, g.opponent)
    for t, row in enumerate(t2.rows):
        for s, g in enumerate(row):
            if g.home:
                sb.put(s, base + t, base + g.opponent)
    return sb.build()


def t1_surplus(n: int, d) -> tuple:
    """Surplus of T1 in phase 2 when every away game is a separate round trip.

    Returns (sum over T1 of distances to remaining opponents,
    14 x T1 matching edges + 16 x even chain) for a label-space distance
    function ``d(a, b)`` on 1-based labels.
    """
    size = n - 8
    rem = remaining_opponents(n)
    surplus = sum(d(i, j) for i in range(1, size + 1) for j in rem[i])
    matching = sum(d(2 * i - 1, 2 * i) for i in range(1, size // 2 + 1))
    evens = list(range(2, size + 1, 2))
    chain = sum(d(evens[k - 1], evens[k]) for k in range(len(evens)))
    return surplus, 14 * matching + 16 * chain
