"""Exhaustive optimal TTP(2) search for very small instances."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .instance import Instance, Number
from .schedule import Schedule, ScheduleBuilder


class SizeTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    schedule: Optional[Schedule]  # None means no TTP(2) schedule exists
    value: Optional[Number]
    nodes: int

    @property
    def feasible(self) -> bool:
        return self.schedule is not None


def brute_force_optimal(inst: Instance, allow_n6: bool = False, k: int = 2) -> OracleResult:
    """Branch-and-bound over slot-by-slot assignments pruned by the
    double round-robin, no-repeater and at-most-``k`` rules.

    Ties between optimal schedules go to the first one in search order.
    """
    n = inst.n
    if n >= 8 or (n == 6 and not allow_n6):
        raise SizeTooLarge(f"exhaustive search is limited to n = 4 (n = 6 on request), got {n}")
    d = inst.d
    num_slots = 2 * (n - 1)
    where = list(range(n))           # current venue of each team
    last_opp = [-1] * n
    run_venue = [None] * n
    run_len = [0] * n
    homes_left = [n - 1] * n
    played = [[False] * n for _ in range(n)]   # played[h][a]: h hosted a
    away_left = [set(j for j in range(n) if j != t) for t in range(n)]
    slot_games: list[list[tuple[int, int]]] = [[] for _ in range(num_slots)]
    busy = [False] * n
    best: dict = {"value": None, "games": None}
    nodes = 0

    @lru_cache(maxsize=None)
    def path_bound(t: int, c: int, mask: int) -> Number:
        # shortest walk from venue c through every venue in mask, ending home
        if not mask:
            return d[c][t]
        return min(d[c][u] + path_bound(t, u, mask & ~(1 << u))
                   for u in range(n) if mask >> u & 1)

    def tail_bound(t: int) -> Number:
        mask = 0
        for u in away_left[t]:
            mask |= 1 << u
        return path_bound(t, where[t], mask)

    def balance_ok(t: int, slots_left: int) -> bool:
        h = homes_left[t]
        a = slots_left - h
        return h <= k * (a + 1) and a <= k * (h + 1)

    def step(team: int, venue_team: int, home: bool):
        prev = (where[team], last_opp[team], run_venue[team], run_len[team])
        cost = d[where[team]][venue_team]
        where[team] = venue_team
        if run_venue[team] == home:
            run_len[team] += 1
        else:
            run_venue[team], run_len[team] = home, 1
        return prev, cost

    def unstep(team: int, prev) -> None:
        where[team], last_opp[team], run_venue[team], run_len[team] = prev

    def rec(slot: int, cost: Number) -> None:
        nonlocal nodes
        nodes += 1
        if best["value"] is not None and cost + sum(tail_bound(t) for t in range(n)) >= best["value"]:
            return
        if slot == num_slots:
            total = cost + sum(d[where[t]][t] for t in range(n))
            if best["value"] is None or total < best["value"]:
                best["value"] = total
                best["games"] = [list(g) for g in slot_games]
            return
        free = [t for t in range(n) if not busy[t]]
        if not free:
            for t in range(n):
                busy[t] = False
            if all(balance_ok(t, num_slots - slot - 1) for t in range(n)):
                rec(slot + 1, cost)
            for t in range(n):
                busy[t] = True
            return
        t = free[0]
        for j in free[1:]:
            if last_opp[t] == j:
                continue
            for home, away in ((t, j), (j, t)):
                if played[home][away]:
                    continue
                if (run_venue[home] is True and run_len[home] >= k) or \
                        (run_venue[away] is False and run_len[away] >= k):
                    continue
                played[home][away] = True
                homes_left[home] -= 1
                away_left[away].discard(home)
                busy[t] = busy[j] = True
                ph, ch = step(home, home, True)
                pa, ca = step(away, home, False)
                last_opp[home], last_opp[away] = away, home
                slot_games[slot].append((home, away))
                rec(slot, cost + ch + ca)
                slot_games[slot].pop()
                unstep(away, pa)
                unstep(home, ph)
                busy[t] = busy[j] = False
                away_left[away].add(home)
                homes_left[home] += 1
                played[home][away] = False

    rec(0, 0)
    if best["games"] is None:
        return OracleResult(None, None, nodes)
    sb = ScheduleBuilder(n, num_slots)
    for s, games in enumerate(best["games"]):
        for home, away in games:
            sb.put(s, home, away)
    return OracleResult(sb.build(), best["value"], nodes)
