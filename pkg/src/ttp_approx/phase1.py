"""First phase: n/2 - 4 blocks of four slots built with a rotating circle layout.

Labels are paired on vertices <2v+1, 2v+2>.  The K = n/2 - 4 black vertices
(labels 1..n-8) rotate; four gray vertices stay put.  In each block a black
vertex sits at a relative position q in -k..k (K = 2k+1) and moves to q-1
(wrapping -k -> k) for the next block.  Arcs per block:

* q = 0 with gray <n-3, n-2>           HAAH arc, black side HAAH
* q = +1 and q = -1 with <n-1, n>      intermediate arc, +1 on roles (1, 2)
* q = +j and q = -j, 2 <= j <= k-1     HHAA arc, +j side HHAA
* q = +k with gray <n-5, n-4>          HAAH arc, black side AHHA
* q = -k with gray <n-7, n-6>          HHAA arc, black side AAHH

In the last block every black-black arc switches to the HAAH table, the
intermediate arc to its last-block table and the <n-7, n-6> arc to HAAH with
the gray side on roles (1, 2).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .schedule import Game, Schedule, ScheduleBuilder, runs


class ConstructionError(RuntimeError):
    """A construction invariant failed; this is a defect, never expected."""

    def __init__(self, prop: str, message: str, block: Optional[int] = None):
        where = f" (block {block + 1})" if block is not None else ""
        super().__init__(f"{prop}{where}: {message}")
        self.prop = prop
        self.block = block


class ArcKind(enum.Enum):
    HHAA = "HHAA"
    HAAH = "HAAH"
    INTERMEDIATE = "intermediate"
    INTERMEDIATE_LAST = "intermediate-last"

    @property
    def arity(self) -> int:
        return 3 if self in (ArcKind.INTERMEDIATE, ArcKind.INTERMEDIATE_LAST) else 2


# Game grids per role; roles 1..4 then x, y.
ARC_TABLES: dict[ArcKind, dict[str, str]] = {
    ArcKind.HHAA: {
        "1": "3H 4H 3A 4A",
        "2": "4H 3H 4A 3A",
        "3": "1A 2A 1H 2H",
        "4": "2A 1A 2H 1H",
    },
    ArcKind.HAAH: {
        "1": "3H 4A 3A 4H",
        "2": "4H 3A 4A 3H",
        "3": "1A 2H 1H 2A",
        "4": "2A 1H 2H 1A",
    },
    ArcKind.INTERMEDIATE: {
        "1": "xH 3H xA 3A",
        "2": "4H xH 4A xA",
        "3": "yA 1A yH 1H",
        "4": "2A yA 2H yH",
        "x": "1A 2A 1H 2H",
        "y": "3H 4H 3A 4A",
    },
    ArcKind.INTERMEDIATE_LAST: {
        "1": "xH 3A xA 3H",
        "2": "4H xA 4A xH",
        "3": "yA 1H yH 1A",
        "4": "2A yH 2H yA",
        "x": "1A 2H 1H 2A",
        "y": "3H 4A 3A 4H",
    },
}

_ROLE_ORDER = ("1", "2", "3", "4", "x", "y")


def arc_games(kind: ArcKind, pairs: Sequence[tuple[int, int]]) -> dict[int, list[Game]]:
    """Four-slot games of one arc; ``pairs`` fill roles (1,2), (3,4)[, (x,y)]."""
    if len(pairs) != kind.arity:
        raise ValueError(f"{kind.value} arc takes {kind.arity} team pairs, got {len(pairs)}")
    team = dict(zip(_ROLE_ORDER, (t for p in pairs for t in p)))
    out = {}
    for role, row in ARC_TABLES[kind].items():
        out[team[role]] = [Game(team[tok[:-1]], tok[-1] == "H") for tok in row.split()]
    return out


@dataclass(frozen=True)
class Arc:
    kind: ArcKind
    pairs: tuple[tuple[int, int], ...]
    where: str  # human-readable position tag for dumps


@dataclass(frozen=True)
class BlockLayout:
    block: int
    arcs: tuple[Arc, ...]
    last: bool

    def dump(self) -> str:
        head = f"block {self.block + 1}{' (last)' if self.last else ''}"
        body = []
        for arc in self.arcs:
            pairs = " ".join(f"<{a + 1},{b + 1}>" for a, b in arc.pairs)
            body.append(f"  {arc.where:<14} {arc.kind.value:<18} {pairs}")
        return "\n".join([head, *body])


def _check_size(n: int) -> None:
    if n % 4 != 2 or n < 30:
        raise ValueError(f"construction needs n = 4m + 2 >= 30, got {n}")


def num_blocks(n: int) -> int:
    return n // 2 - 4


def vertex_pair(v: int) -> tuple[int, int]:
    """0-based teams of the labels <2v+1, 2v+2>."""
    return (2 * v, 2 * v + 1)


def relative_position(v: int, block: int, offset: int, K: int) -> int:
    r = (v + offset - block) % K
    return r if r <= K // 2 else r - K


def block_layouts(n: int, offset: int) -> list[BlockLayout]:
    _check_size(n)
    K = num_blocks(n)
    if not 0 <= offset < K:
        raise ValueError(f"offset must lie in 0..{K - 1}, got {offset}")
    k = K // 2
    g_bottom = (n - 8, n - 7)   # labels <n-7, n-6>
    g_top = (n - 6, n - 5)      # labels <n-5, n-4>
    g_left = (n - 4, n - 3)     # labels <n-3, n-2>
    g_mid = (n - 2, n - 1)      # labels <n-1, n>
    out = []
    for b in range(K):
        last = b == K - 1
        at = {relative_position(v, b, offset, K): vertex_pair(v) for v in range(K)}
        plain = ArcKind.HAAH if last else ArcKind.HHAA
        arcs = [
            Arc(ArcKind.HAAH, (at[0], g_left), "left"),
            Arc(ArcKind.INTERMEDIATE_LAST if last else ArcKind.INTERMEDIATE,
                (at[1], at[-1], g_mid), "left-vertical"),
        ]
        arcs += [Arc(plain, (at[j], at[-j]), f"chord {j}") for j in range(2, k)]
        arcs.append(Arc(ArcKind.HAAH, (g_top, at[k]), "top-right"))
        arcs.append(Arc(plain, (g_bottom, at[-k]), "bottom-right"))
        out.append(BlockLayout(b, tuple(arcs), last))
    return out


def layout_schedule(n: int, layouts: Sequence[BlockLayout]) -> Schedule:
    sb = ScheduleBuilder(n, 4 * len(layouts))
    for lay in layouts:
        for arc in lay.arcs:
            for team, games in arc_games(arc.kind, arc.pairs).items():
                for s, g in enumerate(games):
                    if g.home:
                        sb.put(4 * lay.block + s, team, g.opponent)
    return sb.build()


@lru_cache(maxsize=None)
def build_phase1(n: int, offset: int) -> Schedule:
    """Label-space schedule of slots 1..2n-16 (team ``k`` is label ``k+1``).

    The P1-P7 contract is verified before returning.
    """
    layouts = block_layouts(n, offset)
    sched = layout_schedule(n, layouts)
    verify_phase1(n, layouts, sched)
    return sched


def phase1_unmet_pairs(n: int) -> set[frozenset[int]]:
    """Unordered 0-based label pairs that never meet in phase 1 by design."""
    from .phase2 import remaining_opponents  # local: phase2 imports nothing here

    expected = {frozenset((a, b)) for a in range(n - 8, n) for b in range(a + 1, n)}
    for lab, opps in remaining_opponents(n).items():
        expected |= {frozenset((lab - 1, o - 1)) for o in opps}
    return expected


def verify_phase1(n: int, layouts: Sequence[BlockLayout], sched: Schedule) -> None:
    K = num_blocks(n)
    if len(layouts) != K or sched.num_slots != 4 * K:
        raise ConstructionError("P1", f"expected {K} blocks of 4 slots")
    g_top, g_left, g_mid = (n - 6, n - 5), (n - 4, n - 3), (n - 2, n - 1)
    for lay in layouts:
        b = lay.block
        covered = sorted(t for arc in lay.arcs for p in arc.pairs for t in p)
        if covered != list(range(n)):
            raise ConstructionError("P1", "arcs do not cover every team once", b)
        for arc in lay.arcs:
            if arc.kind is ArcKind.HAAH and not lay.last:
                if not {g_top, g_left} & set(arc.pairs):
                    raise ConstructionError("P3", f"HAAH arc {arc.where} lacks a surplus gray pair", b)
            if arc.kind.arity == 3:
                if arc.pairs[2] != g_mid:
                    raise ConstructionError("P4", "intermediate role is not <n-1, n>", b)
                want = ArcKind.INTERMEDIATE_LAST if lay.last else ArcKind.INTERMEDIATE
                if arc.kind is not want:
                    raise ConstructionError("P4", f"{arc.kind.value} arc in wrong block", b)
            if lay.last and arc.kind is ArcKind.HHAA:
                raise ConstructionError("P1", "HHAA arc in the last block", b)
        for t in range(n):
            pat = "".join("H" if g.home else "A" for g in sched.rows[t][4 * b:4 * b + 4])
            if pat.count("H") != 2:
                raise ConstructionError("P1", f"team {t + 1} pattern {pat}", b)
            if lay.last and pat not in ("HAAH", "AHHA"):
                raise ConstructionError("P1", f"team {t + 1} has {pat} in the last block", b)

    # P2: both games of a pair inside one block, one at each venue
    meetings: dict[frozenset[int], list[tuple[int, bool]]] = {}
    for t in range(n):
        for s, g in enumerate(sched.rows[t]):
            if t < g.opponent:
                meetings.setdefault(frozenset((t, g.opponent)), []).append((s, g.home))
    for pair, games in meetings.items():
        blocks = {s // 4 for s, _ in games}
        if len(games) != 2 or len(blocks) != 1 or games[0][1] == games[1][1]:
            a, b = sorted(pair)
            raise ConstructionError("P2", f"pair ({a + 1},{b + 1}) games {games}")

    # P5: unmet pairs are exactly the intra-T2 pairs plus the remaining relation
    everyone = {frozenset((a, b)) for a in range(n) for b in range(a + 1, n)}
    if everyone - set(meetings) != phase1_unmet_pairs(n):
        raise ConstructionError("P5", "unmet pairs differ from the phase-2 plan")

    for t in range(n):
        pat = sched.venues(t)
        # P6
        if pat[-2:] not in ("HA", "AH"):
            raise ConstructionError("P6", f"team {t + 1} ends phase 1 with {pat[-2:]}")
        # P7: black teams flip at every junction; gray teams that repeat a
        # HAAH/AHHA block see a run of exactly two there
        for b in range(1, K):
            if pat[4 * b - 1] == pat[4 * b] and t < n - 8:
                raise ConstructionError("P7", f"team {t + 1} does not flip venue", b)
        if any(length > 2 for _, _, length in runs(pat)):
            raise ConstructionError("P7", f"team {t + 1} has a run longer than two")
