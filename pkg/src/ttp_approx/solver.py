"""End-to-end pipeline: bounds, numbering, both phases, offset choice and
certification of the 1 + 24/n guarantee."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .instance import TOL, Instance, Number, stats
from .metric_graph import (HamiltonCycle, Matching, SpanningTree, christofides_cycle,
                           min_perfect_matching, min_spanning_tree,
                           odd_vertex_matching_weight)
from .numbering import (Numbering, choose_numbering, even_chain_length, property_a,
                        property_b, property_c)
from .oracle import brute_force_optimal
from .phase1 import ArcKind, block_layouts, build_phase1, num_blocks
from .phase2 import build_phase2, t1_surplus
from .schedule import (Schedule, concat, feasibility_reports, legs, team_distances,
                       total_distance)

log = logging.getLogger(__name__)


class UnsupportedSize(ValueError):
    pass


class Infeasible(RuntimeError):
    pass


def _num(x: Number, integral: bool):
    """Exact rational for integral instances so bounds compare exactly."""
    return Fraction(x) if integral else x


def _le(a, b, integral: bool) -> bool:
    return a <= b if integral else a <= b + TOL * max(1.0, abs(b))


def lower_bound_independent(inst: Instance, matching: Optional[Matching] = None) -> Number:
    """Delta + n * d(M)."""
    matching = matching or min_perfect_matching(inst)
    return stats(inst).delta + inst.n * matching.weight


def lower_bound_tree(inst: Instance, tree: Optional[SpanningTree] = None,
                     matching: Optional[Matching] = None) -> Number:
    """n * (d(T) + d(M))."""
    tree = tree or min_spanning_tree(inst)
    matching = matching or min_perfect_matching(inst)
    return inst.n * (tree.weight + matching.weight)


def analysis_upper_bound(inst: Instance, numbering: Optional[Numbering] = None,
                         tree: Optional[SpanningTree] = None,
                         matching: Optional[Matching] = None):
    """(1 + 8/n) Delta + (n + 6) d(M) + 16 (d(T) + d(M)).

    The value does not depend on the numbering; the argument is accepted so
    the call mirrors the pipeline order.
    """
    tree = tree or min_spanning_tree(inst)
    matching = matching or min_perfect_matching(inst)
    n = inst.n
    integral = inst.integral
    delta = _num(stats(inst).delta, integral)
    dm, dt = _num(matching.weight, integral), _num(tree.weight, integral)
    return (1 + _num(8, integral) / n) * delta + (n + 6) * dm + 16 * (dt + dm)


def construct(inst: Instance, numbering: Numbering, offset: int) -> Schedule:
    """Full schedule for one initial position, in original team indices."""
    n = inst.n
    labels = concat(build_phase1(n, offset), build_phase2(n))
    return labels.relabel(numbering.team_of)


def _offset_total(args) -> tuple[Number, int]:
    inst, numbering, offset = args
    return total_distance(construct(inst, numbering, offset), inst), offset


def choose_initial_position(inst: Instance, numbering: Numbering,
                            jobs: int = 1) -> tuple[int, Schedule]:
    """Evaluate every initial position by total distance; lowest offset wins ties."""
    work = [(inst, numbering, off) for off in range(num_blocks(inst.n))]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_offset_total, work))
    else:
        results = [_offset_total(w) for w in work]
    _, offset = min(results)
    return offset, construct(inst, numbering, offset)


def offset_totals(inst: Instance, numbering: Numbering) -> list[Number]:
    return [_offset_total((inst, numbering, off))[0] for off in range(num_blocks(inst.n))]


def last_block_surplus(inst: Instance, numbering: Numbering, offset: int) -> Number:
    """Surplus charged to the last block of phase 1 for this offset.

    HAAH arcs between black vertices and the <n-7, n-6> arc contribute their
    four cross distances; the last-block intermediate arc contributes
    d(1,x) + d(2,x) + d(3,y) + d(4,y) + d(1,3) + d(2,4) in role terms.
    """
    n = inst.n
    d = inst.d
    team = numbering.team_of
    last = block_layouts(n, offset)[-1]
    surplus = 0
    for arc in last.arcs:
        if arc.where in ("left", "top-right"):
            continue  # charged to the surplus gray teams via s(i)
        if arc.kind is ArcKind.HAAH:
            (p1, p2), (q1, q2) = arc.pairs
            surplus += sum(d[team[q]][team[p]] for q in (q1, q2) for p in (p1, p2))
        elif arc.kind is ArcKind.INTERMEDIATE_LAST:
            (r1, r2), (r3, r4), (x, y) = [tuple(team[t] for t in p) for p in arc.pairs]
            surplus += d[r1][x] + d[r2][x] + d[r3][y] + d[r4][y] + d[r1][r3] + d[r2][r4]
    return surplus


def phase1_matching_traffic(inst: Instance, sched: Schedule, numbering: Numbering) -> Number:
    """Distance of phase-1 itinerary hops between matching partners."""
    n = inst.n
    part = sched.slots(0, 4 * num_blocks(n))
    partner = {}
    for lab in range(1, n, 2):
        a, b = numbering.team(lab), numbering.team(lab + 1)
        partner[a], partner[b] = b, a
    return sum(inst.d[u][v] for t in range(n) for u, v in legs(part, t) if partner[u] == v)


@dataclass
class BoundsReport:
    n: int
    lb1: Number
    lb2: Number
    analysis_bound: Optional[Number]
    total: Optional[Number]
    ratio: Optional[float]
    offset: Optional[int]
    per_team: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    method: str = "construction"

    @property
    def certified(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def to_text(self, names=None) -> str:
        def fmt(x):
            if x is None:
                return "n/a"
            if isinstance(x, Fraction):
                return str(x.numerator) if x.denominator == 1 else f"{float(x):.6f}"
            if isinstance(x, float):
                return f"{x:.6f}"
            return str(x)

        lines = [
            f"method: {self.method}",
            f"n: {self.n}",
            f"lb1: {fmt(self.lb1)}",
            f"lb2: {fmt(self.lb2)}",
            f"analysis_bound: {fmt(self.analysis_bound)}",
            f"total: {fmt(self.total)}",
            f"ratio: {fmt(self.ratio)}",
            f"guarantee: {fmt(1 + 24 / self.n)}",
            f"offset: {fmt(self.offset)}",
        ]
        for t, dist in enumerate(self.per_team):
            label = names[t] if names else f"T{t + 1}"
            lines.append(f"team {t + 1} ({label}): {fmt(dist)}")
        for name, ok in self.checks.items():
            lines.append(f"check {name}: {'pass' if ok else 'FAIL'}")
        return "\n".join(lines) + "\n"


@dataclass
class Solution:
    schedule: Optional[Schedule]
    report: BoundsReport
    numbering: Optional[Numbering] = None
    cycle: Optional[HamiltonCycle] = None
    tree: Optional[SpanningTree] = None
    matching: Optional[Matching] = None


def _ratio(total, lb1) -> Optional[float]:
    if total is None:
        return None
    if lb1 == 0:
        return 1.0 if total == 0 else float("inf")
    return float(Fraction(total) / Fraction(lb1)) if isinstance(lb1, int) else total / lb1


def certify(inst: Instance, sched: Schedule, numbering: Numbering, offset: int,
            tree: SpanningTree, matching: Matching, cycle: HamiltonCycle) -> BoundsReport:
    n = inst.n
    integral = inst.integral
    st = stats(inst)
    delta = _num(st.delta, integral)
    dm, dt = _num(matching.weight, integral), _num(tree.weight, integral)
    lb1 = lower_bound_independent(inst, matching)
    lb2 = lower_bound_tree(inst, tree, matching)
    bound = analysis_upper_bound(inst, numbering, tree, matching)
    per_team = team_distances(sched, inst)
    total = sum(per_team)
    eighth = _num(8, integral) / n

    checks = {rep.check: rep.ok for rep in feasibility_reports(sched)}
    checks["total <= analysis bound"] = _le(total, bound, integral)
    checks["analysis bound <= (1+8/n) lb1 + (16/n) lb2"] = _le(
        bound, (1 + eighth) * lb1 + 2 * eighth * lb2, integral)
    checks["total <= (1+24/n) lb1"] = _le(total, (1 + 3 * eighth) * lb1, integral)
    checks["lb1 >= lb2"] = _le(lb2, lb1, integral)
    checks["d(T) <= s(i) for all i"] = all(_le(tree.weight, s, integral) for s in st.s)
    checks["surplus budget: Delta/(n-8) + 12 Delta/(n(n-6)) <= 2 Delta/n"] = _le(
        delta / (n - 8) + 12 * delta / (n * (n - 6)), 2 * delta / n, integral)
    lhs, rhs = property_a(inst, numbering)
    checks["numbering (a)"] = _le(lhs, rhs, integral)
    lhs, rhs = property_b(inst, numbering)
    checks["numbering (b)"] = _le(lhs, rhs, integral)
    checks["numbering (c)"] = property_c(numbering, cycle)
    chain = even_chain_length(inst, numbering)
    checks["even chain <= cycle length"] = _le(chain, cycle.length, integral)
    checks["even chain <= d(T) + d(M)"] = _le(chain, dt + dm, integral)
    checks["cycle <= d(T) + d(M_odd)"] = _le(
        cycle.length, dt + _num(odd_vertex_matching_weight(inst, tree), integral), integral)
    checks["phase-1 matching traffic <= (n-8) d(M)"] = _le(
        phase1_matching_traffic(inst, sched, numbering), (n - 8) * dm, integral)
    best_surplus = min(last_block_surplus(inst, numbering, off) for off in range(num_blocks(n)))
    checks["min last-block surplus <= Delta/(n-8)"] = _le(best_surplus, delta / (n - 8), integral)

    def dl(a, b):
        return inst.d[numbering.team(a)][numbering.team(b)]

    surplus, chained = t1_surplus(n, dl)
    checks["T1 surplus <= 14 d(M_T1) + 16 chain"] = _le(surplus, chained, integral)
    checks["T1 surplus <= 14 d(M) + 16 (d(T)+d(M))"] = _le(
        surplus, 14 * dm + 16 * (dt + dm), integral)
    tail = sched.slots(sched.num_slots - 14, sched.num_slots)
    t1_travel = sum(team_distances(tail, inst)[numbering.team(lab)] for lab in range(1, n - 7))
    checks["phase-2 T1 travel <= round trips"] = _le(t1_travel, 2 * surplus, integral)

    return BoundsReport(n, lb1, lb2, bound, total, _ratio(total, lb1), offset,
                        per_team, checks)


def solve(inst: Instance, jobs: int = 1, allow_n6_oracle: bool = False) -> Solution:
    n = inst.n
    if n == 4 or (n == 6 and allow_n6_oracle):
        return _solve_by_oracle(inst, allow_n6_oracle)
    if n % 4 != 2 or n < 30:
        raise UnsupportedSize(
            f"unsupported size n = {n}: the construction needs n = 4m + 2 >= 30 "
            f"and exhaustive search covers n = 4 only")
    if not inst.metric:
        log.warning("instance violates the triangle inequality; guarantee is void")
    tree = min_spanning_tree(inst)
    matching = min_perfect_matching(inst)
    cycle = christofides_cycle(inst, tree)
    numbering = choose_numbering(inst, matching, cycle)
    offset, sched = choose_initial_position(inst, numbering, jobs)
    report = certify(inst, sched, numbering, offset, tree, matching, cycle)
    return Solution(sched, report, numbering, cycle, tree, matching)


def _solve_by_oracle(inst: Instance, allow_n6: bool) -> Solution:
    tree = min_spanning_tree(inst)
    matching = min_perfect_matching(inst)
    lb1 = lower_bound_independent(inst, matching)
    lb2 = lower_bound_tree(inst, tree, matching)
    res = brute_force_optimal(inst, allow_n6=allow_n6)
    checks = {"lb1 >= lb2": _le(lb2, lb1, inst.integral), "feasible schedule exists": res.feasible}
    per_team = []
    if res.feasible:
        reports = feasibility_reports(res.schedule)
        for rep in reports:
            checks[rep.check] = rep.ok
        checks["optimum >= lb2"] = _le(lb2, res.value, inst.integral)
        per_team = team_distances(res.schedule, inst)
    report = BoundsReport(inst.n, lb1, lb2, None, res.value, _ratio(res.value, lb1), None,
                          per_team, checks, method="exhaustive")
    return Solution(res.schedule, report, tree=tree, matching=matching)
