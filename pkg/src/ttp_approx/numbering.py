"""Team relabelling used by the construction.

Matching pairs receive labels <2i-1, 2i>.  The three pairs with the smallest
row-sum totals become <n-5, n-4>, <n-3, n-2>, <n-1, n> (in that order), the
remaining pair closest to those six teams becomes <n-7, n-6>, and the other
pairs are labelled along the Hamilton cycle so that the even labels
2, 4, ..., n-8 appear in cycle order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .instance import TOL, Instance, Number, stats
from .metric_graph import HamiltonCycle, Matching


class NumberingError(RuntimeError):
    pass


@dataclass(frozen=True)
class Numbering:
    # label_of[team] in 1..n; team_of[label - 1] is the inverse
    label_of: tuple[int, ...]
    team_of: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.label_of)

    def label(self, team: int) -> int:
        return self.label_of[team]

    def team(self, label: int) -> int:
        return self.team_of[label - 1]

    @classmethod
    def from_teams(cls, team_of) -> "Numbering":
        team_of = tuple(team_of)
        label_of = [0] * len(team_of)
        for lab, team in enumerate(team_of, start=1):
            label_of[team] = lab
        if sorted(team_of) != list(range(len(team_of))):
            raise NumberingError("labels do not form a bijection")
        return cls(tuple(label_of), team_of)


def _exact(x: Number, integral: bool):
    return Fraction(x) if integral else x


def _le(a, b, integral: bool) -> bool:
    return a <= b if integral else a <= b + TOL


def property_a(inst: Instance, num: Numbering) -> tuple[Number, Fraction | float]:
    """(s(n-5) + ... + s(n), 6*Delta/n)."""
    st = stats(inst)
    n = inst.n
    lhs = sum(st.s[num.team(lab)] for lab in range(n - 5, n + 1))
    return lhs, _exact(6 * st.delta, inst.integral) / n


def property_b(inst: Instance, num: Numbering) -> tuple[Number, Fraction | float]:
    """(t(n-7) + t(n-6), 12*Delta / (n(n-6)))."""
    st = stats(inst, num)
    n = inst.n
    return st.t[n - 7] + st.t[n - 6], _exact(12 * st.delta, inst.integral) / (n * (n - 6))


def even_chain_length(inst: Instance, num: Numbering) -> Number:
    """d(2,4) + d(4,6) + ... + d(n-10, n-8) + d(n-8, 2) over labels."""
    evens = [num.team(lab) for lab in range(2, inst.n - 7, 2)]
    return sum(inst.d[evens[k - 1]][evens[k]] for k in range(len(evens)))


def property_c(num: Numbering, cycle: HamiltonCycle) -> bool:
    """Even labels 2..n-8 occur in cycle order (up to rotation)."""
    n = num.n
    seq = [num.label(t) for t in cycle.order if num.label(t) <= n - 8 and num.label(t) % 2 == 0]
    start = seq.index(2)
    return seq[start:] + seq[:start] == list(range(2, n - 7, 2))


def choose_numbering(inst: Instance, matching: Matching, cycle: HamiltonCycle) -> Numbering:
    n = inst.n
    if n % 4 != 2 or n < 10:
        raise ValueError(f"numbering needs n = 4m + 2 >= 10, got {n}")
    s = stats(inst).s
    pairs = [tuple(sorted(p)) for p in matching.pairs]
    pairs.sort()
    if sorted(t for p in pairs for t in p) != list(range(n)):
        raise NumberingError("matching does not cover every team exactly once")

    # stable sort keeps lexicographic pair order among equal sums
    by_s = sorted(pairs, key=lambda p: s[p[0]] + s[p[1]])
    top = by_s[:3]
    rest = [p for p in pairs if p not in top]
    top_teams = [t for p in top for t in p]

    def t_sum(p):
        return sum(inst.d[i][j] for i in p for j in top_teams)

    fourth = min(rest, key=t_sum)
    black = [p for p in rest if p != fourth]

    team_of = [None] * n
    for lab, p in zip((n - 7, n - 5, n - 3, n - 1), (fourth, *top)):
        team_of[lab - 1], team_of[lab] = p

    position = {team: k for k, team in enumerate(cycle.order)}
    # earlier-visited member becomes the even label
    firsts = []
    for p in black:
        early, late = sorted(p, key=position.__getitem__)
        firsts.append((position[early], early, late))
    firsts.sort()
    for k, (_, early, late) in enumerate(firsts):
        team_of[2 * k] = late       # label 2k+1
        team_of[2 * k + 1] = early  # label 2k+2
    num = Numbering.from_teams(team_of)
    verify_numbering(inst, matching, cycle, num)
    return num


def verify_numbering(inst: Instance, matching: Matching, cycle: HamiltonCycle,
                     num: Numbering) -> None:
    """Re-check the pair labels and properties (a), (b), (c) and the
    minimality of the selected pairs; raise :class:`NumberingError`."""
    n = inst.n
    integral = inst.integral
    pairset = {frozenset(p) for p in matching.pairs}
    for k in range(1, n, 2):
        if frozenset((num.team(k), num.team(k + 1))) not in pairset:
            raise NumberingError(f"labels {k},{k + 1} are not a matching pair")
    lhs, rhs = property_a(inst, num)
    if not _le(lhs, rhs, integral):
        raise NumberingError(f"property (a) fails: {lhs} > {rhs}")
    lhs, rhs = property_b(inst, num)
    if not _le(lhs, rhs, integral):
        raise NumberingError(f"property (b) fails: {lhs} > {rhs}")
    if not property_c(num, cycle):
        raise NumberingError("property (c) fails: even labels out of cycle order")

    s = stats(inst).s
    pair_sum = {k: s[num.team(k)] + s[num.team(k + 1)] for k in range(1, n, 2)}
    worst_top = max(pair_sum[k] for k in (n - 5, n - 3, n - 1))
    if any(pair_sum[k] < worst_top for k in range(1, n - 6, 2)):
        raise NumberingError("a cheaper pair was left out of labels n-5..n")
    if not pair_sum[n - 5] <= pair_sum[n - 3] <= pair_sum[n - 1]:
        raise NumberingError("labels n-5..n are not in ascending pair-sum order")
    t = stats(inst, num).t
    chosen = t[n - 7] + t[n - 6]
    if any(t[k] + t[k + 1] < chosen for k in range(1, n - 8, 2)):
        raise NumberingError("a pair with smaller t-sum exists than <n-7, n-6>")
