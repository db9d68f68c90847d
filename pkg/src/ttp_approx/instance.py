"""Metric TTP instances: parsing, validation, rendering and row sums.

An instance file looks like::

    4
    0 1 2 3   # Oslo
    1 0 2 3   # Bergen
    2 2 0 3
    3 3 3 0

The first line is the team count, followed by one whitespace-separated row of
the distance matrix per team.  A trailing ``# name`` comment names the team;
unnamed teams default to ``T1`` .. ``Tn``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

Number = Union[int, float]

#: Comparison slack used whenever distances are not all integers.
TOL = 1e-9


class InstanceError(ValueError):
    """Raised when an instance file or matrix is malformed."""


class MalformedNumber(InstanceError):
    pass


class RowLength(InstanceError):
    pass


class Asymmetric(InstanceError):
    pass


class NegativeDistance(InstanceError):
    pass


class NonzeroDiagonal(InstanceError):
    pass


class BadTeamCount(InstanceError):
    pass


class TriangleInequalityWarning(UserWarning):
    """The matrix is not metric; the approximation guarantee is void."""


@dataclass(frozen=True)
class Instance:
    d: tuple[tuple[Number, ...], ...]
    names: tuple[str, ...] = ()
    metric: bool = field(default=True, compare=False)

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def integral(self) -> bool:
        return all(isinstance(x, int) for row in self.d for x in row)

    def dist(self, i: int, j: int) -> Number:
        return self.d[i][j]

    def scaled(self, factor: Number) -> "Instance":
        return Instance(
            tuple(tuple(x * factor for x in row) for row in self.d),
            self.names,
            self.metric,
        )

    def permuted(self, order: Sequence[int]) -> "Instance":
        """Instance where new team ``k`` is old team ``order[k]``."""
        d = tuple(tuple(self.d[a][b] for b in order) for a in order)
        return Instance(d, tuple(self.names[a] for a in order), self.metric)


@dataclass(frozen=True)
class InstanceStats:
    s: tuple[Number, ...]
    delta: Number
    # keyed by label 1..n-6; empty until a numbering fixes teams n-5..n
    t: dict[int, Number] = field(default_factory=dict)


def _coerce(x: Number) -> Number:
    if isinstance(x, float) and x.is_integer():
        return int(x)
    return x


def triangle_violations(d: Sequence[Sequence[Number]], limit: int = 10):
    n = len(d)
    slack = 0 if all(isinstance(x, int) for row in d for x in row) else TOL
    found = []
    for i in range(n):
        for j in range(n):
            dij = d[i][j]
            for k in range(n):
                if dij + d[j][k] < d[i][k] - slack:
                    found.append((i, j, k))
                    if len(found) >= limit:
                        return found
    return found


def make_instance(matrix: Sequence[Sequence[Number]],
                  names: Optional[Sequence[str]] = None) -> Instance:
    """Validate ``matrix`` and wrap it in an :class:`Instance`.

    Integral entries (including floats like ``3.0``) are stored as ints so
    bound arithmetic stays exact.  A triangle-inequality violation only emits
    :class:`TriangleInequalityWarning`.
    """
    n = len(matrix)
    if n < 4 or n % 2:
        raise BadTeamCount(f"team count must be even and >= 4, got {n}")
    rows = []
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise RowLength(f"row {i + 1} has {len(row)} entries, expected {n}")
        rows.append(tuple(_coerce(x) for x in row))
    integral = all(isinstance(x, int) for row in rows for x in row)
    slack = 0 if integral else TOL
    for i in range(n):
        if abs(rows[i][i]) > slack:
            raise NonzeroDiagonal(f"d[{i + 1}][{i + 1}] = {rows[i][i]}")
        for j in range(n):
            if rows[i][j] < 0:
                raise NegativeDistance(f"d[{i + 1}][{j + 1}] = {rows[i][j]}")
            if abs(rows[i][j] - rows[j][i]) > slack:
                raise Asymmetric(
                    f"d[{i + 1}][{j + 1}] = {rows[i][j]} but "
                    f"d[{j + 1}][{i + 1}] = {rows[j][i]}")
    if names is None or not any(names):
        names = [f"T{i + 1}" for i in range(n)]
    else:
        names = [nm or f"T{i + 1}" for i, nm in enumerate(names)]
    metric = not triangle_violations(rows, limit=1)
    if not metric:
        i, j, k = triangle_violations(rows, limit=1)[0]
        warnings.warn(
            f"triangle inequality violated: d[{i + 1}][{j + 1}] + "
            f"d[{j + 1}][{k + 1}] < d[{i + 1}][{k + 1}]",
            TriangleInequalityWarning, stacklevel=2)
    return Instance(tuple(rows), tuple(names), metric)


def _number(token: str, where: str) -> Number:
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        raise MalformedNumber(f"{where}: not a number: {token!r}") from None


def parse_instance(text: str) -> Instance:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedNumber("empty instance")
    head = lines[0].split("#", 1)[0].split()
    if len(head) != 1:
        raise MalformedNumber(f"line 1: expected team count, got {lines[0]!r}")
    n = _number(head[0], "line 1")
    if not isinstance(n, int):
        raise MalformedNumber(f"line 1: team count must be an integer, got {n}")
    body = lines[1:]
    if len(body) != n:
        raise RowLength(f"expected {n} matrix rows, got {len(body)}")
    matrix, names = [], []
    for lineno, line in enumerate(body, start=2):
        data, _, comment = line.partition("#")
        matrix.append([_number(tok, f"line {lineno}") for tok in data.split()])
        names.append(comment.strip())
        if len(matrix[-1]) != n:
            raise RowLength(
                f"line {lineno}: {len(matrix[-1])} entries, expected {n}")
    if n < 4 or n % 2:
        raise BadTeamCount(f"team count must be even and >= 4, got {n}")
    return make_instance(matrix, names)


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def render_instance(inst: Instance) -> str:
    out = [str(inst.n)]
    for row, name in zip(inst.d, inst.names):
        out.append(" ".join(repr(x) if isinstance(x, float) else str(x)
                            for x in row) + f"  # {name}")
    return "\n".join(out) + "\n"


def stats(inst: Instance, numbering=None) -> InstanceStats:
    """Row sums s(i), their total, and (with a numbering) the sums t(i).

    ``t`` is keyed by label: t(i) is the distance from the team labelled i to
    the six teams labelled n-5..n, for labels i <= n-6.
    """
    n = inst.n
    s = tuple(sum(inst.d[i][j] for j in range(n) if j != i) for i in range(n))
    delta = sum(s)
    t: dict[int, Number] = {}
    if numbering is not None:
        top = [numbering.team(lab) for lab in range(n - 5, n + 1)]
        for lab in range(1, n - 5):
            i = numbering.team(lab)
            t[lab] = sum(inst.d[i][j] for j in top)
    return InstanceStats(s, delta, t)
