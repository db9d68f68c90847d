"""Random metric instances for tests and benchmarks."""
from __future__ import annotations

import math
import random

from .instance import Instance, make_instance


def metric_closure(d: list[list[int]]) -> list[list[int]]:
    """Shortest-path distances; restores the triangle inequality after rounding."""
    n = len(d)
    d = [row[:] for row in d]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


def random_euclidean(n: int, rng: random.Random, side: int = 1000) -> Instance:
    """Integer points in a square, rounded Euclidean distances, metric closure."""
    pts = [(rng.randint(0, side), rng.randint(0, side)) for _ in range(n)]
    d = [[round(math.dist(p, q)) for q in pts] for p in pts]
    return make_instance(metric_closure(d))


def random_metric(n: int, rng: random.Random, high: int = 100) -> Instance:
    """Closure of uniformly random symmetric integer weights (not Euclidean)."""
    d = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = rng.randint(0, high)
    return make_instance(metric_closure(d))


def unit_metric(n: int) -> Instance:
    return make_instance([[0 if i == j else 1 for j in range(n)] for i in range(n)])
