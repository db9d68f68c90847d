import itertools

import pytest

from ttp_approx.instance import parse_instance
from ttp_approx.schedule import Schedule, ScheduleBuilder, is_feasible, total_distance

SAMPLE4_TEXT = "4\n0 1 2 3\n1 0 2 3\n2 2 0 3\n3 3 3 0"

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


@pytest.fixture
def sample4():
    return parse_instance(SAMPLE4_TEXT)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split(".")[0].rstrip("abc")), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")


# ---------------------------------------------------------------- oracles
# Deliberately naive: they share nothing with the library's algorithms.

def all_perfect_matchings(nodes):
    nodes = list(nodes)
    if not nodes:
        yield []
        return
    a = nodes[0]
    for k in range(1, len(nodes)):
        b = nodes[k]
        rest = nodes[1:k] + nodes[k + 1:]
        for m in all_perfect_matchings(rest):
            yield [(a, b)] + m


def brute_matching_weight(d, nodes=None):
    nodes = range(len(d)) if nodes is None else nodes
    return min(sum(d[a][b] for a, b in m) for m in all_perfect_matchings(nodes))


def brute_mst_weight(d):
    """Minimum over every (n-1)-edge subset that connects all vertices."""
    n = len(d)
    edges = list(itertools.combinations(range(n), 2))
    best = None
    for subset in itertools.combinations(edges, n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        acyclic = True
        for a, b in subset:
            ra, rb = find(a), find(b)
            if ra == rb:
                acyclic = False
                break
            parent[ra] = rb
        if acyclic:
            w = sum(d[a][b] for a, b in subset)
            best = w if best is None else min(best, w)
    return best


def brute_tsp(d):
    n = len(d)
    return min(sum(d[p[k - 1]][p[k]] for k in range(n))
               for p in ((0,) + q for q in itertools.permutations(range(1, n))))


def enumerate_drr4():
    """Every double round-robin on four teams in six slots (feasible or not)."""
    configs = []
    for (a, b), (c, e) in [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]:
        for h1 in (True, False):
            for h2 in (True, False):
                g1 = (a, b) if h1 else (b, a)
                g2 = (c, e) if h2 else (e, c)
                configs.append((g1, g2))
    # a DRR uses each ordered pair once: six configurations with disjoint games
    for combo in itertools.combinations(range(len(configs)), 6):
        games = [g for k in combo for g in configs[k]]
        if len(set(games)) != 12:
            continue
        for order in itertools.permutations(combo):
            sb = ScheduleBuilder(4, 6)
            for slot, k in enumerate(order):
                for home, away in configs[k]:
                    sb.put(slot, home, away)
            yield sb.build()


def brute_optimum4(inst):
    best = None
    for s in enumerate_drr4():
        if is_feasible(s):
            v = total_distance(s, inst)
            best = v if best is None else min(best, v)
    return best
