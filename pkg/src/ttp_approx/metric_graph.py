"""Exact graph primitives on the complete team graph.

Spanning trees and perfect matchings are delegated to networkx (Kruskal and
the blossom algorithm); both are exact, which the lower-bound certificates
rely on.  Edges are inserted in lexicographic order so that ties resolve the
same way on every run.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from .instance import Instance, Number


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    weight: Number


@dataclass(frozen=True)
class SpanningTree:
    edges: tuple[tuple[int, int], ...]
    weight: Number


@dataclass(frozen=True)
class HamiltonCycle:
    order: tuple[int, ...]
    length: Number


def _complete_graph(inst: Instance, nodes: Iterable[int]) -> nx.Graph:
    nodes = sorted(nodes)
    g = nx.Graph()
    g.add_nodes_from(nodes)
    for i, j in itertools.combinations(nodes, 2):
        g.add_edge(i, j, weight=inst.d[i][j])
    return g


def _edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def min_spanning_tree(inst: Instance) -> SpanningTree:
    tree = nx.minimum_spanning_tree(_complete_graph(inst, range(inst.n)),
                                    algorithm="kruskal")
    edges = tuple(sorted(_edge(a, b) for a, b in tree.edges()))
    return SpanningTree(edges, sum(inst.d[a][b] for a, b in edges))


def matching_on(inst: Instance, nodes: Sequence[int]) -> Matching:
    """Minimum-weight perfect matching on the sub-clique induced by ``nodes``."""
    if len(nodes) % 2:
        raise ValueError("perfect matching needs an even number of vertices")
    if not nodes:
        return Matching((), 0)
    mate = nx.min_weight_matching(_complete_graph(inst, nodes))
    pairs = tuple(sorted(_edge(a, b) for a, b in mate))
    if 2 * len(pairs) != len(nodes):
        raise RuntimeError("matching is not perfect")
    return Matching(pairs, sum(inst.d[a][b] for a, b in pairs))


def min_perfect_matching(inst: Instance) -> Matching:
    return matching_on(inst, list(range(inst.n)))


def cycle_length(inst: Instance, order: Sequence[int]) -> Number:
    return sum(inst.d[order[k - 1]][order[k]] for k in range(len(order)))


def christofides_cycle(inst: Instance, tree: SpanningTree) -> HamiltonCycle:
    """Christofides tour built on ``tree``.

    The Euler circuit of tree + odd-vertex matching is started at team 0 and
    shortcut in first-visit order.  Its length never exceeds
    ``tree.weight + d(M_odd)``, where ``M_odd`` is the minimum matching on the
    odd-degree tree vertices (given the triangle inequality).
    """
    degree = [0] * inst.n
    for a, b in tree.edges:
        degree[a] += 1
        degree[b] += 1
    odd = [v for v in range(inst.n) if degree[v] % 2]
    m_odd = matching_on(inst, odd)
    multi = nx.MultiGraph()
    multi.add_nodes_from(range(inst.n))
    multi.add_edges_from(tree.edges)
    multi.add_edges_from(m_odd.pairs)
    order: list[int] = []
    seen = set()
    for u, _ in nx.eulerian_circuit(multi, source=0):
        if u not in seen:
            seen.add(u)
            order.append(u)
    if len(order) != inst.n:  # only when n == 1; kept as a guard
        raise RuntimeError("Euler circuit missed a vertex")
    return HamiltonCycle(tuple(order), cycle_length(inst, order))


def odd_vertex_matching_weight(inst: Instance, tree: SpanningTree) -> Number:
    degree = [0] * inst.n
    for a, b in tree.edges:
        degree[a] += 1
        degree[b] += 1
    return matching_on(inst, [v for v in range(inst.n) if degree[v] % 2]).weight
