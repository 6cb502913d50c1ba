"""Dependence between slice contributions of product cubes, and its greedy coloring."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import networkx as nx
import numpy as np

from .family import Coefficients, FamilyRealization
from .hyperplane import slice_cubes


@dataclass(frozen=True)
class DependencyGraph:
    """Product cubes meeting ``H_t`` (node ``i`` is ``cubes[i]``); edges join cubes sharing a coordinate."""

    n: int
    t: float
    cubes: np.ndarray
    graph: nx.Graph

    @property
    def max_degree(self) -> int:
        return max((degree for _, degree in self.graph.degree()), default=0)

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    def shared_counts(self) -> np.ndarray:
        """Per axis, the largest number of other cubes sharing one vertex's coordinate on that axis."""

        if self.cubes.shape[0] == 0:
            return np.zeros(self.cubes.shape[1], dtype=np.int64)
        counts = []
        for axis in range(self.cubes.shape[1]):
            _, sizes = np.unique(self.cubes[:, axis], return_counts=True)
            counts.append(int(sizes.max()) - 1)
        return np.asarray(counts, dtype=np.int64)


def build_dependency_graph(cubes: np.ndarray) -> nx.Graph:
    """Cubes ``x``, ``y`` are adjacent iff ``x_i == y_i`` for some axis ``i``."""

    cubes = np.asarray(cubes, dtype=np.int64)
    graph = nx.Graph()
    graph.add_nodes_from(range(cubes.shape[0]))
    for axis in range(cubes.shape[1] if cubes.ndim == 2 else 0):
        order = np.argsort(cubes[:, axis], kind="stable")
        values = cubes[order, axis]
        splits = np.flatnonzero(np.diff(values)) + 1
        for group in np.split(order, splits):
            if group.size > 1:
                graph.add_edges_from(combinations(group.tolist(), 2))
    return graph


def dependency_graph(family: FamilyRealization, coeffs: Coefficients, t: float, n: int) -> DependencyGraph:
    if family.d < 2:
        raise ValueError("dependency graphs need d >= 2")
    cubes = slice_cubes(family, coeffs, t, n)
    return DependencyGraph(n=n, t=t, cubes=cubes, graph=build_dependency_graph(cubes))


def greedy_coloring(graph: DependencyGraph | nx.Graph) -> list[list[int]]:
    """Partition into independent sets by repeatedly removing a maximal independent set.

    Each set is grown greedily in increasing vertex order. A vertex left behind in a round
    has a neighbor taken in that round, so at most ``max_degree + 1`` rounds are needed.
    """

    g = graph.graph if isinstance(graph, DependencyGraph) else graph
    remaining = sorted(g.nodes)
    classes: list[list[int]] = []
    while remaining:
        chosen: list[int] = []
        blocked: set[int] = set()
        for vertex in remaining:
            if vertex in blocked:
                continue
            chosen.append(vertex)
            blocked.update(g.neighbors(vertex))
        taken = set(chosen)
        remaining = [vertex for vertex in remaining if vertex not in taken]
        classes.append(chosen)
    return classes


def is_independent(graph: nx.Graph, vertices: list[int]) -> bool:
    members = set(vertices)
    return not any(neighbor in members for vertex in vertices for neighbor in graph.neighbors(vertex))


__all__ = ["DependencyGraph", "build_dependency_graph", "dependency_graph", "greedy_coloring", "is_independent"]
