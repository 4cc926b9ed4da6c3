"""Optimal allocation of n observations into subsample ranges.

The problem is an equality-constrained unbounded knapsack: choose
multiplicities f_j >= 0 of parts j in {2..n} to

    maximize   sum_j C_j * f_j
    subject to sum_j j * f_j = n,

where C_j is the efficiency of a size-j subsample (coefficients
module).  The maximal objective equals 1 / Var(sigma_hat) in units of
sigma**2, so maximizing it minimizes the estimator variance.

Three independent solvers are provided; their objectives must agree.

solve_dp
    Exact dynamic program over capacities 0..n.  Ties are broken by
    fewer parts, then descending lexicographic part tuple.  Per-table
    state is cached so ascending sweeps cost O(n**2) rational
    operations overall instead of per call.

solve_group_relaxation
    Drop integrality of one variable.  Let b maximize C_j / j (the
    best efficiency per consumed observation; b = 4 for the
    exponential table).  Relax f_b to be any integer; the remaining
    problem is equivalent to a shortest path on the residue graph
    modulo b: vertices are residues 0..b-1, an edge for part j moves
    v -> (v + j) mod b at penalty w_j = j * C_b / b - C_j >= 0, the
    value lost by covering j observations with part j instead of
    (fractional) copies of part b.  A minimum-penalty path from 0 to
    n mod b fixes the off-b multiplicities, and
    f_b = (n - sum of path parts) / b.  When f_b >= 0 the relaxation
    is tight and the result is exactly optimal; otherwise the solver
    falls back to solve_dp and the result is labeled "dp".  For the
    exponential table the only fallback at n <= 400 is n = 6.

rule_of_fours
    Closed form for the exponential table: all parts equal to 4, with
    the remainder r = n mod 4 absorbed by r parts of size 5 (r = 1, 2)
    or one part of size 3 (r = 3); small cases (n) for 2 <= n <= 5 and
    (3, 3) for n = 6.
"""

from __future__ import annotations

import heapq
import threading
import weakref
from dataclasses import dataclass
from fractions import Fraction

from .coefficients import CoefficientTable
from .partitions import Partition

__all__ = [
    "ResidueEdge",
    "ResidueGraph",
    "SolveResult",
    "build_residue_graph",
    "shortest_paths",
    "solve_dp",
    "solve_group_relaxation",
    "rule_of_fours",
    "partition_objective",
]


@dataclass(frozen=True)
class SolveResult:
    """An optimal allocation together with the method that produced it."""

    partition: Partition
    objective: Fraction
    method: str  # "dp" | "group_relaxation" | "closed_form"


@dataclass(frozen=True)
class ResidueEdge:
    source: int
    target: int
    part: int
    weight: Fraction


@dataclass(frozen=True)
class ResidueGraph:
    """Residue graph modulo the best part size b.

    ``part_weights`` lists the penalty w_j for every candidate part
    j != b (the full multigraph, including parts congruent to 0 that
    would only form self loops).  ``edges`` is the reduced graph: for
    each (source, target) pair only the minimum-weight part of the
    congruence class is kept, smallest part on ties.
    """

    modulus: int
    part_weights: tuple[tuple[int, Fraction], ...]
    edges: tuple[ResidueEdge, ...]

    @property
    def vertices(self) -> range:
        return range(self.modulus)

    def weight(self, j: int) -> Fraction:
        for part, w in self.part_weights:
            if part == j:
                return w
        raise ValueError(f"no part of size {j} in this graph")


def partition_objective(partition: Partition, table: CoefficientTable) -> Fraction:
    """Exact objective sum_j C_j * f_j of a partition under a table."""
    return sum((table.c(j) * mult for j, mult in partition.frequencies), Fraction(0))


def _require_coverage(table: CoefficientTable, n: int) -> None:
    if n < 2:
        raise ValueError(f"allocation needs n >= 2, got {n}")
    if table.max_part < n:
        raise ValueError(f"table spans parts 2..{table.max_part}, need 2..{n}")


def _best_part(table: CoefficientTable, n: int) -> int:
    # argmax of C_j / j over 2..n, smallest j on ties
    best_j = 2
    best = table.c(2) / 2
    for j in range(3, n + 1):
        ratio = table.c(j) / j
        if ratio > best:
            best_j, best = j, ratio
    return best_j


def build_residue_graph(table: CoefficientTable, n: int) -> ResidueGraph:
    """Residue graph for allocating n observations under a table."""
    _require_coverage(table, n)
    b = _best_part(table, n)
    per_unit = table.c(b) / b

    part_weights: list[tuple[int, Fraction]] = []
    class_best: dict[int, tuple[Fraction, int]] = {}  # offset -> (weight, part)
    for j in range(2, n + 1):
        if j == b:
            continue
        w = j * per_unit - table.c(j)
        if w < 0:  # impossible by choice of b; guards a corrupted table
            raise ValueError(f"negative penalty for part {j}; modulus {b} is not optimal")
        part_weights.append((j, w))
        offset = j % b
        if offset == 0:
            continue  # self loops never help a shortest path
        incumbent = class_best.get(offset)
        if incumbent is None or (w, j) < incumbent:
            class_best[offset] = (w, j)

    edges = []
    for v in range(b):
        for offset, (w, j) in sorted(class_best.items()):
            edges.append(ResidueEdge(v, (v + offset) % b, j, w))
    edges.sort(key=lambda e: (e.source, e.target))
    return ResidueGraph(b, tuple(part_weights), tuple(edges))


def shortest_paths(
    graph: ResidueGraph, source: int = 0
) -> dict[int, tuple[Fraction, tuple[int, ...]]]:
    """Minimum-penalty paths from ``source`` to every reachable vertex.

    Returns target -> (total weight, parts used, descending).  Ties in
    total weight prefer fewer edges, which matches the global
    preference for fewer parts.
    """
    adjacency: dict[int, list[ResidueEdge]] = {v: [] for v in graph.vertices}
    for edge in graph.edges:
        adjacency[edge.source].append(edge)

    dist: dict[int, tuple[Fraction, int, tuple[int, ...]]] = {
        source: (Fraction(0), 0, ())
    }
    heap: list[tuple[Fraction, int, int]] = [(Fraction(0), 0, source)]
    done: set[int] = set()
    while heap:
        d, hops, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for edge in adjacency[v]:
            cand = (d + edge.weight, hops + 1)
            known = dist.get(edge.target)
            if known is None or cand < known[:2]:
                parts = tuple(sorted(dist[v][2] + (edge.part,), reverse=True))
                dist[edge.target] = (cand[0], cand[1], parts)
                heapq.heappush(heap, (cand[0], cand[1], edge.target))
    return {v: (d, parts) for v, (d, _, parts) in dist.items()}


# DP state is cached per table object (keyed by identity, released via
# weakref) so that ascending sweeps n = 2..N reuse one table fill.
class _DpState:
    __slots__ = ("values", "parts")

    def __init__(self) -> None:
        self.values: list[Fraction | None] = [Fraction(0), None]
        self.parts: list[tuple[int, ...] | None] = [(), None]


_dp_states: dict[int, _DpState] = {}
_dp_lock = threading.Lock()


def _dp_state(table: CoefficientTable) -> _DpState:
    key = id(table)
    state = _dp_states.get(key)
    if state is None:
        state = _DpState()
        _dp_states[key] = state
        weakref.finalize(table, _dp_states.pop, key, None)
    return state


def _dp_extend(state: _DpState, n: int, table: CoefficientTable) -> None:
    values, parts = state.values, state.parts
    c = {j: table.c(j) for j in range(2, n + 1)}
    for w in range(len(values), n + 1):
        best_value: Fraction | None = None
        best_parts: tuple[int, ...] | None = None
        for j in range(2, w + 1):
            prev = values[w - j]
            if prev is None:
                continue
            cand = prev + c[j]
            if best_value is None or cand > best_value:
                best_value = cand
                best_parts = tuple(sorted(parts[w - j] + (j,), reverse=True))
            elif cand == best_value:
                cand_parts = tuple(sorted(parts[w - j] + (j,), reverse=True))
                # fewer parts first, then descending lexicographic
                if (-len(cand_parts), cand_parts) > (-len(best_parts), best_parts):
                    best_parts = cand_parts
        values.append(best_value)
        parts.append(best_parts)


def solve_dp(n: int, table: CoefficientTable) -> SolveResult:
    """Exact optimum by dynamic programming over capacities 0..n."""
    _require_coverage(table, n)
    with _dp_lock:
        state = _dp_state(table)
        if len(state.values) <= n:
            _dp_extend(state, n, table)
        value = state.values[n]
        parts = state.parts[n]
    # n >= 2 is always feasible (greedy 2s and one 3 cover any n)
    assert value is not None and parts is not None
    return SolveResult(Partition.from_parts(parts), value, "dp")


def solve_group_relaxation(n: int, table: CoefficientTable) -> SolveResult:
    """Group relaxation: residue-graph shortest path, DP fallback.

    Exact whenever the recovered multiplicity of the modulus part is
    nonnegative; otherwise the result comes from solve_dp and carries
    method "dp".
    """
    _require_coverage(table, n)
    graph = build_residue_graph(table, n)
    b = graph.modulus
    r = n % b

    path_parts: tuple[int, ...] = ()
    if r != 0:
        reached = shortest_paths(graph, 0)
        if r not in reached:
            return solve_dp(n, table)
        path_parts = reached[r][1]

    f_b, leftover = divmod(n - sum(path_parts), b)
    assert leftover == 0  # path length is congruent to r by construction
    if f_b < 0:
        return solve_dp(n, table)

    freq: dict[int, int] = {}
    for j in path_parts:
        freq[j] = freq.get(j, 0) + 1
    if f_b:
        freq[b] = freq.get(b, 0) + f_b
    partition = Partition.from_frequencies(freq)
    return SolveResult(partition, partition_objective(partition, table), "group_relaxation")


def rule_of_fours(n: int) -> Partition:
    """Closed-form optimum for the exponential distribution.

    Parts of size 4 everywhere, with the remainder r = n mod 4 taken
    up by r parts of size 5 (r = 1, 2) or one part of size 3 (r = 3);
    (n) itself for 2 <= n <= 5, and (3, 3) for n = 6.
    """
    if n < 2:
        raise ValueError(f"allocation needs n >= 2, got {n}")
    if n <= 5:
        return Partition.from_parts([n])
    if n == 6:
        return Partition.from_parts([3, 3])
    q, r = divmod(n, 4)
    if r == 0:
        freq = {4: q}
    elif r in (1, 2):
        freq = {4: q - r, 5: r}  # q >= r holds for every n >= 7
    else:
        freq = {3: 1, 4: q}
    return Partition.from_frequencies(freq)
