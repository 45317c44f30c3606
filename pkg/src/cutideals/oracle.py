"""Brute-force ground truth for generation questions.

The oracle answers "does this set of relations generate the cut ideal up to
a degree bound" by exhaustive fiber sweeps: it enumerates every cut
monomial of each degree, groups them by image, and checks that the moves
(replace one side of a binomial by the other inside a monomial) connect
each fiber.  It can also build such a set itself, degree by degree, adding
differences between disconnected fiber components until everything below
the bound is connected.

This is deliberately independent of the constructive gluing machinery; the
two are cross-checked in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .algebra import (
    Binomial,
    GeneratingSet,
    Monomial,
    binomial,
    binomial_in_kernel,
    fiber_count,
    fibers_by_image,
    generating_set,
    height,
    phi_image,
)
from .errors import FiberCapExceeded
from .graphs import GraphLike, is_connected

FORWARD = "forward"
BACKWARD = "backward"

DEFAULT_FIBER_CAP = 10**6


class MoveApplication(NamedTuple):
    """One rewriting step: a side of ``move`` replaced inside ``source``."""

    source: Monomial
    move: Binomial
    direction: str
    result: Monomial


def _remove_submultiset(m: Monomial, part: Monomial) -> Monomial | None:
    """Multiset difference m - part, or None when part is not contained.

    Both tuples are sorted, so a single merge pass suffices.
    """
    rest = []
    j = 0
    for x in m:
        if j < len(part) and x == part[j]:
            j += 1
        elif j < len(part) and x > part[j]:
            return None
        else:
            rest.append(x)
    return tuple(rest) if j == len(part) else None


def apply_move(m: Monomial, b: Binomial, direction: str) -> Monomial | None:
    """Apply a binomial as a move; None signals "not applicable".

    Forward replaces an occurrence of the lhs by the rhs, backward the
    reverse.  The untouched cuts ride along as a multiplier.
    """
    if direction == FORWARD:
        pattern, replacement = b.lhs, b.rhs
    elif direction == BACKWARD:
        pattern, replacement = b.rhs, b.lhs
    else:
        raise ValueError(f"unknown direction {direction!r}")
    rest = _remove_submultiset(m, pattern)
    if rest is None:
        return None
    return tuple(sorted(rest + replacement))


class _MoveIndex:
    """Pattern-indexed moves: neighbor generation by sub-multiset lookup."""

    def __init__(self, moves: Iterable[Binomial]):
        self.by_pattern: dict[Monomial, list[tuple[Binomial, str]]] = {}
        degrees = set()
        for b in moves:
            self.by_pattern.setdefault(b.lhs, []).append((b, FORWARD))
            self.by_pattern.setdefault(b.rhs, []).append((b, BACKWARD))
            degrees.add(b.degree)
        self.degrees = sorted(degrees)

    def neighbors(self, m: Monomial):
        d = len(m)
        for k in self.degrees:
            if k > d:
                break
            patterns = {tuple(m[i] for i in idx) for idx in combinations(range(d), k)}
            for pattern in patterns:
                hits = self.by_pattern.get(pattern)
                if not hits:
                    continue
                rest = _remove_submultiset(m, pattern)
                for move, direction in hits:
                    replacement = move.rhs if direction == FORWARD else move.lhs
                    yield tuple(sorted(rest + replacement)), move, direction


@dataclass(frozen=True)
class FiberGraph:
    """A fiber with the adjacency its move set induces."""

    nodes: tuple[Monomial, ...]
    edges: tuple[tuple[int, int], ...]

    def components(self) -> tuple[tuple[Monomial, ...], ...]:
        adj: dict[int, list[int]] = {i: [] for i in range(len(self.nodes))}
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        seen: set[int] = set()
        comps = []
        for start in range(len(self.nodes)):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                for w in adj[stack.pop()]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(tuple(self.nodes[i] for i in sorted(comp)))
        return tuple(comps)


def build_fiber_graph(fiber: Sequence[Monomial], moves: Iterable[Binomial]) -> FiberGraph:
    nodes = tuple(sorted(fiber))
    pos = {m: i for i, m in enumerate(nodes)}
    index = _MoveIndex(moves)
    edges = set()
    for m in nodes:
        i = pos[m]
        for neighbor, _, _ in index.neighbors(m):
            j = pos.get(neighbor)
            if j is not None and j != i:
                edges.add((min(i, j), max(i, j)))
    return FiberGraph(nodes, tuple(sorted(edges)))


class FiberConnectivity(NamedTuple):
    connected: bool
    components: tuple[tuple[Monomial, ...], ...]


def fiber_graph_connected(
    fiber: Sequence[Monomial], moves: GeneratingSet | Iterable[Binomial]
) -> FiberConnectivity:
    """Connectivity of one fiber under a move set, with the components."""
    if not fiber:
        raise ValueError("fiber must be nonempty")
    degrees = {len(m) for m in fiber}
    if len(degrees) != 1:
        raise ValueError("fiber mixes monomials of different degrees")
    if isinstance(moves, GeneratingSet):
        binos = moves.binomials
        images = {phi_image(moves.graph, m) for m in fiber}
        if len(images) != 1:
            raise ValueError("fiber mixes monomials with different images")
    else:
        binos = tuple(moves)
    graph = build_fiber_graph(sorted({tuple(m) for m in fiber}), binos)
    comps = graph.components()
    return FiberConnectivity(len(comps) == 1, comps)


def _split_components(fiber: Sequence[Monomial], index: _MoveIndex) -> list[list[Monomial]]:
    """Components of a fiber, each sorted, ordered by their least element.

    BFS starts from the lexicographically least unvisited monomial, so the
    output (and everything derived from it) is deterministic.
    """
    remaining = sorted(fiber)
    member = set(remaining)
    seen: set[Monomial] = set()
    comps = []
    for start in remaining:
        if start in seen:
            continue
        comp = {start}
        queue = [start]
        while queue:
            mono = queue.pop()
            for neighbor, _, _ in index.neighbors(mono):
                if neighbor in member and neighbor not in comp:
                    comp.add(neighbor)
                    queue.append(neighbor)
        seen |= comp
        comps.append(sorted(comp))
    return comps


def _guard_degree(g: GraphLike, degree: int, fiber_cap: int) -> None:
    total = fiber_count(g, degree)
    if total > fiber_cap:
        raise FiberCapExceeded(
            f"degree {degree} sweep needs {total} monomials, above the cap {fiber_cap}"
        )


@dataclass(frozen=True)
class MarkovBasisReport:
    """Oracle output: the set built, and where new moves were required."""

    generating_set: GeneratingSet
    new_per_degree: dict[int, int]
    max_degree_needed: int


def markov_basis_up_to_degree(
    g: GraphLike, max_d: int, fiber_cap: int = DEFAULT_FIBER_CAP
) -> MarkovBasisReport:
    """Build a degree-bounded generating set by exhaustive fiber repair.

    For each degree from 2 up, every fiber that the moves collected so far
    leave disconnected contributes the differences between its component
    representatives (lexicographically least monomials, star-joined to the
    least component).  The set is generating up to ``max_d`` by
    construction; it is not claimed minimal.
    """
    if max_d < 2:
        raise ValueError("max_d must be at least 2")
    if not is_connected(g):
        raise ValueError("the oracle only handles connected graphs")
    basis: list[Binomial] = []
    new_per_degree: dict[int, int] = {}
    for d in range(2, max_d + 1):
        _guard_degree(g, d, fiber_cap)
        index = _MoveIndex(basis)
        added = 0
        groups = fibers_by_image(g, d)
        for key in sorted(groups):
            fiber = groups[key]
            if len(fiber) == 1:
                continue
            comps = _split_components(fiber, index)
            if len(comps) == 1:
                continue
            root = comps[0][0]
            for other in comps[1:]:
                basis.append(binomial(root, other[0]))
                added += 1
        new_per_degree[d] = added
    max_needed = max((d for d, k in new_per_degree.items() if k), default=0)
    return MarkovBasisReport(
        generating_set=generating_set(g, basis, check_kernel=True),
        new_per_degree=new_per_degree,
        max_degree_needed=max_needed,
    )


class GenerationCheck(NamedTuple):
    generates: bool
    witness_fiber: tuple[Monomial, ...] | None
    components: tuple[tuple[Monomial, ...], ...] | None


def generates_up_to_degree(
    g: GraphLike,
    gens: GeneratingSet | Iterable[Binomial],
    max_d: int,
    fiber_cap: int = DEFAULT_FIBER_CAP,
) -> GenerationCheck:
    """Whether every fiber of degree <= max_d is connected under the moves.

    On failure the first disconnected fiber (in deterministic sweep order)
    comes back as a witness together with its components.
    """
    binos = gens.binomials if isinstance(gens, GeneratingSet) else tuple(gens)
    for b in binos:
        if not binomial_in_kernel(g, b):
            raise ValueError(f"move {b} is not a relation of the graph")
    if not is_connected(g):
        raise ValueError("the oracle only handles connected graphs")
    index = _MoveIndex(binos)
    for d in range(2, max_d + 1):
        _guard_degree(g, d, fiber_cap)
        groups = fibers_by_image(g, d)
        for key in sorted(groups):
            fiber = groups[key]
            if len(fiber) == 1:
                continue
            comps = _split_components(fiber, index)
            if len(comps) > 1:
                return GenerationCheck(
                    False,
                    tuple(fiber),
                    tuple(tuple(c) for c in comps),
                )
    return GenerationCheck(True, None, None)


def is_slow_varying(gens: GeneratingSet | Iterable[Binomial], u: int, v: int) -> bool:
    """Whether every binomial changes the (u, v) height by at most 2."""
    if u == v:
        raise ValueError("slow variation needs two distinct vertices")
    binos = gens.binomials if isinstance(gens, GeneratingSet) else tuple(gens)
    return all(abs(height(b.lhs, u, v) - height(b.rhs, u, v)) <= 2 for b in binos)


def quadratic_kernel_binomials(g: GraphLike, fiber_cap: int = DEFAULT_FIBER_CAP) -> GeneratingSet:
    """Every degree-2 relation of the graph: all pairs inside degree-2 fibers."""
    _guard_degree(g, 2, fiber_cap)
    binos = []
    for key, fiber in sorted(fibers_by_image(g, 2).items()):
        for a, b in combinations(fiber, 2):
            binos.append(binomial(a, b))
    return generating_set(g, binos, check_kernel=True)
