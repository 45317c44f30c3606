"""The monomial map on cuts, its kernel, and fiber enumeration.

Every cut q_{A|B} of a graph maps to a squarefree monomial recording, per
edge, whether the edge is separated (an s-variable) or kept together (a
t-variable).  A multiset of cuts (a "cut monomial") maps to the product,
which is fully described by the per-edge s-exponents together with the
degree; the kernel of the map is the cut ideal, and two cut monomials lie
in a common fiber exactly when those exponent data agree.

Cut monomials are sorted tuples of canonical cut masks.  Binomials are
ordered pairs of equal-degree monomials, canonically oriented so that the
lexicographically smaller side is stored first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, NamedTuple, Sequence

from .cuts import cut_from_vertex_list, cut_to_vertex_list, separates
from .cuts import enumerate_cuts
from .errors import InputError
from .graphs import Graph, GraphLike, Subgraph, graph_from_json, graph_to_json

Monomial = tuple[int, ...]


def monomial(cuts: Iterable[int]) -> Monomial:
    """Canonical form of a multiset of cuts: ascending mask order."""
    return tuple(sorted(cuts))


class ExponentVector(NamedTuple):
    """Image data of a cut monomial: per-edge s-exponents plus the degree.

    The t-exponent of an edge is ``degree - s`` for its s entry.
    """

    edges: tuple[tuple[int, int], ...]
    degree: int
    s: tuple[int, ...]

    def t(self, index: int) -> int:
        return self.degree - self.s[index]


def cut_svector(g: GraphLike, cut: int) -> tuple[int, ...]:
    return tuple(int(separates(cut, u, v)) for u, v in g.edges)


def phi_image(g: GraphLike, m: Sequence[int]) -> ExponentVector:
    """Per-edge separation counts of a cut monomial.

    For each edge, the s-exponent is the number of cuts in the monomial
    separating its endpoints; the t-exponent is degree minus that.
    """
    vmask = g.vertices_mask
    for cut in m:
        if cut & ~vmask:
            raise ValueError(f"cut {cut:#b} uses vertices outside the graph")
    totals = [0] * len(g.edges)
    for cut in m:
        for i, (u, v) in enumerate(g.edges):
            if (cut >> u ^ cut >> v) & 1:
                totals[i] += 1
    return ExponentVector(g.edges, len(m), tuple(totals))


def height(m: Sequence[int], u: int, v: int) -> int:
    """Number of cuts in the monomial separating u from v."""
    if u == v:
        raise ValueError("height needs two distinct vertices")
    return sum(1 for cut in m if separates(cut, u, v))


def sort_by_height(m: Sequence[int], u: int, v: int) -> Monomial:
    """The cuts in position order: separating cuts first, ties by mask.

    The result is an ordered tuple, not the canonical ascending form; it is
    the order in which lifted and joined binomials pair their positions.
    """
    if u == v:
        raise ValueError("height needs two distinct vertices")
    return tuple(sorted(m, key=lambda cut: (not separates(cut, u, v), cut)))


class Binomial(NamedTuple):
    """Difference of two equal-degree cut monomials, canonically oriented."""

    lhs: Monomial
    rhs: Monomial

    @property
    def degree(self) -> int:
        return len(self.lhs)


def binomial(lhs: Iterable[int], rhs: Iterable[int]) -> Binomial:
    """Build a binomial in canonical orientation.

    Both sides are sorted; the lexicographically smaller side is stored
    first.  Degree at least 2 is required: equal single cuts cannot differ,
    and distinct single cuts sharing an image only occur on disconnected
    graphs, which the algebra layer does not model.
    """
    a, b = monomial(lhs), monomial(rhs)
    if len(a) != len(b):
        raise ValueError(f"sides have different degrees {len(a)} and {len(b)}")
    if len(a) < 2:
        raise ValueError("binomials of degree below 2 are not representable")
    if a == b:
        raise ValueError("the two sides of a binomial must differ")
    return Binomial(a, b) if a < b else Binomial(b, a)


def binomial_in_kernel(g: GraphLike, b: Binomial) -> bool:
    """Whether the two sides have the same image, i.e. the binomial is a relation."""
    if len(b.lhs) != len(b.rhs):
        raise ValueError("binomial sides have different degrees")
    return phi_image(g, b.lhs) == phi_image(g, b.rhs)


@dataclass(frozen=True)
class GeneratingSet:
    """A set of kernel binomials for one graph, with construction metadata."""

    graph: GraphLike
    binomials: tuple[Binomial, ...]
    construction_trace: tuple = field(default=None, compare=False)

    @cached_property
    def max_degree(self) -> int:
        return max((b.degree for b in self.binomials), default=0)


def generating_set(
    g: GraphLike,
    binomials: Iterable[Binomial],
    check_kernel: bool = True,
    construction_trace: tuple | None = None,
) -> GeneratingSet:
    """Deduplicate, sort deterministically, and optionally verify the kernel."""
    unique = sorted(set(binomials), key=lambda b: (b.degree, b.lhs, b.rhs))
    if check_kernel:
        for b in unique:
            if not binomial_in_kernel(g, b):
                raise ValueError(f"binomial {b} is not a relation of the graph")
    return GeneratingSet(g, tuple(unique), construction_trace)


# ---------------------------------------------------------------------------
# fibers

_HASH_SWEEP_MAX_DEGREE = 3
_HASH_SWEEP_MAX_CUTS = 64


def fibers_by_image(g: GraphLike, degree: int) -> dict[tuple[int, ...], list[Monomial]]:
    """All degree-``degree`` monomials grouped by their s-exponent tuple.

    Monomials inside each fiber appear in ascending lexicographic order.
    """
    cuts = enumerate_cuts(g)
    svecs = {c: cut_svector(g, c) for c in cuts}
    groups: dict[tuple[int, ...], list[Monomial]] = {}
    width = len(g.edges)
    for m in combinations_with_replacement(cuts, degree):
        totals = [0] * width
        for c in m:
            sv = svecs[c]
            for i in range(width):
                totals[i] += sv[i]
        groups.setdefault(tuple(totals), []).append(m)
    return groups


def _fiber_backtrack(
    cuts: list[int], svecs: dict[int, tuple[int, ...]], target: tuple[int, ...], degree: int
) -> list[Monomial]:
    width = len(target)
    out: list[Monomial] = []
    chosen: list[int] = []

    def rec(idx: int, remaining: int, budget: list[int]) -> None:
        if remaining == 0:
            if all(b == 0 for b in budget):
                out.append(tuple(chosen))
            return
        if idx == len(cuts):
            return
        if any(b > remaining or b < 0 for b in budget):
            return
        sv = svecs[cuts[idx]]
        for count in range(remaining + 1):
            new_budget = [budget[i] - count * sv[i] for i in range(width)]
            if any(b < 0 for b in new_budget):
                break
            chosen.extend([cuts[idx]] * count)
            rec(idx + 1, remaining - count, new_budget)
            del chosen[len(chosen) - count :]

    rec(0, degree, list(target))
    return out


def enumerate_fiber(g: GraphLike, target: ExponentVector, degree: int) -> list[Monomial]:
    """All cut monomials of the given degree whose image equals ``target``.

    Small instances reuse the full hash sweep; larger ones run a
    backtracking search with per-edge s-budgets.  Output is deterministic
    (ascending lexicographic order) either way.
    """
    if target.edges != g.edges:
        raise ValueError("target exponent vector belongs to a different graph")
    if target.degree != degree:
        raise ValueError(f"target degree {target.degree} does not match {degree}")
    if any(s < 0 or s > degree for s in target.s):
        raise ValueError("inconsistent target: each s-exponent must lie in 0..degree")
    if degree == 0:
        return [()]
    cuts = enumerate_cuts(g)
    if degree <= _HASH_SWEEP_MAX_DEGREE and len(cuts) <= _HASH_SWEEP_MAX_CUTS:
        return fibers_by_image(g, degree).get(tuple(target.s), [])
    svecs = {c: cut_svector(g, c) for c in cuts}
    return sorted(_fiber_backtrack(cuts, svecs, tuple(target.s), degree))


def fiber_count(g: GraphLike, degree: int) -> int:
    """Number of degree-``degree`` monomials over the graph's cuts."""
    return comb(len(enumerate_cuts(g)) + degree - 1, degree)


# ---------------------------------------------------------------------------
# JSON forms

def monomial_to_json(m: Sequence[int]) -> list[list[int]]:
    return [cut_to_vertex_list(c) for c in m]


def monomial_from_json(obj, g: GraphLike) -> Monomial:
    if not isinstance(obj, list):
        raise InputError("a cut monomial serializes as a list of cuts")
    return monomial(cut_from_vertex_list(side, g) for side in obj)


def exponent_vector_to_json(vec: ExponentVector) -> list[dict]:
    return [
        {"edge": [u, v], "s": vec.s[i], "t": vec.t(i)}
        for i, (u, v) in enumerate(vec.edges)
    ]


def generating_set_to_json(gs: GeneratingSet, max_degree_needed: int | None = None) -> dict:
    out = {
        "graph": graph_to_json(gs.graph),
        "binomials": [
            {"lhs": monomial_to_json(b.lhs), "rhs": monomial_to_json(b.rhs)}
            for b in gs.binomials
        ],
        "max_degree_needed": gs.max_degree if max_degree_needed is None else max_degree_needed,
    }
    if gs.construction_trace is not None:
        out["construction_trace"] = list(gs.construction_trace)
    return out


def generating_set_from_json(obj, check_kernel: bool = True) -> GeneratingSet:
    if not isinstance(obj, dict) or "graph" not in obj or "binomials" not in obj:
        raise InputError("generating set JSON needs 'graph' and 'binomials'")
    gobj = obj["graph"]
    if isinstance(gobj, dict) and "vertices" in gobj:
        g: GraphLike = Subgraph(tuple(gobj["vertices"]), tuple(tuple(e) for e in gobj["edges"]))
    else:
        g = graph_from_json(gobj)
    binos = []
    for entry in obj["binomials"]:
        try:
            binos.append(
                binomial(monomial_from_json(entry["lhs"], g), monomial_from_json(entry["rhs"], g))
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed binomial entry {entry!r}") from exc
    try:
        return generating_set(g, binos, check_kernel=check_kernel)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def parse_generating_set(text: str, check_kernel: bool = True) -> GeneratingSet:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"generating set file is not valid JSON: {exc}") from exc
    return generating_set_from_json(obj, check_kernel=check_kernel)
