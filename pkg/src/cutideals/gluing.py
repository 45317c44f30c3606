"""Constructive generating sets for glued graphs.

A graph that splits over one shared vertex, or over a pair of vertices,
inherits relations from its parts: every generator of a part lifts by
attaching compatible other-side cut data to both of its sides, sorting
quadrics swap other-side parts between two cuts, and when the gluing pair
is non-adjacent, joins combine a height-dropping relation from each side.
Together these four families generate the glued cut ideal, with the degree
bound max(2*dL - 2, 2*dR - 2, dL+uv, dR+uv) in terms of the parts' degrees.

Recursing over a series-parallel decomposition with these constructions
yields an all-quadratic generating set for every connected K4-minor-free
graph.  The recursion picks its own split at every level (a cut vertex, or
a separation pair with at least two leftover components); a biconnected
K4-minor-free graph on four or more vertices is never 3-connected, so a
usable separation pair always exists and the "one part is a bare edge"
parallel case never has to be consumed.

Cuts here are bitmasks over the ambient graph's labels throughout, so the
parts' generators and the glued generators live in one coordinate system.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product
from typing import Iterable, Sequence

from .algebra import (
    Binomial,
    GeneratingSet,
    Monomial,
    binomial,
    binomial_in_kernel,
    generating_set,
    height,
    monomial,
    phi_image,
    sort_by_height,
)
from .cuts import enumerate_cuts, glue_cuts, separates
from .errors import K4MinorError
from .graphs import (
    Graph,
    GraphLike,
    Subgraph,
    add_edge,
    components_without,
    connected_within,
    induced_subgraph,
    is_connected,
    k4_minor_certificate,
)
from .oracle import (
    DEFAULT_FIBER_CAP,
    MoveApplication,
    _MoveIndex,
    generates_up_to_degree,
    is_slow_varying,
    markov_basis_up_to_degree,
)

BASE_DEGREE_BOUND = 4


# ---------------------------------------------------------------------------
# gluing data

@dataclass(frozen=True)
class GluingSpec:
    """A graph split into overlapping left and right parts at a non-edge {u, v}.

    The parts cover all vertices, meet exactly in {u, v}, every edge lies
    inside one part, and u, v are joined by a path inside each part.
    """

    graph: GraphLike
    left: tuple[int, ...]
    right: tuple[int, ...]
    u: int
    v: int

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(sorted(set(self.left))))
        object.__setattr__(self, "right", tuple(sorted(set(self.right))))
        g, u, v = self.graph, self.u, self.v
        lset, rset = set(self.left), set(self.right)
        if u == v:
            raise ValueError("the gluing pair must be two distinct vertices")
        if lset | rset != set(g.vertices):
            raise ValueError("left and right parts must cover all vertices")
        if lset & rset != {u, v}:
            raise ValueError("left and right parts must overlap exactly in {u, v}")
        if (min(u, v), max(u, v)) in g.edges:
            raise ValueError("the gluing pair must be non-adjacent")
        for a, b in g.edges:
            if not ({a, b} <= lset or {a, b} <= rset):
                raise ValueError(f"edge {(a, b)} crosses the two parts")
        for part in (self.left_part(), self.right_part()):
            if not connected_within(part, u, v, set(part.vertices)):
                raise ValueError("u and v must be connected inside each part")

    def left_part(self) -> Subgraph:
        return induced_subgraph(self.graph, self.left)

    def right_part(self) -> Subgraph:
        return induced_subgraph(self.graph, self.right)

    def left_part_with_edge(self) -> Subgraph:
        return add_edge(self.left_part(), self.u, self.v)

    def right_part_with_edge(self) -> Subgraph:
        return add_edge(self.right_part(), self.u, self.v)


@dataclass(frozen=True)
class MoveSequence:
    """A chain of move applications starting from one monomial."""

    start: Monomial
    steps: tuple[MoveApplication, ...]

    @property
    def end(self) -> Monomial:
        return self.steps[-1].result if self.steps else self.start

    def monomials(self) -> list[Monomial]:
        return [self.start] + [step.result for step in self.steps]

    def __post_init__(self):
        here = self.start
        for step in self.steps:
            if step.source != here:
                raise ValueError("move sequence does not chain")
            here = step.result


@dataclass(frozen=True)
class GlueResult:
    """A constructed generating set plus the degree bound it certifies."""

    generating_set: GeneratingSet
    mu_bound: int


# ---------------------------------------------------------------------------
# validation helpers

def _same_graph(a: GraphLike, b: GraphLike) -> bool:
    return tuple(a.vertices) == tuple(b.vertices) and a.edges == b.edges


def _require_graph(gens: GeneratingSet, expected: GraphLike, label: str) -> None:
    if not _same_graph(gens.graph, expected):
        raise ValueError(f"{label} generators belong to a different graph")


def _require_kernel(gens: GeneratingSet, label: str) -> None:
    for b in gens.binomials:
        if not binomial_in_kernel(gens.graph, b):
            raise ValueError(f"{label} generator {b} is not in the stated kernel")


def _set_degree(binos: Sequence[Binomial]) -> int:
    """Degree certified by a generating set; 2 is the floor for any nonzero part."""
    return max((b.degree for b in binos), default=2)


# ---------------------------------------------------------------------------
# base case

def _relabel_to_local(site: GraphLike) -> tuple[Graph, tuple[int, ...]]:
    verts = site.vertices
    pos = {w: i for i, w in enumerate(verts)}
    return Graph(len(verts), tuple((pos[a], pos[b]) for a, b in site.edges)), verts


def _cut_to_site(local_cut: int, verts: tuple[int, ...]) -> int:
    mask = 0
    for i, w in enumerate(verts):
        if local_cut >> i & 1:
            mask |= 1 << w
    return mask


def _base_binomials(site: GraphLike, degree_bound: int) -> list[Binomial]:
    local, verts = _relabel_to_local(site)
    report = markov_basis_up_to_degree(local, degree_bound)
    if report.max_degree_needed > 2:
        raise AssertionError("a graph on at most 3 vertices required a non-quadratic move")
    if verts == local.vertices:
        return list(report.generating_set.binomials)
    out = []
    for b in report.generating_set.binomials:
        out.append(
            binomial(
                (_cut_to_site(c, verts) for c in b.lhs),
                (_cut_to_site(c, verts) for c in b.rhs),
            )
        )
    return out


def base_generators(g: GraphLike, degree_bound: int = BASE_DEGREE_BOUND) -> GeneratingSet:
    """Oracle-backed quadratic generators for a connected graph on <= 3 vertices."""
    if len(g.vertices) > 3:
        raise ValueError("base generators are only for graphs on at most 3 vertices")
    if not is_connected(g):
        raise ValueError("base generators need a connected graph")
    return generating_set(g, _base_binomials(g, degree_bound), check_kernel=True)


# ---------------------------------------------------------------------------
# lift and join cores (trusted inputs; callers validate)

def _series_lift_core(
    binos1: Sequence[Binomial],
    site1: GraphLike,
    binos2: Sequence[Binomial],
    site2: GraphLike,
    shared: int,
) -> list[Binomial]:
    cuts1, cuts2 = enumerate_cuts(site1), enumerate_cuts(site2)
    vm1, vm2 = site1.vertices_mask, site2.vertices_mask
    out: list[Binomial] = []

    def lifts(binos, cuts_other, vm_self, vm_other):
        for b in binos:
            for ext in product(cuts_other, repeat=b.degree):
                lhs = monomial(glue_cuts(c, vm_self, d, vm_other, shared) for c, d in zip(b.lhs, ext))
                rhs = monomial(glue_cuts(c, vm_self, d, vm_other, shared) for c, d in zip(b.rhs, ext))
                if lhs != rhs:
                    out.append(binomial(lhs, rhs))

    lifts(binos1, cuts2, vm1, vm2)
    lifts(binos2, cuts1, vm2, vm1)
    for a1, a2 in combinations(cuts1, 2):
        for b1, b2 in combinations(cuts2, 2):
            lhs = monomial(
                (glue_cuts(a1, vm1, b1, vm2, shared), glue_cuts(a2, vm1, b2, vm2, shared))
            )
            rhs = monomial(
                (glue_cuts(a1, vm1, b2, vm2, shared), glue_cuts(a2, vm1, b1, vm2, shared))
            )
            if lhs != rhs:
                out.append(binomial(lhs, rhs))
    return out


def _cuts_by_status(site: GraphLike, u: int, v: int) -> dict[bool, list[int]]:
    pools: dict[bool, list[int]] = {False: [], True: []}
    for c in enumerate_cuts(site):
        pools[separates(c, u, v)].append(c)
    return pools


def _status_lift_core(
    binos: Sequence[Binomial],
    site_from: GraphLike,
    site_other: GraphLike,
    u: int,
    v: int,
) -> list[Binomial]:
    """Lifts of one side's generators across a two-vertex overlap.

    Positions are paired after height sorting (ties by cut code); each
    position extends by every other-side cut of matching separation status,
    with the identical extension on both sides of the binomial.
    """
    pools = _cuts_by_status(site_other, u, v)
    vm_f, vm_o = site_from.vertices_mask, site_other.vertices_mask
    out: list[Binomial] = []
    for b in binos:
        lhs = sort_by_height(b.lhs, u, v)
        rhs = sort_by_height(b.rhs, u, v)
        stats = [separates(c, u, v) for c in lhs]
        if stats != [separates(c, u, v) for c in rhs]:
            raise ValueError(
                f"generator {b} changes the height at the gluing pair and cannot be lifted"
            )
        for ext in product(*[pools[s] for s in stats]):
            glued_l = monomial(glue_cuts(c, vm_f, d, vm_o, u) for c, d in zip(lhs, ext))
            glued_r = monomial(glue_cuts(c, vm_f, d, vm_o, u) for c, d in zip(rhs, ext))
            if glued_l != glued_r:
                out.append(binomial(glued_l, glued_r))
    return out


def _status_sorting_quadrics(
    site_a: GraphLike, site_b: GraphLike, u: int, v: int
) -> list[Binomial]:
    """Quadrics swapping the b-side parts of two cuts of equal separation status."""
    pools_a = _cuts_by_status(site_a, u, v)
    pools_b = _cuts_by_status(site_b, u, v)
    vma, vmb = site_a.vertices_mask, site_b.vertices_mask
    out: list[Binomial] = []
    for status in (False, True):
        for a1, a2 in combinations(pools_a[status], 2):
            for b1, b2 in combinations(pools_b[status], 2):
                lhs = monomial(
                    (glue_cuts(a1, vma, b1, vmb, u), glue_cuts(a2, vma, b2, vmb, u))
                )
                rhs = monomial(
                    (glue_cuts(a1, vma, b2, vmb, u), glue_cuts(a2, vma, b1, vmb, u))
                )
                if lhs != rhs:
                    out.append(binomial(lhs, rhs))
    return out


def _tilde_candidates(
    binos: Sequence[Binomial], site: GraphLike, u: int, v: int, max_total: int
) -> list[tuple[Monomial, Monomial]]:
    """Height-gap-2 generators times monomial multipliers, as (high, low) pairs.

    ``max_total`` caps the degree of multiplier times generator side, which
    is 2M - 2 for M the maximal input degree.
    """
    cuts = enumerate_cuts(site)
    cands: list[tuple[Monomial, Monomial]] = []
    for b in binos:
        hl, hr = height(b.lhs, u, v), height(b.rhs, u, v)
        if abs(hl - hr) != 2:
            continue
        hi, lo = (b.lhs, b.rhs) if hl > hr else (b.rhs, b.lhs)
        for extra in range(max_total - b.degree + 1):
            for mult in combinations_with_replacement(cuts, extra):
                cands.append((monomial(hi + mult), monomial(lo + mult)))
    return cands


def _join_core(
    binosL: Sequence[Binomial],
    siteL: GraphLike,
    binosR: Sequence[Binomial],
    siteR: GraphLike,
    u: int,
    v: int,
    max_degree: int,
) -> list[Binomial]:
    vmL, vmR = siteL.vertices_mask, siteR.vertices_mask
    candL = _tilde_candidates(binosL, siteL, u, v, max_total=max_degree)
    candR = _tilde_candidates(binosR, siteR, u, v, max_total=max_degree)
    out: list[Binomial] = []
    for hiL, loL in candL:
        hL = height(hiL, u, v)
        for hiR, loR in candR:
            if len(hiR) != len(hiL) or height(hiR, u, v) != hL:
                continue
            lhs = monomial(
                glue_cuts(c, vmL, d, vmR, u)
                for c, d in zip(sort_by_height(hiL, u, v), sort_by_height(hiR, u, v))
            )
            rhs = monomial(
                glue_cuts(c, vmL, d, vmR, u)
                for c, d in zip(sort_by_height(loL, u, v), sort_by_height(loR, u, v))
            )
            if lhs != rhs:
                out.append(binomial(lhs, rhs))
    return out


# ---------------------------------------------------------------------------
# public gluing operations

def lift_series(gens1: GeneratingSet, gens2: GeneratingSet, shared: int) -> GeneratingSet:
    """Generators for two graphs glued at one shared vertex.

    The output is the union of both sides' lifted generators and the
    sorting quadrics that swap other-side parts; its degree never exceeds
    max(2, input degrees).
    """
    g1, g2 = gens1.graph, gens2.graph
    if set(g1.vertices) & set(g2.vertices) != {shared}:
        raise ValueError("the two graphs must overlap in exactly the shared vertex")
    _require_kernel(gens1, "left")
    _require_kernel(gens2, "right")
    glued = Subgraph(
        tuple(sorted(set(g1.vertices) | set(g2.vertices))),
        tuple(sorted(set(g1.edges) | set(g2.edges))),
    )
    binos = _series_lift_core(gens1.binomials, g1, gens2.binomials, g2, shared)
    return generating_set(glued, binos, check_kernel=True)


def lift_edge_gluing(gens1: GeneratingSet, gens2: GeneratingSet, u: int, v: int) -> GeneratingSet:
    """Generators for two graphs glued along a common edge uv.

    Both inputs must contain the edge uv and overlap exactly in {u, v}.
    Lifts extend positions by other-side cuts of matching separation
    status; sorting quadrics swap other-side parts at equal status.
    """
    g1, g2 = gens1.graph, gens2.graph
    key = (min(u, v), max(u, v))
    if set(g1.vertices) & set(g2.vertices) != {u, v}:
        raise ValueError("the two graphs must overlap in exactly {u, v}")
    if key not in g1.edges or key not in g2.edges:
        raise ValueError("both sides must contain the shared edge uv")
    _require_kernel(gens1, "left")
    _require_kernel(gens2, "right")
    glued = Subgraph(
        tuple(sorted(set(g1.vertices) | set(g2.vertices))),
        tuple(sorted(set(g1.edges) | set(g2.edges))),
    )
    binos = (
        _status_lift_core(gens1.binomials, g1, g2, u, v)
        + _status_lift_core(gens2.binomials, g2, g1, u, v)
        + _status_sorting_quadrics(g1, g2, u, v)
    )
    return generating_set(glued, binos, check_kernel=True)


def build_F1_F2(
    spec: GluingSpec, gensL_uv: GeneratingSet, gensR_uv: GeneratingSet
) -> GeneratingSet:
    """Lifts of generators of the two parts-with-extra-edge across the gluing.

    The left family consists of all relations of the glued graph whose
    position-wise left restrictions form an input generator and whose right
    parts agree between the two sides; the right family is symmetric.
    """
    _require_graph(gensL_uv, spec.left_part_with_edge(), "left-with-edge")
    _require_graph(gensR_uv, spec.right_part_with_edge(), "right-with-edge")
    _require_kernel(gensL_uv, "left-with-edge")
    _require_kernel(gensR_uv, "right-with-edge")
    left, right = spec.left_part(), spec.right_part()
    binos = _status_lift_core(
        gensL_uv.binomials, spec.left_part_with_edge(), right, spec.u, spec.v
    ) + _status_lift_core(
        gensR_uv.binomials, spec.right_part_with_edge(), left, spec.u, spec.v
    )
    return generating_set(spec.graph, binos, check_kernel=True)


def build_F3(
    spec: GluingSpec, gensL: GeneratingSet, gensR: GeneratingSet, M: int
) -> GeneratingSet:
    """Joins of height-dropping relations from the two parts.

    Each side contributes its height-gap-2 generators, padded by monomial
    multipliers up to total degree 2M - 2; pairs of equal degree and equal
    upper height glue position-wise after height sorting.  With quadratic
    inputs (M = 2) no multipliers fit and plain quadrics join.
    """
    left, right = spec.left_part(), spec.right_part()
    _require_graph(gensL, left, "left")
    _require_graph(gensR, right, "right")
    _require_kernel(gensL, "left")
    _require_kernel(gensR, "right")
    if M < 2:
        raise ValueError("M must be at least 2")
    worst = max(_set_degree(gensL.binomials), _set_degree(gensR.binomials))
    if M < worst:
        raise ValueError(f"M={M} is below the maximal input degree {worst}")
    for gens, label in ((gensL, "left"), (gensR, "right")):
        if not is_slow_varying(gens, spec.u, spec.v):
            raise ValueError(f"{label} generators are not slow-varying at the gluing pair")
    binos = _join_core(
        gensL.binomials, left, gensR.binomials, right, spec.u, spec.v, max_degree=2 * M - 2
    )
    return generating_set(spec.graph, binos, check_kernel=True)


def build_F4(spec: GluingSpec, degree_cap: int = 2) -> GeneratingSet:
    """All reordering quadrics of the glued graph.

    These fix the left parts of two cuts and swap their right parts, with
    consistency at {u, v}; they are degree-2 relations whatever the cap.
    """
    if degree_cap < 2:
        raise ValueError("degree_cap must be at least 2")
    binos = _status_sorting_quadrics(
        spec.left_part(), spec.right_part(), spec.u, spec.v
    )
    return generating_set(spec.graph, binos, check_kernel=True)


def glue_nonadjacent(
    spec: GluingSpec,
    gensL: GeneratingSet,
    gensR: GeneratingSet,
    gensL_uv: GeneratingSet,
    gensR_uv: GeneratingSet,
) -> GlueResult:
    """The full generating set for a graph glued over a non-adjacent pair.

    Union of the lifted families, the joins, and the reordering quadrics,
    together with the certified degree bound
    max(2*dL - 2, 2*dR - 2, dL+uv, dR+uv) from the inputs' degrees.
    """
    for gens, label in ((gensL, "left"), (gensR, "right")):
        if not is_slow_varying(gens, spec.u, spec.v):
            raise ValueError(f"{label} generators are not slow-varying at the gluing pair")
    f12 = build_F1_F2(spec, gensL_uv, gensR_uv)
    m = max(_set_degree(gensL.binomials), _set_degree(gensR.binomials))
    f3 = build_F3(spec, gensL, gensR, m)
    f4 = build_F4(spec)
    mu_bound = max(
        2 * _set_degree(gensL.binomials) - 2,
        2 * _set_degree(gensR.binomials) - 2,
        _set_degree(gensL_uv.binomials),
        _set_degree(gensR_uv.binomials),
    )
    combined = generating_set(
        spec.graph,
        f12.binomials + f3.binomials + f4.binomials,
        check_kernel=True,
    )
    return GlueResult(combined, mu_bound)


# ---------------------------------------------------------------------------
# the recursive quadratic construction

def _first_articulation(site: GraphLike) -> int | None:
    if len(site.vertices) < 3:
        return None
    for w in site.vertices:
        if len(components_without(site, [w])) > 1:
            return w
    return None


def _first_split_pair(site: GraphLike) -> tuple[int, int, list[tuple[int, ...]]] | None:
    for u, v in combinations(site.vertices, 2):
        comps = components_without(site, [u, v])
        if len(comps) >= 2:
            return u, v, comps
    return None


def _quad_rec(site: Subgraph, trace: list[dict]) -> tuple[Binomial, ...]:
    if len(site.vertices) <= 3:
        binos = tuple(_base_binomials(site, BASE_DEGREE_BOUND))
        trace.append(
            {"vertices": list(site.vertices), "rule": "base", "generators": len(binos)}
        )
        return binos

    art = _first_articulation(site)
    if art is not None:
        comps = components_without(site, [art])
        side1 = induced_subgraph(site, comps[0] + (art,))
        rest = tuple(sorted(set(site.vertices) - set(comps[0])))
        side2 = induced_subgraph(site, rest)
        b1 = _quad_rec(side1, trace)
        b2 = _quad_rec(side2, trace)
        trace.append(
            {"vertices": list(site.vertices), "rule": "series", "shared": art}
        )
        out = _series_lift_core(b1, side1, b2, side2, art)
        return generating_set(site, out, check_kernel=True).binomials

    found = _first_split_pair(site)
    if found is None:
        raise K4MinorError(
            "graph has a K4 minor", certificate=k4_minor_certificate(site)
        )
    u, v, comps = found
    key = (min(u, v), max(u, v))
    left_verts = tuple(sorted(set(comps[0]) | {u, v}))
    right_verts = tuple(sorted(set(site.vertices) - set(comps[0])))
    left = induced_subgraph(site, left_verts)
    right = induced_subgraph(site, right_verts)

    if key in site.edges:
        b1 = _quad_rec(left, trace)
        b2 = _quad_rec(right, trace)
        trace.append(
            {"vertices": list(site.vertices), "rule": "edge-gluing", "pair": [u, v]}
        )
        out = (
            _status_lift_core(b1, left, right, u, v)
            + _status_lift_core(b2, right, left, u, v)
            + _status_sorting_quadrics(left, right, u, v)
        )
        return generating_set(site, out, check_kernel=True).binomials

    left_uv = add_edge(left, u, v)
    right_uv = add_edge(right, u, v)
    bL = _quad_rec(left, trace)
    bR = _quad_rec(right, trace)
    bLuv = _quad_rec(left_uv, trace)
    bRuv = _quad_rec(right_uv, trace)
    trace.append(
        {"vertices": list(site.vertices), "rule": "nonadjacent-gluing", "pair": [u, v]}
    )
    out = (
        _status_lift_core(bLuv, left_uv, right, u, v)
        + _status_lift_core(bRuv, right_uv, left, u, v)
        + _join_core(bL, left, bR, right, u, v, max_degree=2 * max(_set_degree(bL), _set_degree(bR)) - 2)
        + _status_sorting_quadrics(left, right, u, v)
    )
    return generating_set(site, out, check_kernel=True).binomials


def quadratic_basis_sp(g: GraphLike) -> GeneratingSet:
    """An all-quadratic generating set for a connected K4-minor-free graph.

    Built by recursion: series splits at cut vertices, edge gluings at
    adjacent separation pairs, and the non-adjacent gluing construction
    otherwise, down to oracle-verified bases on at most 3 vertices.  The
    result records a construction trace of the rules that fired.
    """
    if not is_connected(g):
        raise ValueError("graph is not connected")
    cert = k4_minor_certificate(g)
    if cert is not None:
        raise K4MinorError("graph has a K4 minor", certificate=cert)
    trace: list[dict] = []
    site = g if isinstance(g, Subgraph) else induced_subgraph(g, g.vertices)
    binos = _quad_rec(site, trace)
    result = generating_set(g, binos, check_kernel=True, construction_trace=tuple(trace))
    if result.max_degree > 2:
        raise AssertionError("the quadratic construction emitted a higher-degree relation")
    return result


def prune_generating_set(
    g: GraphLike,
    gens: GeneratingSet,
    max_degree: int = 4,
    fiber_cap: int = DEFAULT_FIBER_CAP,
) -> GeneratingSet:
    """Greedily drop binomials whose removal keeps all fibers connected.

    Deterministic but not guaranteed minimal; intended to shrink the highly
    redundant constructed sets for inspection and sampling.
    """
    kept = list(gens.binomials)
    for b in sorted(gens.binomials, key=lambda x: (x.degree, x.lhs, x.rhs), reverse=True):
        trial = [x for x in kept if x != b]
        if generates_up_to_degree(g, trial, max_degree, fiber_cap).generates:
            kept = trial
    return generating_set(g, kept, check_kernel=False)


# ---------------------------------------------------------------------------
# move sequences

def find_move_sequence(
    g: GraphLike,
    moves: GeneratingSet | Iterable[Binomial],
    src: Monomial,
    dst: Monomial,
) -> MoveSequence | None:
    """Shortest chain of moves from src to dst, or None when disconnected."""
    src, dst = monomial(src), monomial(dst)
    if phi_image(g, src) != phi_image(g, dst):
        raise ValueError("source and destination lie in different fibers")
    if src == dst:
        return MoveSequence(src, ())
    binos = moves.binomials if isinstance(moves, GeneratingSet) else tuple(moves)
    index = _MoveIndex(binos)
    parents: dict[Monomial, tuple[Monomial, Binomial, str]] = {src: None}
    frontier = [src]
    while frontier:
        nxt = []
        for m in frontier:
            for neighbor, move, direction in index.neighbors(m):
                if neighbor in parents:
                    continue
                parents[neighbor] = (m, move, direction)
                if neighbor == dst:
                    steps = []
                    here = dst
                    while parents[here] is not None:
                        prev, mv, dirn = parents[here]
                        steps.append(MoveApplication(prev, mv, dirn, here))
                        here = prev
                    return MoveSequence(src, tuple(reversed(steps)))
                nxt.append(neighbor)
        frontier = nxt
    return None


def normalize_sequence(
    seq: MoveSequence, u: int, v: int, aux: GeneratingSet
) -> MoveSequence:
    """Rewrite a slow-varying move sequence to a height-monotone one.

    The input walks a fiber of the part graph with per-step height changes
    of 0 or +-2 at (u, v); ``aux`` generates the ideal of the part with the
    extra edge uv, whose moves preserve that height exactly.  The output
    connects the same endpoints, its height profile never increases, every
    constant-height stretch uses aux moves, and each height drop reuses a
    drop step of the original sequence.
    """
    key = (min(u, v), max(u, v))
    if key not in aux.graph.edges:
        raise ValueError("aux generators must belong to the part with the edge uv added")
    monos = seq.monomials()
    heights = [height(m, u, v) for m in monos]
    for a, b in zip(heights, heights[1:]):
        if abs(a - b) not in (0, 2):
            raise ValueError("input sequence is not slow-varying at (u, v)")
    h0, hend = heights[0], heights[-1]
    if h0 < hend:
        raise ValueError("cannot make the profile non-increasing: it ends higher than it starts")

    aux_set = set(aux.binomials)
    monotone = all(a >= b for a, b in zip(heights, heights[1:]))
    if monotone and all(
        step.move in aux_set
        for step, a, b in zip(seq.steps, heights, heights[1:])
        if a == b
    ):
        return seq

    index = _MoveIndex(aux.binomials)

    def plateau(src: Monomial, dst: Monomial) -> list[MoveApplication]:
        if src == dst:
            return []
        parents: dict[Monomial, tuple[Monomial, Binomial, str] | None] = {src: None}
        frontier = [src]
        while frontier:
            nxt = []
            for m in frontier:
                for neighbor, move, direction in index.neighbors(m):
                    if neighbor in parents:
                        continue
                    parents[neighbor] = (m, move, direction)
                    if neighbor == dst:
                        steps = []
                        here = dst
                        while parents[here] is not None:
                            prev, mv, dirn = parents[here]
                            steps.append(MoveApplication(prev, mv, dirn, here))
                            here = prev
                        return list(reversed(steps))
                    nxt.append(neighbor)
            frontier = nxt
        raise ValueError(
            "aux moves cannot realize a constant-height segment; they do not generate"
        )

    last_at = {}
    for i, h in enumerate(heights):
        last_at[h] = i
    steps: list[MoveApplication] = []
    enter_idx = 0
    for h in range(h0, hend - 1, -2):
        land = last_at[h]
        steps.extend(plateau(monos[enter_idx], monos[land]))
        if h > hend:
            steps.append(seq.steps[land])
            enter_idx = land + 1
    return MoveSequence(seq.start, tuple(steps))
