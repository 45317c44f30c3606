"""Simple graphs, graph surgery, and series-parallel structure.

A ``Graph`` lives on vertices 0..n-1.  A ``Subgraph`` is a graph on an
arbitrary sorted tuple of vertex labels; it is how induced subgraphs of an
ambient graph keep their original labels, so that cuts of the part stay
comparable with cuts of the whole.  Both types are immutable and expose the
same ``vertices`` / ``edges`` protocol, and every function here accepts
either.

Series-parallel recognition works by iterated reduction per biconnected
block: merge parallel edges, smooth degree-2 vertices, and a block is
series-parallel exactly when it collapses to a single edge.  The reduction
doubles as the decomposition-tree builder, and a stuck reduction is a
certificate for a K4 minor (the stuck multigraph has minimum degree 3, so
it contracts onto K4).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Union

from .errors import InputError, K4MinorError

Edge = tuple[int, int]


def _normalize_edges(edges: Iterable[Iterable[int]], vertices: tuple[int, ...]) -> tuple[Edge, ...]:
    vset = set(vertices)
    seen: set[Edge] = set()
    out: list[Edge] = []
    for e in edges:
        pair = tuple(e)
        if len(pair) != 2:
            raise InputError(f"edge {pair!r} is not a vertex pair")
        u, v = pair
        if not (isinstance(u, int) and isinstance(v, int)):
            raise InputError(f"edge {pair!r} has non-integer endpoints")
        if u == v:
            raise InputError(f"loop at vertex {u} is not allowed")
        if u not in vset or v not in vset:
            raise InputError(f"edge endpoint out of range in {pair!r}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InputError(f"duplicate edge {key!r}")
        seen.add(key)
        out.append(key)
    return tuple(sorted(out))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..vertex_count-1."""

    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if not isinstance(self.vertex_count, int) or self.vertex_count < 1:
            raise InputError("vertex_count must be a positive integer")
        verts = tuple(range(self.vertex_count))
        object.__setattr__(self, "edges", _normalize_edges(self.edges, verts))

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(range(self.vertex_count))

    @cached_property
    def vertices_mask(self) -> int:
        return (1 << self.vertex_count) - 1

    def adjacency(self) -> dict[int, list[int]]:
        return _adjacency(self.vertices, self.edges)


@dataclass(frozen=True)
class Subgraph:
    """Graph on an arbitrary set of integer vertex labels.

    Used for the parts of a gluing decomposition: the labels are those of
    the ambient graph the part was carved from (possibly with an extra edge
    added between existing labels).
    """

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        verts = tuple(sorted(set(self.vertices)))
        if not verts:
            raise InputError("a Subgraph needs at least one vertex")
        if any(not isinstance(v, int) or v < 0 for v in verts):
            raise InputError("vertex labels must be non-negative integers")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", _normalize_edges(self.edges, verts))

    @cached_property
    def vertices_mask(self) -> int:
        m = 0
        for v in self.vertices:
            m |= 1 << v
        return m

    def adjacency(self) -> dict[int, list[int]]:
        return _adjacency(self.vertices, self.edges)


GraphLike = Union[Graph, Subgraph]


def _adjacency(vertices: Iterable[int], edges: Iterable[Edge]) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


# ---------------------------------------------------------------------------
# construction and JSON


def graph_from_json(obj) -> Graph:
    if not isinstance(obj, dict) or set(obj) - {"n", "edges"}:
        raise InputError("graph JSON must be an object with keys 'n' and 'edges'")
    if "n" not in obj or "edges" not in obj:
        raise InputError("graph JSON must carry both 'n' and 'edges'")
    n = obj["n"]
    edges = obj["edges"]
    if not isinstance(n, int):
        raise InputError("'n' must be an integer")
    if not isinstance(edges, list):
        raise InputError("'edges' must be a list of vertex pairs")
    return Graph(n, tuple(tuple(e) if isinstance(e, list) else e for e in edges))


def parse_graph(text: str) -> Graph:
    """Parse a graph file: ``{"n": <int>, "edges": [[u, v], ...]}``, 0-based."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"graph file is not valid JSON: {exc}") from exc
    return graph_from_json(obj)


def graph_to_json(g: GraphLike) -> dict:
    if isinstance(g, Graph):
        return {"n": g.vertex_count, "edges": [list(e) for e in g.edges]}
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges]}


def induced_subgraph(g: GraphLike, vertices: Iterable[int]) -> Subgraph:
    """Induced subgraph on ``vertices``, keeping the original labels."""
    verts = tuple(sorted(set(vertices)))
    missing = set(verts) - set(g.vertices)
    if missing:
        raise ValueError(f"vertices {sorted(missing)} are not in the graph")
    vset = set(verts)
    return Subgraph(verts, tuple(e for e in g.edges if e[0] in vset and e[1] in vset))


def add_edge(g: GraphLike, u: int, v: int) -> GraphLike:
    """The graph with one extra edge uv between existing vertices."""
    if u == v:
        raise ValueError("cannot add a loop")
    if u not in g.vertices or v not in g.vertices:
        raise ValueError(f"{u} or {v} is not a vertex")
    key = (min(u, v), max(u, v))
    if key in g.edges:
        raise ValueError(f"edge {key!r} already present")
    if isinstance(g, Graph):
        return Graph(g.vertex_count, g.edges + (key,))
    return Subgraph(g.vertices, g.edges + (key,))


def contract_edge(g: Graph, e: Edge) -> Graph:
    """Identify the endpoints of ``e``; drop loops and duplicates; relabel to 0..n-2.

    The surviving merged vertex keeps the smaller endpoint's position, and
    all labels above the removed endpoint shift down by one.
    """
    key = (min(e), max(e))
    if key not in g.edges:
        raise ValueError(f"edge {key!r} not in graph")
    a, b = key

    def onto(w: int) -> int:
        w = a if w == b else w
        return w if w < b else w - 1

    merged = set()
    for u, v in g.edges:
        u2, v2 = onto(u), onto(v)
        if u2 != v2:
            merged.add((min(u2, v2), max(u2, v2)))
    return Graph(g.vertex_count - 1, tuple(sorted(merged)))


def delete_vertex(g: Graph, v: int) -> Graph:
    """Induced subgraph on the other vertices, relabeled to 0..n-2."""
    if g.vertex_count < 2:
        raise ValueError("cannot delete the last vertex")
    if v not in g.vertices:
        raise ValueError(f"{v} is not a vertex")

    def onto(w: int) -> int:
        return w if w < v else w - 1

    kept = tuple(
        (onto(a), onto(b)) for a, b in g.edges if a != v and b != v
    )
    return Graph(g.vertex_count - 1, tuple(sorted(kept)))


# ---------------------------------------------------------------------------
# connectivity

def is_connected(g: GraphLike) -> bool:
    verts = g.vertices
    if len(verts) <= 1:
        return True
    adj = g.adjacency()
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


def connected_within(g: GraphLike, a: int, b: int, allowed: set[int]) -> bool:
    """Is there an a-b path whose interior stays inside ``allowed``?"""
    if a == b:
        return True
    adj = g.adjacency()
    seen = {a}
    stack = [a]
    while stack:
        for w in adj[stack.pop()]:
            if w == b:
                return True
            if w in allowed and w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def _components(vertices: Iterable[int], edges: Iterable[Edge]) -> list[tuple[int, ...]]:
    adj = _adjacency(vertices, edges)
    seen: set[int] = set()
    comps = []
    for start in sorted(adj):
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
        comps.append(tuple(sorted(comp)))
    return comps


def components_without(g: GraphLike, removed: Iterable[int]) -> list[tuple[int, ...]]:
    """Connected components of the graph with ``removed`` vertices deleted."""
    gone = set(removed)
    verts = [v for v in g.vertices if v not in gone]
    edges = [e for e in g.edges if e[0] not in gone and e[1] not in gone]
    return _components(verts, edges)


def biconnected_blocks(g: GraphLike) -> list[tuple[Edge, ...]]:
    """Edge sets of the biconnected blocks, via the classic DFS with an edge stack."""
    adj = {v: sorted(ws) for v, ws in g.adjacency().items()}
    visited: set[int] = set()
    blocks: list[tuple[Edge, ...]] = []

    def emit(edge_slice: list[Edge]) -> None:
        blocks.append(tuple(sorted({(min(e), max(e)) for e in edge_slice})))

    for start in g.vertices:
        if start in visited:
            continue
        discovery = {start: 0}
        low = {start: 0}
        visited.add(start)
        edge_stack: list[Edge] = []
        stack = [(start, start, iter(adj[start]))]
        while stack:
            grandparent, parent, children = stack[-1]
            advanced = False
            for child in children:
                if child == grandparent:
                    continue
                if child in visited:
                    if discovery[child] <= discovery[parent]:
                        low[parent] = min(low[parent], discovery[child])
                        edge_stack.append((parent, child))
                else:
                    low[child] = discovery[child] = len(discovery)
                    visited.add(child)
                    stack.append((parent, child, iter(adj[child])))
                    edge_stack.append((parent, child))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if len(stack) > 1:
                if low[parent] >= discovery[grandparent]:
                    ind = edge_stack.index((grandparent, parent))
                    emit(edge_stack[ind:])
                    edge_stack = edge_stack[:ind]
                low[grandparent] = min(low[parent], low[grandparent])
            elif stack and edge_stack:
                ind = edge_stack.index((grandparent, parent))
                emit(edge_stack[ind:])
                edge_stack = edge_stack[:ind]
    return blocks


# ---------------------------------------------------------------------------
# series-parallel trees

@dataclass(frozen=True)
class SPLeaf:
    """A single edge uv of the decomposed graph."""

    u: int
    v: int

    def __post_init__(self):
        if self.u > self.v:
            object.__setattr__(self, "u", self.v)
            object.__setattr__(self, "v", self.u)


@dataclass(frozen=True)
class SPSeries:
    """Two parts sharing exactly one vertex."""

    left: "SPTree"
    right: "SPTree"
    shared: int


@dataclass(frozen=True)
class SPParallel:
    """Two parts sharing exactly the pair {u, v}.

    ``direct_edge`` records whether the composed graph additionally carries
    the edge uv itself, on top of the two parts.
    """

    left: "SPTree"
    right: "SPTree"
    u: int
    v: int
    direct_edge: bool = False


SPTree = Union[SPLeaf, SPSeries, SPParallel]


def sp_tree_vertices(tree: SPTree) -> set[int]:
    if isinstance(tree, SPLeaf):
        return {tree.u, tree.v}
    return sp_tree_vertices(tree.left) | sp_tree_vertices(tree.right)


def compose_sp_tree(tree: SPTree, vertex_count: int | None = None) -> Graph:
    """Rebuild the graph a decomposition tree describes."""

    def edges(t: SPTree) -> set[Edge]:
        if isinstance(t, SPLeaf):
            return {(t.u, t.v)}
        got = edges(t.left) | edges(t.right)
        if isinstance(t, SPParallel) and t.direct_edge:
            got.add((min(t.u, t.v), max(t.u, t.v)))
        return got

    n = vertex_count if vertex_count is not None else max(sp_tree_vertices(tree)) + 1
    return Graph(n, tuple(sorted(edges(tree))))


def sp_tree_to_json(tree: SPTree) -> dict:
    if isinstance(tree, SPLeaf):
        return {"kind": "leaf", "edge": [tree.u, tree.v]}
    if isinstance(tree, SPSeries):
        return {
            "kind": "series",
            "shared": tree.shared,
            "left": sp_tree_to_json(tree.left),
            "right": sp_tree_to_json(tree.right),
        }
    return {
        "kind": "parallel",
        "u": tree.u,
        "v": tree.v,
        "direct_edge": tree.direct_edge,
        "left": sp_tree_to_json(tree.left),
        "right": sp_tree_to_json(tree.right),
    }


def sp_tree_from_json(obj) -> SPTree:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError("decomposition node must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "leaf":
        u, v = obj["edge"]
        return SPLeaf(u, v)
    if kind == "series":
        return SPSeries(sp_tree_from_json(obj["left"]), sp_tree_from_json(obj["right"]), obj["shared"])
    if kind == "parallel":
        return SPParallel(
            sp_tree_from_json(obj["left"]),
            sp_tree_from_json(obj["right"]),
            obj["u"],
            obj["v"],
            bool(obj.get("direct_edge", False)),
        )
    raise InputError(f"unknown decomposition node kind {kind!r}")


# ---------------------------------------------------------------------------
# reduction

class _MultiEdge:
    __slots__ = ("u", "v", "tree", "alive")

    def __init__(self, u: int, v: int, tree: SPTree):
        self.u, self.v = min(u, v), max(u, v)
        self.tree = tree
        self.alive = True

    @property
    def ends(self) -> Edge:
        return (self.u, self.v)


def _parallel_join(t1: SPTree, t2: SPTree, u: int, v: int) -> SPTree:
    """Combine two parallel branches between u and v into one tree node.

    A bare direct edge folds into the flag of an existing parallel node when
    possible, and otherwise rides along as a child.
    """
    key = (min(u, v), max(u, v))

    def is_direct(t: SPTree) -> bool:
        return isinstance(t, SPLeaf) and (t.u, t.v) == key

    if is_direct(t2):
        t1, t2 = t2, t1
    if is_direct(t1):
        if isinstance(t2, SPParallel) and {t2.u, t2.v} == set(key) and not t2.direct_edge:
            return replace(t2, direct_edge=True)
        return SPParallel(t2, t1, key[0], key[1], False)
    return SPParallel(t1, t2, key[0], key[1], False)


def _reduce_block(edges: tuple[Edge, ...]) -> tuple[SPTree | None, dict | None]:
    """Reduce one biconnected block.

    Returns ``(tree, None)`` when the block collapses to a single edge and
    ``(None, certificate)`` when the reduction gets stuck, in which case the
    remaining multigraph (simplified) is a K4-minor certificate.
    """
    records = [_MultiEdge(u, v, SPLeaf(u, v)) for u, v in edges]

    def live() -> list[_MultiEdge]:
        return [r for r in records if r.alive]

    while True:
        # merge parallel edges until none remain
        merged_any = True
        while merged_any:
            merged_any = False
            groups: dict[Edge, list[_MultiEdge]] = {}
            for r in live():
                groups.setdefault(r.ends, []).append(r)
            for ends in sorted(groups):
                group = groups[ends]
                if len(group) < 2:
                    continue
                first = group[0]
                for other in group[1:]:
                    first.tree = _parallel_join(first.tree, other.tree, *ends)
                    other.alive = False
                merged_any = True

        current = live()
        if len(current) == 1:
            return current[0].tree, None

        degree: dict[int, list[_MultiEdge]] = {}
        for r in current:
            degree.setdefault(r.u, []).append(r)
            degree.setdefault(r.v, []).append(r)
        smoothable = sorted(
            w for w, incident in degree.items()
            if len(incident) == 2 and incident[0].ends != incident[1].ends
        )
        if not smoothable:
            verts = sorted(degree)
            cert_edges = sorted({r.ends for r in current})
            return None, {"vertices": verts, "edges": [list(e) for e in cert_edges]}
        w = smoothable[0]
        r1, r2 = degree[w]
        x = r1.u if r1.v == w else r1.v
        y = r2.u if r2.v == w else r2.v
        if x > y:
            r1, r2, x, y = r2, r1, y, x
        r1.alive = False
        r2.alive = False
        records.append(_MultiEdge(x, y, SPSeries(r1.tree, r2.tree, w)))


def k4_minor_certificate(g: GraphLike) -> dict | None:
    """A reduction-stuck minor witnessing a K4 minor, or None when there is none."""
    for block in biconnected_blocks(g):
        if len(block) < 3:
            continue
        tree, cert = _reduce_block(block)
        if cert is not None:
            return cert
    return None


def is_k4_minor_free(g: GraphLike) -> bool:
    return k4_minor_certificate(g) is None


def sp_decompose(g: Graph) -> SPTree:
    """Series/parallel decomposition tree of a connected K4-minor-free graph.

    Any valid tree is an acceptable answer; this one comes from block-wise
    reduction, with the blocks reattached by series nodes at cut vertices.
    """
    if not g.edges:
        raise ValueError("graph has no edges to decompose")
    if not is_connected(g):
        raise ValueError("graph is not connected")
    block_trees = []
    for block in biconnected_blocks(g):
        if len(block) == 1:
            block_trees.append((SPLeaf(*block[0]), set(block[0])))
            continue
        tree, cert = _reduce_block(block)
        if cert is not None:
            raise K4MinorError("graph has a K4 minor", certificate=cert)
        block_trees.append((tree, set().union(*[set(e) for e in block])))

    block_trees.sort(key=lambda item: sorted(item[1]))
    tree, covered = block_trees[0]
    pending = block_trees[1:]
    while pending:
        for i, (candidate, verts) in enumerate(pending):
            shared = covered & verts
            if len(shared) == 1:
                tree = SPSeries(tree, candidate, min(shared))
                covered |= verts
                pending.pop(i)
                break
        else:
            raise AssertionError("block-cut structure failed to assemble")
    return tree
