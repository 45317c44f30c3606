"""Cuts of a vertex set, encoded as bitmasks.

A cut is an unordered bipartition A|B of the vertices.  It is stored as the
bitmask of the side containing the smallest vertex label (vertex 0 for a
``Graph``), which makes the encoding canonical: A|B and B|A collapse to one
value, multisets of cuts sort by plain integer order, and the full side
V|empty is the all-ones mask.
"""

from __future__ import annotations

from typing import Iterable

from .errors import InputError
from .graphs import GraphLike


def vertex_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def mask_vertices(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def canonical_cut(side: int, vmask: int) -> int:
    """The representative of the bipartition ``side | (vmask minus side)``."""
    side &= vmask
    anchor = vmask & -vmask
    return side if side & anchor else vmask ^ side


def enumerate_cuts(g: GraphLike) -> list[int]:
    """All 2^(n-1) canonical cuts of the vertex set, in ascending mask order."""
    verts = g.vertices
    anchor = 1 << verts[0]
    rest = verts[1:]
    cuts = []
    for pick in range(1 << len(rest)):
        side = anchor
        for j, v in enumerate(rest):
            if pick >> j & 1:
                side |= 1 << v
        cuts.append(side)
    cuts.sort()
    return cuts


def separates(cut: int, u: int, v: int) -> bool:
    """Whether u and v land on different sides of the cut."""
    return bool((cut >> u ^ cut >> v) & 1)


def restrict_cut(cut: int, subset: Iterable[int]) -> int:
    """The cut induced on ``subset``: intersect both sides, re-canonicalize.

    The canonical side of the result is the one containing the smallest
    vertex of the subset.
    """
    smask = vertex_mask(subset)
    if not smask:
        raise ValueError("cannot restrict a cut to an empty vertex set")
    return canonical_cut(cut & smask, smask)


def glue_cuts(cut_a: int, vmask_a: int, cut_b: int, vmask_b: int, align: int) -> int:
    """Combine cuts of two overlapping vertex sets into one cut of the union.

    Both sides are oriented so that vertex ``align`` sits in the chosen
    half, then the halves are unioned.  Callers must ensure the two cuts
    agree on the whole overlap; aligning at one shared vertex is enough when
    the overlap is that vertex, or a pair on which the two cuts have the
    same separation status.
    """
    bit = 1 << align
    side_a = cut_a if cut_a & bit else vmask_a ^ cut_a
    side_b = cut_b if cut_b & bit else vmask_b ^ cut_b
    return canonical_cut(side_a | side_b, vmask_a | vmask_b)


def cut_to_vertex_list(cut: int) -> list[int]:
    """Serialized form: the sorted vertex list of the canonical side."""
    return mask_vertices(cut)


def cut_from_vertex_list(side: Iterable[int], g: GraphLike) -> int:
    """Parse a serialized cut and check it is canonical for ``g``."""
    try:
        mask = vertex_mask(side)
    except TypeError as exc:
        raise InputError(f"cut side {side!r} is not a list of vertices") from exc
    vmask = g.vertices_mask
    if mask & ~vmask:
        raise InputError(f"cut side {sorted(side)!r} uses vertices outside the graph")
    if canonical_cut(mask, vmask) != mask:
        anchor = min(g.vertices)
        raise InputError(
            f"cut side {sorted(side)!r} is not canonical: it must contain vertex {anchor}"
        )
    return mask
