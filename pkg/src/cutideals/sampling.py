"""Markov-chain sampling of cut-count tables with fixed edge marginals.

A cut table records how often each cut of a graph was observed.  Its
marginals count, per edge, how many observations separated that edge.  A
quadratic relation of the cut ideal acts as a table move: decrement its
two lhs cuts, increment its two rhs cuts.  Moves preserve the total and
every marginal, and a uniformly random (move, direction) proposal with
rejection-as-stay is a symmetric chain, so the stationary distribution is
uniform over the reachable part of the fiber.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, NamedTuple

from .algebra import GeneratingSet
from .cuts import cut_from_vertex_list, cut_to_vertex_list, separates
from .errors import InputError
from .graphs import GraphLike, graph_to_json


@dataclass(frozen=True)
class CutTable:
    """Observed counts per canonical cut; zero entries are dropped."""

    graph: GraphLike
    counts: tuple[tuple[int, int], ...]

    @cached_property
    def total(self) -> int:
        return sum(k for _, k in self.counts)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    def count(self, cut: int) -> int:
        return self.as_dict().get(cut, 0)


def cut_table(g: GraphLike, counts: Mapping[int, int]) -> CutTable:
    """Validate and normalize a counts mapping into a table."""
    from .cuts import canonical_cut

    vmask = g.vertices_mask
    norm: dict[int, int] = {}
    for cut, k in counts.items():
        if not isinstance(k, int) or k < 0:
            raise InputError(f"count for cut {cut:#b} must be a non-negative integer")
        if cut & ~vmask or canonical_cut(cut, vmask) != cut:
            raise InputError(f"{cut:#b} is not a canonical cut of the graph")
        if k:
            norm[cut] = norm.get(cut, 0) + k
    return CutTable(g, tuple(sorted(norm.items())))


class MarginalVector(NamedTuple):
    """Per-edge counts of separating observations, plus the table total."""

    edges: tuple[tuple[int, int], ...]
    cut_counts: tuple[int, ...]
    total: int


def marginals(t: CutTable, g: GraphLike | None = None) -> MarginalVector:
    """For each edge, the number of observed cuts separating its endpoints."""
    g = t.graph if g is None else g
    if g.edges != t.graph.edges or tuple(g.vertices) != tuple(t.graph.vertices):
        raise ValueError("table belongs to a different graph")
    sums = []
    for u, v in g.edges:
        sums.append(sum(k for cut, k in t.counts if separates(cut, u, v)))
    return MarginalVector(g.edges, tuple(sums), t.total)


def markov_step(t: CutTable, moves: GeneratingSet, rng: random.Random) -> CutTable:
    """One chain step: uniform (move, direction) proposal, stay when blocked.

    A move applies when the chosen side's cuts are present with the needed
    multiplicity; applying it swaps that side for the other one.
    """
    if moves.max_degree > 2:
        raise ValueError("table moves must be quadratic")
    if not moves.binomials:
        return t
    pick = rng.randrange(2 * len(moves.binomials))
    move = moves.binomials[pick // 2]
    src, dst = (move.lhs, move.rhs) if pick % 2 == 0 else (move.rhs, move.lhs)
    counts = t.as_dict()
    need: dict[int, int] = {}
    for cut in src:
        need[cut] = need.get(cut, 0) + 1
    if any(counts.get(cut, 0) < k for cut, k in need.items()):
        return t
    for cut in src:
        counts[cut] -= 1
    for cut in dst:
        counts[cut] = counts.get(cut, 0) + 1
    return cut_table(t.graph, counts)


def sample_fiber(
    g: GraphLike,
    t0: CutTable,
    moves: GeneratingSet,
    steps: int,
    burn_in: int,
    thin: int,
    seed: int,
) -> list[CutTable]:
    """Run the chain and emit the thinned post-burn-in tables.

    Every emitted table shares the start table's total and marginals.  The
    chain is fully determined by the seed.
    """
    if not (steps > burn_in >= 0):
        raise ValueError("need steps > burn_in >= 0")
    if thin < 1:
        raise ValueError("thin must be at least 1")
    if g.edges != t0.graph.edges or tuple(g.vertices) != tuple(t0.graph.vertices):
        raise ValueError("start table belongs to a different graph")
    if moves.max_degree > 2:
        raise ValueError("sampling moves must be quadratic")
    from .algebra import binomial_in_kernel

    for b in moves.binomials:
        if not binomial_in_kernel(g, b):
            raise ValueError(f"move {b} is not a relation of the graph")
    rng = random.Random(seed)
    table = t0
    out = []
    for i in range(1, steps + 1):
        table = markov_step(table, moves, rng)
        if i > burn_in and (i - burn_in) % thin == 0:
            out.append(table)
    return out


# ---------------------------------------------------------------------------
# JSON forms

def counts_to_json(t: CutTable) -> dict[str, int]:
    return {
        json.dumps(cut_to_vertex_list(cut), separators=(",", ":")): k
        for cut, k in t.counts
    }


def parse_counts(text: str, g: GraphLike) -> CutTable:
    """Parse a counts file: a JSON map from serialized cut to count."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"counts file is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputError("counts file must be a JSON object")
    counts: dict[int, int] = {}
    for key, k in obj.items():
        try:
            side = json.loads(key)
        except json.JSONDecodeError as exc:
            raise InputError(f"counts key {key!r} is not a serialized cut") from exc
        cut = cut_from_vertex_list(side, g)
        if not isinstance(k, int) or k < 0:
            raise InputError(f"count for {key!r} must be a non-negative integer")
        counts[cut] = counts.get(cut, 0) + k
    return cut_table(g, counts)


def sampler_header(g: GraphLike, steps: int, burn_in: int, thin: int, seed: int) -> dict:
    return {
        "graph": graph_to_json(g),
        "seed": seed,
        "steps": steps,
        "burn_in": burn_in,
        "thin": thin,
    }
