"""Command-line surface: ingest JSON, compute, emit JSON.

Exit codes: 0 on success, 1 on a domain error (a K4 minor where a
series-parallel graph is required, a fiber cap overrun, an invalid value),
2 on an I/O or parse problem.  All outputs are JSON on stdout unless
``--output`` redirects them.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import (
    exponent_vector_to_json,
    generating_set_to_json,
    monomial_from_json,
    monomial_to_json,
    parse_generating_set,
    phi_image,
)
from .errors import FiberCapExceeded, InputError, K4MinorError
from .cuts import cut_to_vertex_list, enumerate_cuts
from .gluing import quadratic_basis_sp
from .graphs import (
    is_connected,
    is_k4_minor_free,
    parse_graph,
    sp_decompose,
    sp_tree_to_json,
)
from .oracle import (
    DEFAULT_FIBER_CAP,
    generates_up_to_degree,
    markov_basis_up_to_degree,
    quadratic_kernel_binomials,
)
from .sampling import counts_to_json, marginals, parse_counts, sample_fiber, sampler_header

THREADS_ENV = "CUTIDEAL_THREADS"


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    try:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    except OSError as exc:
        raise InputError(f"cannot write {output}: {exc}") from exc


def _emit_json(obj, output: str | None) -> None:
    _emit(json.dumps(obj, indent=2, sort_keys=True), output)


def _load_graph(path: str):
    return parse_graph(_read(path))


def _require_connected(g) -> None:
    if not is_connected(g):
        raise ValueError("this command needs a connected graph")


def _thread_cap() -> int:
    """Parallelism cap from the environment; the implementation is sequential,
    which satisfies any positive cap."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InputError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise InputError(f"{THREADS_ENV} must be at least 1")
    return cap


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cutideals",
        description="Cut ideals of graphs: cuts, decompositions, generating sets, samplers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--output", default=None, help="write the JSON result to this path")
        return p

    p = common(sub.add_parser("cuts", help="list the canonical cuts of a graph"))
    p.add_argument("graph")

    p = common(sub.add_parser("phi", help="image data of a cut monomial"))
    p.add_argument("graph")
    p.add_argument("monomial", help="path to a JSON list of cuts")

    p = common(sub.add_parser("decompose", help="series-parallel decomposition tree"))
    p.add_argument("graph")

    p = common(sub.add_parser("markov-basis", help="oracle generating set up to a degree"))
    p.add_argument("graph")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--fiber-cap", type=int, default=DEFAULT_FIBER_CAP)

    p = common(sub.add_parser("quad-basis", help="constructed quadratic generating set"))
    p.add_argument("graph")

    p = common(
        sub.add_parser(
            "check-quadratic",
            help="do quadratics generate, verified by the fiber oracle",
        )
    )
    p.add_argument("graph")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--fiber-cap", type=int, default=DEFAULT_FIBER_CAP)

    p = common(sub.add_parser("marginals", help="edge-cut marginals of a counts table"))
    p.add_argument("graph")
    p.add_argument("counts")

    p = common(sub.add_parser("sample", help="sample tables with the same marginals"))
    p.add_argument("graph")
    p.add_argument("counts")
    p.add_argument("--steps", type=int, default=10000)
    p.add_argument("--burn-in", type=int, default=0)
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--basis", default=None, help="optional path to a generating set JSON")

    p = common(sub.add_parser("verify", help="fiber connectivity of a supplied basis"))
    p.add_argument("graph")
    p.add_argument("basis")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--fiber-cap", type=int, default=DEFAULT_FIBER_CAP)

    return parser


def run(args: argparse.Namespace) -> int:
    _thread_cap()
    if args.command == "cuts":
        g = _load_graph(args.graph)
        _emit_json(
            {"n": g.vertex_count, "cuts": [cut_to_vertex_list(c) for c in enumerate_cuts(g)]},
            args.output,
        )
        return 0

    if args.command == "phi":
        g = _load_graph(args.graph)
        try:
            obj = json.loads(_read(args.monomial))
        except json.JSONDecodeError as exc:
            raise InputError(f"monomial file is not valid JSON: {exc}") from exc
        m = monomial_from_json(obj, g)
        vec = phi_image(g, m)
        _emit_json(
            {
                "monomial": monomial_to_json(m),
                "degree": vec.degree,
                "exponents": exponent_vector_to_json(vec),
            },
            args.output,
        )
        return 0

    if args.command == "decompose":
        g = _load_graph(args.graph)
        _emit_json(sp_tree_to_json(sp_decompose(g)), args.output)
        return 0

    if args.command == "markov-basis":
        g = _load_graph(args.graph)
        _require_connected(g)
        if args.max_degree < 2:
            raise InputError("--max-degree must be at least 2")
        report = markov_basis_up_to_degree(g, args.max_degree, fiber_cap=args.fiber_cap)
        out = generating_set_to_json(
            report.generating_set, max_degree_needed=report.max_degree_needed
        )
        out["new_per_degree"] = {str(d): k for d, k in report.new_per_degree.items()}
        _emit_json(out, args.output)
        return 0

    if args.command == "quad-basis":
        g = _load_graph(args.graph)
        _require_connected(g)
        gens = quadratic_basis_sp(g)
        _emit_json(generating_set_to_json(gens), args.output)
        return 0

    if args.command == "check-quadratic":
        g = _load_graph(args.graph)
        _require_connected(g)
        if args.max_degree < 2:
            raise InputError("--max-degree must be at least 2")
        sp = is_k4_minor_free(g)
        if sp:
            gens = quadratic_basis_sp(g)
        else:
            gens = quadratic_kernel_binomials(g, fiber_cap=args.fiber_cap)
        check = generates_up_to_degree(g, gens, args.max_degree, fiber_cap=args.fiber_cap)
        out = {
            "k4_minor_free": sp,
            "basis_size": len(gens.binomials),
            "max_degree_checked": args.max_degree,
            "quadratics_generate": check.generates,
            "witness_fiber": None
            if check.witness_fiber is None
            else [monomial_to_json(m) for m in check.witness_fiber],
        }
        _emit_json(out, args.output)
        return 0

    if args.command == "marginals":
        g = _load_graph(args.graph)
        t = parse_counts(_read(args.counts), g)
        vec = marginals(t, g)
        _emit_json(
            {
                "edges": [list(e) for e in vec.edges],
                "cut_counts": list(vec.cut_counts),
                "total": vec.total,
            },
            args.output,
        )
        return 0

    if args.command == "sample":
        g = _load_graph(args.graph)
        _require_connected(g)
        t0 = parse_counts(_read(args.counts), g)
        if args.basis is not None:
            gens = parse_generating_set(_read(args.basis))
            if not _same_edges(gens.graph, g):
                raise ValueError("basis belongs to a different graph")
        else:
            gens = quadratic_basis_sp(g)
        if args.steps <= args.burn_in or args.burn_in < 0 or args.thin < 1:
            raise InputError("need steps > burn-in >= 0 and thin >= 1")
        tables = sample_fiber(
            g, t0, gens, steps=args.steps, burn_in=args.burn_in, thin=args.thin, seed=args.seed
        )
        lines = [
            json.dumps(
                sampler_header(g, args.steps, args.burn_in, args.thin, args.seed),
                sort_keys=True,
                separators=(",", ":"),
            )
        ]
        lines += [
            json.dumps(counts_to_json(t), sort_keys=True, separators=(",", ":"))
            for t in tables
        ]
        _emit("\n".join(lines), args.output)
        return 0

    if args.command == "verify":
        g = _load_graph(args.graph)
        _require_connected(g)
        gens = parse_generating_set(_read(args.basis), check_kernel=False)
        if not _same_edges(gens.graph, g):
            raise ValueError("basis belongs to a different graph")
        check = generates_up_to_degree(g, gens.binomials, args.max_degree, fiber_cap=args.fiber_cap)
        _emit_json(
            {
                "max_degree": args.max_degree,
                "generates": check.generates,
                "witness_fiber": None
                if check.witness_fiber is None
                else [monomial_to_json(m) for m in check.witness_fiber],
            },
            args.output,
        )
        return 0

    raise InputError(f"unknown command {args.command!r}")


def _same_edges(a, b) -> bool:
    return tuple(a.vertices) == tuple(b.vertices) and a.edges == b.edges


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except K4MinorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.certificate is not None:
            print(json.dumps({"certificate": exc.certificate}, sort_keys=True), file=sys.stderr)
        return 1
    except (FiberCapExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
