"""Command line surface: every subcommand emits one report.

Reports are aligned text by default or a single JSON document with
--json. Exit codes: 0 for a certified result, 2 for a result the chosen
truncation could not certify, 1 for input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

from .boundary import (
    DEFAULT_DEPTH,
    BoundaryRay,
    ChainExhausted,
    UncertifiedDepth,
    bracket_product,
    cross_ratio_bfm,
    cross_ratio_cr,
    find_separated_chain,
    gromov_product,
    hyp_member,
    metric_d,
    refine_to_single_wall,
)
from .constructions import (
    as_gauge,
    basepoint_experiment,
    build_beta,
    build_croke_kleiner,
    build_example23,
    build_gamma,
    certify_quasigeodesic,
    check_contracting,
    check_divergence_dichotomy,
    example23_relators,
    kappa,
    kappa_prime,
    line_wall_count,
    runpath_prefix,
    small_cancellation_check,
    verify_separation,
)
from .raag import DefiningGraph, GroupElement, distance, normal_form, parse_word
from .runpaths import RunPath
from .walls import (
    DEFAULT_BALL_CAP,
    DEFAULT_SLACK,
    Wall,
    crosses,
    crossing_count,
    side,
    walls_between,
)


class CLIError(ValueError):
    """Bad command line input; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise CLIError(message)


# --- input parsing --------------------------------------------------------------


def _load_graph(path: str | None) -> DefiningGraph:
    if path is None:
        raise CLIError("this command needs --graph FILE")
    try:
        return DefiningGraph.from_json(path)
    except OSError as exc:
        raise CLIError(f"cannot read graph file: {exc}") from None


def _element(graph: DefiningGraph, text: str) -> GroupElement:
    if text.strip() in ("", "1"):
        return GroupElement.identity(graph)
    return normal_form(parse_word(text, graph))


def _wall(graph: DefiningGraph, text: str) -> Wall:
    base_text, sep, gen_name = text.rpartition("@")
    if not sep or not gen_name:
        raise CLIError(f"wall syntax is BASE@GEN: {text!r}")
    return Wall(_element(graph, base_text), graph.gen_index(gen_name))


def _ray(graph: DefiningGraph, text: str, base: GroupElement | None = None) -> BoundaryRay:
    return BoundaryRay.from_text(graph, text, base)


def _labeled_rays(graph, base, items, labels=("w", "x", "y", "z")):
    out = {}
    for item in items:
        name, sep, text = item.partition(":")
        if not sep or name not in labels or name in out:
            raise CLIError(f"expected {'/'.join(labels)}:\"PREFIX|PERIOD\", got {item!r}")
        out[name] = _ray(graph, text, base)
    if len(out) != len(labels):
        raise CLIError(f"need all of {', '.join(labels)}")
    return out


def _runpath_spec(text: str, graph) -> RunPath:
    """word:TEXT walks letters from the identity; gamma:L is the diagonal
    geodesic; beta:DELTA,L[,PREFIX] is the escape path, optionally cut."""
    kind, sep, rest = text.partition(":")
    if not sep:
        kind, rest = "word", text
    if kind == "word":
        return RunPath.from_word(parse_word(rest, graph))
    if kind == "gamma":
        return build_gamma(int(rest)).runpath()
    if kind == "beta":
        parts = [int(p) for p in rest.split(",")]
        if len(parts) == 2:
            return build_beta(*parts).path
        if len(parts) == 3:
            return runpath_prefix(build_beta(parts[0], parts[1]).path, parts[2])
    raise CLIError(f"bad path spec {text!r}; use word:W, gamma:L or beta:D,L[,N]")


# --- output ----------------------------------------------------------------------


def _num(value, certified: bool) -> dict:
    return {"value": _jsonable(value), "certified": bool(certified)}


def _jsonable(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    if isinstance(v, float):
        return "inf" if math.isinf(v) else v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return str(v)


def _seq_text(v: list) -> str:
    if not v:
        return "(none)"
    if len(v) > 8:
        return " ".join(str(x) for x in v[:8]) + f" ... ({len(v)} items)"
    return " ".join(str(x) for x in v)


def _flatten(prefix: str, v, rows: list):
    if isinstance(v, dict):
        if set(v) == {"value", "certified"}:
            tag = "" if v["certified"] else "  (uncertified)"
            val = _seq_text(v["value"]) if isinstance(v["value"], list) else v["value"]
            rows.append((prefix, f"{val}{tag}"))
            return
        for k in sorted(v):
            _flatten(f"{prefix}.{k}" if prefix else k, v[k], rows)
    elif isinstance(v, list) and any(isinstance(x, dict) for x in v):
        for i, x in enumerate(v):
            _flatten(f"{prefix}[{i}]", x, rows)
    elif isinstance(v, list):
        rows.append((prefix, _seq_text(v)))
    else:
        rows.append((prefix, str(v)))


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, sort_keys=True, indent=2))
        return
    rows: list[tuple[str, str]] = []
    _flatten("", report["outputs"], rows)
    rows.append(("certified", "yes" if report["certified"] else "no"))
    width = max(len(k) for k, _ in rows)
    print(f"[{report['command']}]")
    for k, v in rows:
        print(f"  {k.ljust(width)}  {v}")


# --- handlers: each returns (outputs, certified) ----------------------------------


def _cmd_nf(args):
    graph = _load_graph(args.graph)
    el = _element(graph, args.word)
    return {"nf": el.text(), "length": _num(el.length, True)}, True


def _cmd_dist(args):
    graph = _load_graph(args.graph)
    x, y = _element(graph, args.x), _element(graph, args.y)
    return {"distance": _num(distance(x, y), True)}, True


def _cmd_walls(args):
    graph = _load_graph(args.graph)
    x, y = _element(graph, args.x), _element(graph, args.y)
    hs = walls_between(x, y)
    return {
        "count": _num(len(hs), True),
        "walls": [h.text() for h in hs],
    }, True


def _cmd_side(args):
    graph = _load_graph(args.graph)
    h = _wall(graph, args.wall)
    x = _element(graph, args.x)
    return {"side": _num(side(h, x), True)}, True


def _cmd_crosses(args):
    graph = _load_graph(args.graph)
    h1, h2 = _wall(graph, args.wall1), _wall(graph, args.wall2)
    return {"crosses": crosses(h1, h2)}, True


def _cmd_separated(args):
    graph = _load_graph(args.graph)
    h1, h2 = _wall(graph, args.wall1), _wall(graph, args.wall2)
    count, certified = crossing_count(h1, h2, slack=args.slack, cap=args.cap)
    return {
        "crossing_count": _num(count, certified),
        "strongly_separated": bool(count == 0 and certified),
    }, certified


def _cmd_chain(args):
    graph = _load_graph(args.graph)
    ray = _ray(graph, args.ray)
    chain = find_separated_chain(ray, args.n, args.r, args.depth)
    return {
        "length": _num(len(chain), True),
        "walls": [h.text() for h in chain.walls],
        "index_gaps": _num(list(chain.gaps), True),
        "n": _num(args.n, True),
        "r": _num(args.r, True),
    }, True


def _product_command(fn, args):
    graph = _load_graph(args.graph)
    base = _element(graph, args.base) if args.base else None
    xi = _ray(graph, args.xi, base)
    eta = _ray(graph, args.eta, base)
    p = fn(xi, eta, args.depth)
    return {
        "value": _num(p.value, p.certified),
        "depth_used": _num(p.depth_used, True),
    }, p.certified


def _cmd_product(args):
    return _product_command(gromov_product, args)


def _cmd_bracket(args):
    return _product_command(bracket_product, args)


def _cmd_metric(args):
    return _product_command(metric_d, args)


def _cmd_crossratio(args):
    graph = _load_graph(args.graph)
    base = _element(graph, args.base) if args.base else None
    rays = _labeled_rays(graph, base, args.rays)
    fn = cross_ratio_bfm if args.variant == "bfm" else cross_ratio_cr
    value, certified = fn(rays["w"], rays["x"], rays["y"], rays["z"], args.depth)
    return {"cross_ratio": _num(value, certified), "variant": args.variant}, certified


def _cmd_hyp(args):
    graph = _load_graph(args.graph)
    ray = _ray(graph, args.ray)
    hs = [_wall(graph, w) for w in args.wall]
    if not hs:
        raise CLIError("need at least one --wall")
    try:
        member = hyp_member(ray, hs, args.depth)
    except UncertifiedDepth as exc:
        return {"member": None, "reason": str(exc)}, False
    return {"member": member}, True


def _cmd_refine(args):
    graph = _load_graph(args.graph)
    ray = _ray(graph, args.ray)
    hs = [_wall(graph, w) for w in (args.wall1, args.wall2)]
    chain = find_separated_chain(ray, args.n, args.r, args.depth)
    try:
        k = refine_to_single_wall(ray, hs, chain, args.depth)
    except (ChainExhausted, ValueError) as exc:
        raise CLIError(str(exc)) from None
    return {"wall": k.text(), "chain_length": _num(len(chain), True)}, True


def _cmd_kappa(args):
    rho = as_gauge(args.rho)
    k = kappa(rho, args.K, args.C)
    kp = kappa_prime(rho, args.K, args.C)
    return {
        "rho": rho.text(),
        "kappa": _num(k, True),
        "kappa_prime": _num(kp, True),
    }, True


def _cmd_gamma(args):
    gp = build_gamma(args.flats)
    return {
        "flats": _num(args.flats, True),
        "steps": _num(2 * args.flats, True),
        "endpoint": gp.vertices[-1].text(),
        "families": gp.families(),
        "line_wall_counts": _num(
            [line_wall_count(gp, l) for l in range(1, args.flats + 1)], True
        ),
    }, True


def _cmd_beta(args):
    rep = build_beta(args.delta, args.flats)
    outputs = {
        "delta": _num(args.delta, True),
        "flats": _num(args.flats, True),
        "run_lengths": _num([s.N for s in rep.segments], True),
        "connector_lengths": _num([s.M for s in rep.segments], True),
        "total_length": _num(rep.total_length, True),
        "family_sequence": rep.family_sequence,
        "endpoint": rep.path.endpoint().text(),
    }
    certified = True
    if args.certify:
        qg = certify_quasigeodesic(rep.path, args.K, args.C)
        sep = verify_separation(rep)
        outputs["quasi_geodesic"] = {
            "K": _num(Fraction(args.K), True),
            "C": _num(Fraction(args.C), True),
            "min_margin": _num(qg.min_margin, qg.certified),
            "passed": qg.certified,
        }
        outputs["separation"] = {
            "min_separation": _num(sep.min_separation, sep.ok),
            "passed": sep.ok,
        }
        certified = qg.certified and sep.ok
    return outputs, certified


def _cmd_contracting(args):
    graph = _load_graph(args.graph) if args.graph else build_croke_kleiner().graph
    path = _runpath_spec(args.path, graph)
    rep = check_contracting(
        path, args.rho, args.radius, cap=args.cap, max_pairs=args.max_pairs, seed=args.seed
    )
    certified = rep.exhaustive or not rep.passed
    return {
        "passed": rep.passed,
        "rho": rep.rho_text,
        "radius": _num(rep.radius, True),
        "pairs_tested": _num(rep.pairs_tested, rep.exhaustive),
        "exhaustive": rep.exhaustive,
        "witness": _num(list(rep.witness), True) if rep.witness else None,
    }, certified


def _cmd_dichotomy(args):
    graph = _load_graph(args.graph) if args.graph else build_croke_kleiner().graph
    Z = _runpath_spec(args.z, graph)
    path = _runpath_spec(args.path, graph)
    rep = check_divergence_dichotomy(Z, path, args.rho, args.K, args.C)
    # exact exhaustive arithmetic: a failed bound is a certified refutation
    return {
        "case": _num(rep.case, True),
        "kappa": _num(rep.kappa_value, True),
        "kappa_prime": _num(rep.kappa_prime_value, True),
        "last_return": _num(rep.T0, True),
        "max_distance": _num(rep.max_distance, True),
        "residual_min": _num(rep.residual_min, True) if rep.residual_min is not None else None,
        "bound_ok": rep.bound_ok,
    }, True


def _cmd_example23(args):
    ex = build_example23(args.f, args.imax, args.tail)
    rows = basepoint_experiment(ex, args.kappa)
    return {
        "f": args.f,
        "i_max": _num(ex.i_max, True),
        "tail": _num(ex.tail, True),
        "kappa": _num(args.kappa, True),
        "vertices": _num(ex.graph.vertex_count, True),
        "edges": _num(ex.graph.edge_count, True),
        "loops": _num(ex.graph.edge_count - ex.graph.vertex_count + 1, True),
        "rows": [
            {
                "i": _num(r.i, True),
                "d_o": _num(r.d_o, True),
                "d_oprime": _num(r.d_oprime, True),
                "radius_o": _num(r.radius_o, True),
                "radius_oprime": _num(r.radius_oprime, True),
            }
            for r in rows
        ],
    }, True


def _cmd_smallcancel(args):
    rel = example23_relators(args.f, range(1, args.imax + 1))
    rep = small_cancellation_check(rel)
    return {
        "relator_lengths": _num(list(rep.relator_lengths), True),
        "max_ratio": _num(rep.max_ratio, True),
        "piece_length": _num(rep.piece_length, True),
        "piece": rep.piece,
        "relator_pair": _num(list(rep.relator_pair), True),
        "passes_sixth": rep.passes_sixth,
        "note": "classical C'(1/6) on the relator set; proxy for the graphical bound",
    }, True


_HANDLERS = {
    "nf": _cmd_nf,
    "dist": _cmd_dist,
    "walls": _cmd_walls,
    "side": _cmd_side,
    "crosses": _cmd_crosses,
    "separated": _cmd_separated,
    "chain": _cmd_chain,
    "product": _cmd_product,
    "bracket": _cmd_bracket,
    "metric": _cmd_metric,
    "crossratio": _cmd_crossratio,
    "hyp": _cmd_hyp,
    "refine": _cmd_refine,
    "kappa": _cmd_kappa,
    "gamma": _cmd_gamma,
    "beta": _cmd_beta,
    "contracting": _cmd_contracting,
    "dichotomy": _cmd_dichotomy,
    "example23": _cmd_example23,
    "smallcancel": _cmd_smallcancel,
}


def _build_parser() -> _Parser:
    p = _Parser(prog="cubemorse", description=__doc__)
    p.add_argument("--json", action="store_true", help="emit one JSON report")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    def add(name: str, help_: str, graph: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        # accepted on either side of the subcommand; SUPPRESS keeps the
        # subparser from clobbering a --json given before it
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help=argparse.SUPPRESS)
        if graph:
            sp.add_argument("--graph", metavar="FILE", help="defining graph JSON")
        return sp

    sp = add("nf", "shortlex geodesic normal form of a word")
    sp.add_argument("word")

    sp = add("dist", "word metric distance between two elements")
    sp.add_argument("x")
    sp.add_argument("y")

    sp = add("walls", "walls separating two elements")
    sp.add_argument("x")
    sp.add_argument("y")

    sp = add("side", "which side of a wall an element lies on")
    sp.add_argument("--wall", required=True, metavar="BASE@GEN")
    sp.add_argument("x")

    sp = add("crosses", "whether two walls are transverse")
    sp.add_argument("wall1", metavar="BASE@GEN")
    sp.add_argument("wall2", metavar="BASE@GEN")

    sp = add("separated", "walls crossing both of two disjoint walls")
    sp.add_argument("wall1", metavar="BASE@GEN")
    sp.add_argument("wall2", metavar="BASE@GEN")
    sp.add_argument("--slack", type=int, default=DEFAULT_SLACK)
    sp.add_argument("--cap", type=int, default=DEFAULT_BALL_CAP)

    sp = add("chain", "separated chain among a ray's walls")
    sp.add_argument("--ray", required=True, metavar="PREFIX|PERIOD")
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--r", type=int, default=5)
    sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)

    for name, help_ in (
        ("product", "Gromov product of two rays"),
        ("bracket", "bracket product of two rays"),
        ("metric", "boundary distance term of two rays"),
    ):
        sp = add(name, help_)
        sp.add_argument("--base", default=None, help="basepoint element")
        sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
        sp.add_argument("xi", metavar="PREFIX|PERIOD")
        sp.add_argument("eta", metavar="PREFIX|PERIOD")

    sp = add("crossratio", "cross ratio of four labeled rays")
    sp.add_argument("--base", default=None)
    sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    sp.add_argument("--variant", choices=("cr", "bfm"), default="cr")
    sp.add_argument("rays", nargs=4, metavar="LABEL:RAY")

    sp = add("hyp", "whether a ray crosses every listed wall")
    sp.add_argument("--ray", required=True, metavar="PREFIX|PERIOD")
    sp.add_argument("--wall", action="append", default=[], metavar="BASE@GEN")
    sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)

    sp = add("refine", "single chain wall behind two crossed walls")
    sp.add_argument("--ray", required=True, metavar="PREFIX|PERIOD")
    sp.add_argument("wall1", metavar="BASE@GEN")
    sp.add_argument("wall2", metavar="BASE@GEN")
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--r", type=int, default=5)
    sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)

    sp = add("kappa", "trapping radius of a sublinear gauge", graph=False)
    sp.add_argument("--rho", default="0", help='gauge: "const 3", "power 2 1/2", "log 3"')
    sp.add_argument("--K", type=Fraction, default=Fraction(1))
    sp.add_argument("--C", type=Fraction, default=Fraction(0))

    sp = add("gamma", "periodic diagonal geodesic through the flat cycle", graph=False)
    sp.add_argument("--flats", type=int, required=True)

    sp = add("beta", "flat-hopping escape path against gamma", graph=False)
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--flats", type=int, required=True)
    sp.add_argument("--certify", action="store_true",
                    help="run the quasi-geodesic and separation certificates")
    sp.add_argument("--K", type=Fraction, default=Fraction(8))
    sp.add_argument("--C", type=Fraction, default=Fraction(1))

    sp = add("contracting", "brute-force contraction check around a path")
    sp.add_argument("path", metavar="SPEC", help="word:W, gamma:L or beta:D,L[,N]")
    sp.add_argument("--rho", default="0")
    sp.add_argument("--radius", type=int, default=3)
    sp.add_argument("--cap", type=int, default=DEFAULT_BALL_CAP)
    sp.add_argument("--max-pairs", type=int, default=200_000)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("dichotomy", "trapped-or-linear divergence classification")
    sp.add_argument("--z", required=True, metavar="SPEC", help="contracting set path")
    sp.add_argument("--path", required=True, metavar="SPEC", help="path to classify")
    sp.add_argument("--rho", default="0")
    sp.add_argument("--K", type=Fraction, default=Fraction(8))
    sp.add_argument("--C", type=Fraction, default=Fraction(1))

    sp = add("example23", "glued graph basepoint experiment", graph=False)
    sp.add_argument("--f", default="poly 1 0 1", help='branch scale, e.g. "poly 1 0 1"')
    sp.add_argument("--imax", type=int, default=6)
    sp.add_argument("--tail", type=int, required=True)
    sp.add_argument("--kappa", type=int, default=2)

    sp = add("smallcancel", "piece overlap bound for the glued loops", graph=False)
    sp.add_argument("--f", default="poly 1 0 1")
    sp.add_argument("--imax", type=int, default=6)

    return p


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise CLIError("missing subcommand")
        t0 = time.perf_counter()
        outputs, certified = _HANDLERS[args.command](args)
        report = {
            "command": args.command,
            "inputs": [a for a in argv if a != "--json"],
            "outputs": outputs,
            "certified": bool(certified),
            "timing_s": round(time.perf_counter() - t0, 6),
        }
        _emit(report, args.json)
        return 0 if certified else 2
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
