"""Command line front end.

Subcommands:

    check     parse a model and report its coherence diagnostics
    vertices  enumerate extreme points, CSV with exact rational cells
    fan       walk or construct the cone adjacency structure and report it
    graph     emit the adjacency graph as JSON
    natex     evaluate the lower expectation of a gamble file
    bounds    print the sharp cone-count bounds for interval models

Models are JSON documents with a mandatory "type" of "lower_prevision",
"lower_probability", or "pri". Engines: "auto" picks the structured engine
the model supports, "walk" runs the generic adjacency walk, "chains" the
chain fan of a 2-monotone lower probability, "pri" the interval exchange
rules, "oracle" the brute-force vertex enumerator. Exit status: 0 success,
1 a property of the model failed (incoherent, not 2-monotone, verification
mismatch), 2 unusable input (schema errors, wrong engine for the model
type, oracle guards exceeded).

All values are exact rationals; --decimal adds 12-significant-digit
approximations for reading convenience, explicitly marked non-authoritative.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import itertools
import json
import sys
import time

from . import chains2mono, credal, pri
from .cones import SupportUniverse
from .exactla import ZERO, dot, format_rat, ones, rat
from .fanwalk import MescGraph, MescNode, graph_to_dot, graph_to_json, verify_graph, walk
from .polytope import EmptyPolytopeError, OracleGuardError, lp_min, vertices_bruteforce

__all__ = ["main"]


class InputError(Exception):
    """Exit-2 class: the request cannot be run as posed."""


class PropertyError(Exception):
    """Exit-1 class: the model fails the property the command relies on."""


def _fail_input(msg):
    raise InputError(msg)


def _load_model(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read model file: {exc}") from None
    digest = hashlib.sha256(raw).hexdigest()
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"model file is not valid JSON: {exc}") from None
    if not isinstance(obj, dict) or "type" not in obj:
        raise InputError("model document must be an object with a 'type' field")
    tag = obj["type"]
    try:
        if tag == "lower_prevision":
            return tag, credal.lower_prevision_from_json(obj), digest
        if tag == "lower_probability":
            return tag, chains2mono.lower_probability_from_json(obj), digest
        if tag == "pri":
            return tag, pri.pri_from_json(obj), digest
    except credal.SchemaError as exc:
        raise InputError(str(exc)) from None
    raise InputError(f"unknown model type {tag!r}")


def _pick_engine(requested, tag, model):
    if requested != "auto":
        allowed = {
            "lower_prevision": {"walk", "oracle"},
            "lower_probability": {"walk", "oracle", "chains"},
            "pri": {"walk", "oracle", "pri", "chains"},
        }[tag]
        if requested not in allowed:
            raise InputError(
                f"engine {requested!r} does not apply to a {tag} model "
                f"(choose from {sorted(allowed)})")
        return requested
    if tag == "pri":
        return "pri"
    if tag == "lower_probability":
        return "chains" if chains2mono.is_two_monotone(model).ok else "walk"
    return "walk"


def _hrep_universe(tag, model):
    """(polytope, universe, prevision-or-None) for the generic engines."""
    if tag == "pri":
        h, universe = pri.pri_hrep(model)
        return h, universe, None
    if tag == "lower_probability":
        prevision = chains2mono.as_lower_prevision(model)
    else:
        prevision = model
    h, universe = credal.build_credal_hrep(prevision)
    return h, universe, prevision


def _require_two_monotone(model):
    rep = chains2mono.is_two_monotone(model)
    if not rep.ok:
        names = model.space.names
        a, b = rep.violator
        ka = "|".join(names[i] for i in sorted(a))
        kb = "|".join(names[i] for i in sorted(b))
        raise PropertyError(
            f"not 2-monotone: events {ka} and {kb} "
            f"give {format_rat(rep.lhs)} < {format_rat(rep.rhs)}")


def _chain_graph(model) -> MescGraph:
    n = model.space.n
    gens_of = {}
    nodes = {}
    for chain in chains2mono.chain_fan(n):
        cone = chains2mono.chain_cone(chain)
        node = MescNode(cone.generators, chains2mono.chain_vertex(model, chain))
        gens_of[chain] = node.gens
        nodes[node.gens] = node
    edges = set()
    for chain in chains2mono.chain_fan(n):
        for nb in chains2mono.chain_neighbors(chain):
            edges.add(frozenset({gens_of[chain], gens_of[nb]}))
    return MescGraph(tuple(nodes[k] for k in sorted(nodes)), frozenset(edges))


def _guard_advice(exc, engine):
    hints = {
        "walk": "use --engine pri or --engine chains for structured models of this size",
        "oracle": "the oracle is restricted to small instances; use a structured engine",
    }
    return f"{exc} ({hints.get(engine, 'reduce the instance size')})"


def _compute_graph(tag, model, engine, seed):
    """(graph, universe, vertex set) under the chosen engine; the oracle
    engine yields vertices with no graph."""
    if engine == "pri":
        if tag == "pri":
            m = model
        else:
            raise InputError("pri engine needs an interval model")
        try:
            points, graph = pri.enumerate_extreme_pri(m)
        except credal.IncoherenceError as exc:
            raise PropertyError(str(exc)) from None
        _, universe = pri.pri_hrep(m)
        return graph, universe, points
    if engine == "chains":
        if tag == "pri":
            if not pri.is_coherent_pri(model).proper:
                raise PropertyError("improper interval model: no distribution fits the bounds")
            model = pri.induced_2mono(model)
        _require_two_monotone(model)
        graph = _chain_graph(model)
        universe = _event_universe(model.space.n)
        return graph, universe, graph.vertices
    h, universe, prevision = _hrep_universe(tag, model)
    try:
        if engine == "oracle":
            points = frozenset(v.point for v in vertices_bruteforce(h))
            return None, universe, points
        # The walk presumes every assessment row supports the credal set;
        # slack rows (incoherent input) break its wall-crossing invariants,
        # so refuse up front instead of emitting a defective graph.
        if tag == "pri":
            if not pri.is_coherent_pri(model).coherent:
                raise PropertyError(
                    "incoherent interval model: the adjacency walk needs reachable "
                    "bounds (run check for the repaired bounds)")
        else:
            rep = credal.is_coherent(prevision)
            if not rep.coherent:
                raise PropertyError(
                    "empty credal set" if rep.empty
                    else "incoherent model: some assessed bound is not attained; "
                         "the adjacency walk needs a coherent model (try --engine oracle "
                         "for the raw vertex set)")
        graph = walk(h, universe, seed=seed)
    except OracleGuardError as exc:
        raise InputError(_guard_advice(exc, engine)) from None
    except EmptyPolytopeError as exc:
        raise PropertyError(f"empty credal set: {exc}") from None
    return graph, universe, graph.vertices


def _event_universe(n):
    vs = []
    for r in range(1, n):
        for s in itertools.combinations(range(n), r):
            vs.append(tuple(rat(1) if i in s else ZERO for i in range(n)))
    vs.append(ones(n))
    return SupportUniverse(tuple(vs))


def _verify_vertices(tag, model, points):
    h, _, _ = _hrep_universe(tag, model)
    try:
        oracle = frozenset(v.point for v in vertices_bruteforce(h))
    except OracleGuardError as exc:
        raise InputError(_guard_advice(exc, "oracle")) from None
    if oracle != points:
        missing = len(oracle - points)
        extra = len(points - oracle)
        raise PropertyError(
            f"verification mismatch: {missing} oracle vertices missing, {extra} spurious")
    return len(oracle)


class Report:
    """Ordered key: value lines, kept machine-greppable."""

    def __init__(self, command):
        self.lines = [("command", command)]

    def add(self, key, value):
        if isinstance(value, bool):
            value = "true" if value else "false"
        self.lines.append((key, value))

    def write(self, stream):
        for key, value in self.lines:
            print(f"{key}: {value}", file=stream)


def _decimal(x) -> str:
    return f"{float(x):.12g}"


def _emit_vertices(points, names, out_path, decimal, report):
    rows = sorted(points)
    header = list(names)
    if decimal:
        header += [f"{name}_dec" for name in names]
    target = open(out_path, "w", newline="") if out_path else sys.stdout
    try:
        writer = csv.writer(target)
        writer.writerow(header)
        for p in rows:
            cells = [format_rat(x) for x in p]
            if decimal:
                cells += [_decimal(x) for x in p]
            writer.writerow(cells)
    finally:
        if out_path:
            target.close()
    if decimal:
        report.add("decimal", "12-digit approximations, non-authoritative")
    report.write(sys.stdout if out_path else sys.stderr)


def _cmd_check(args):
    tag, model, digest = _load_model(args.model)
    report = Report("check")
    report.add("model", args.model)
    report.add("sha256", digest)
    report.add("type", tag)
    ok = True
    if tag == "pri":
        rep = pri.is_coherent_pri(model)
        report.add("proper", rep.proper)
        report.add("coherent", rep.coherent)
        if rep.proper and not rep.coherent:
            fixed = rep.repaired
            report.add("repaired_lower", " ".join(format_rat(x) for x in fixed.lower))
            report.add("repaired_upper", " ".join(format_rat(x) for x in fixed.upper))
        ok = rep.coherent
    elif tag == "lower_probability":
        rep = chains2mono.is_two_monotone(model)
        report.add("two_monotone", rep.ok)
        if not rep.ok:
            a, b = rep.violator
            names = model.space.names
            report.add("violator_a", "|".join(names[i] for i in sorted(a)))
            report.add("violator_b", "|".join(names[i] for i in sorted(b)))
            report.add("violation", f"{format_rat(rep.lhs)} < {format_rat(rep.rhs)}")
        ok = rep.ok
    else:
        try:
            rep = credal.is_coherent(model)
        except OracleGuardError as exc:
            raise InputError(_guard_advice(exc, "oracle")) from None
        report.add("empty", rep.empty)
        report.add("coherent", rep.coherent)
        for chk in rep.failures():
            attained = "unattained (empty)" if chk.attained is None else format_rat(chk.attained)
            report.add("slack_assessment",
                       f"lower {format_rat(chk.lower)} vs exact {attained}")
        ok = rep.coherent
    report.write(sys.stdout)
    return 0 if ok else 1


def _cmd_vertices(args):
    tag, model, digest = _load_model(args.model)
    engine = _pick_engine(args.engine, tag, model)
    report = Report("vertices")
    report.add("model", args.model)
    report.add("sha256", digest)
    report.add("engine", engine)
    t0 = time.perf_counter()
    _, _, points = _compute_graph(tag, model, engine, args.seed)
    report.add("time_ms_compute", round(1000 * (time.perf_counter() - t0)))
    report.add("n_vertices", len(points))
    if args.verify:
        t1 = time.perf_counter()
        _verify_vertices(tag, model, points)
        report.add("time_ms_verify", round(1000 * (time.perf_counter() - t1)))
        report.add("verified", True)
    _emit_vertices(points, model.space.names, args.out, args.decimal, report)
    return 0


def _cmd_fan(args):
    tag, model, digest = _load_model(args.model)
    engine = _pick_engine(args.engine, tag, model)
    if engine == "oracle":
        raise InputError("the oracle engine enumerates vertices only; pick walk, chains, or pri")
    report = Report("fan")
    report.add("model", args.model)
    report.add("sha256", digest)
    report.add("engine", engine)
    t0 = time.perf_counter()
    graph, _, points = _compute_graph(tag, model, engine, args.seed)
    report.add("time_ms_compute", round(1000 * (time.perf_counter() - t0)))
    fan_rep = verify_graph(graph)
    report.add("n_nodes", fan_rep.n_nodes)
    report.add("n_edges", fan_rep.n_edges)
    report.add("n_vertices", fan_rep.n_vertices)
    report.add("degree_histogram",
               " ".join(f"{deg}:{count}" for deg, count in fan_rep.degree_histogram))
    report.add("connected", fan_rep.connected)
    report.add("regular", fan_rep.regular)
    report.add("structure_ok", fan_rep.ok)
    if args.verify:
        t1 = time.perf_counter()
        _verify_vertices(tag, model, points)
        report.add("time_ms_verify", round(1000 * (time.perf_counter() - t1)))
        report.add("verified", True)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(graph_to_dot(graph))
        report.add("dot", args.dot)
    report.write(sys.stdout)
    return 0 if fan_rep.ok else 1


def _cmd_graph(args):
    tag, model, digest = _load_model(args.model)
    engine = _pick_engine(args.engine, tag, model)
    if engine == "oracle":
        raise InputError("the oracle engine enumerates vertices only; pick walk, chains, or pri")
    report = Report("graph")
    report.add("model", args.model)
    report.add("sha256", digest)
    report.add("engine", engine)
    t0 = time.perf_counter()
    graph, universe, _ = _compute_graph(tag, model, engine, args.seed)
    report.add("time_ms_compute", round(1000 * (time.perf_counter() - t0)))
    report.add("n_nodes", len(graph.nodes))
    report.add("n_edges", len(graph.edges))
    payload = json.dumps(graph_to_json(graph, universe), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
        report.add("out", args.out)
        report.write(sys.stdout)
    else:
        print(payload)
        report.write(sys.stderr)
    return 0


def _cmd_natex(args):
    tag, model, digest = _load_model(args.model)
    engine = _pick_engine(args.engine, tag, model)
    try:
        with open(args.gamble, "rb") as fh:
            gobj = json.loads(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read gamble file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"gamble file is not valid JSON: {exc}") from None
    try:
        gamble = credal.parse_gamble(gobj, model.space, "gamble")
    except credal.SchemaError as exc:
        raise InputError(str(exc)) from None
    report = Report("natex")
    report.add("model", args.model)
    report.add("sha256", digest)
    report.add("engine", engine)
    t0 = time.perf_counter()
    try:
        if engine == "pri":
            value = pri.natural_extension_pri(model, gamble)
        elif engine == "chains":
            m = model
            if tag == "pri":
                if not pri.is_coherent_pri(model).proper:
                    raise PropertyError(
                        "improper interval model: no distribution fits the bounds")
                m = pri.induced_2mono(model)
            _require_two_monotone(m)
            value = chains2mono.choquet(m, gamble)
        elif engine == "oracle":
            # Raw polytope minimum: valid on incoherent input too, where the
            # natural extension (an envelope notion) refuses to answer.
            h, _, _ = _hrep_universe(tag, model)
            value = lp_min(h, gamble.values).value
        else:
            prevision = model
            if tag == "lower_probability":
                prevision = chains2mono.as_lower_prevision(model)
            elif tag == "pri":
                prevision = pri.as_lower_prevision(model)
            value = credal.natural_extension(prevision, gamble.values)
    except credal.IncoherenceError as exc:
        raise PropertyError(str(exc)) from None
    except EmptyPolytopeError as exc:
        raise PropertyError(f"empty credal set: {exc}") from None
    except OracleGuardError as exc:
        raise InputError(_guard_advice(exc, engine)) from None
    report.add("time_ms_compute", round(1000 * (time.perf_counter() - t0)))
    if args.verify:
        h, _, _ = _hrep_universe(tag, model)
        try:
            oracle = min(dot(gamble.values, v.point) for v in vertices_bruteforce(h))
        except OracleGuardError as exc:
            raise InputError(_guard_advice(exc, "oracle")) from None
        if oracle != value:
            raise PropertyError(
                f"verification mismatch: engine {format_rat(value)} vs oracle {format_rat(oracle)}")
        report.add("verified", True)
    report.add("value", format_rat(value))
    if args.decimal:
        report.add("value_dec", _decimal(value))
        report.add("decimal", "12-digit approximation, non-authoritative")
    report.write(sys.stdout)
    return 0


def _cmd_bounds(args):
    report = Report("bounds")
    if (args.n is None) == (args.model is None):
        raise InputError("give exactly one of --n or --model")
    if args.model is not None:
        tag, model, digest = _load_model(args.model)
        if tag != "pri":
            raise InputError("cone-count bounds apply to interval models")
        n = model.space.n
        report.add("model", args.model)
        report.add("sha256", digest)
    else:
        n = args.n
    try:
        low, high = pri.count_bounds(n)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report.add("n", n)
    report.add("min_cones", low)
    report.add("max_cones", high)
    report.write(sys.stdout)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="credal",
        description="exact normal-fan computations for credal sets")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model_required=True):
        p.add_argument("--model", required=model_required, help="model JSON file")
        p.add_argument("--engine", default="auto",
                       choices=("auto", "walk", "chains", "pri", "oracle"))
        p.add_argument("--seed", type=int, default=0, help="walk seed")
        p.add_argument("--verify", action="store_true",
                       help="cross-check against the brute-force oracle")
        p.add_argument("--decimal", action="store_true",
                       help="add non-authoritative decimal approximations")

    p = sub.add_parser("check", help="coherence diagnostics")
    p.add_argument("--model", required=True)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("vertices", help="extreme points as CSV")
    common(p)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=_cmd_vertices)

    p = sub.add_parser("fan", help="cone adjacency structure report")
    common(p)
    p.add_argument("--dot", help="write the graph in DOT format here")
    p.set_defaults(func=_cmd_fan)

    p = sub.add_parser("graph", help="adjacency graph as JSON")
    common(p)
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("natex", help="lower expectation of a gamble")
    common(p)
    p.add_argument("--gamble", required=True, help="gamble JSON file")
    p.set_defaults(func=_cmd_natex)

    p = sub.add_parser("bounds", help="sharp cone-count bounds")
    p.add_argument("--n", type=int)
    p.add_argument("--model")
    p.set_defaults(func=_cmd_bounds)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PropertyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
