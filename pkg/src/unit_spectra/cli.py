"""``unit-spectra`` command line front end.

Every report is canonical JSON (sorted keys, fixed separators) carrying the
tool version, the tolerances in force and a SHA-256 digest of each input, so
identical inputs and seeds give byte-identical output. Exit codes: 0 success,
1 validation error, 2 hypothesis or verification failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .coloring import bound_report, chromatic_exact, contraction_of, greedy_coloring, lift_coloring
from .config import DEFAULT, Tolerances
from .core import Hypergraph, WeightConfig, parse_document, preset_weights, serialize_hypergraph
from .detectors import AlphaWeighting, classify_set
from .errors import HypergraphError, HypothesisError
from .families import (
    HyperflowerSpec,
    MultiLayerSpec,
    make_hyperflower,
    make_multilayer,
    random_hypergraph,
)
from .metrics import distance_report, unit_graph
from .operators import OperatorKind, build_operator, check_compatibility
from .spectra import assemble_full_spectrum, cospectral_sufficient
from .units import (
    canonical_map,
    compute_units,
    twin_classes,
    twin_contraction,
    unit_contraction,
    unit_names,
    unit_neighbours,
)
from .walk import WalkModel, empirical_hitting, hitting_distribution, simulate, walk_spectrum

log = logging.getLogger("unit_spectra")


class VerificationFailure(Exception):
    """A computed certificate did not pass its checks."""


@dataclass
class RunConfig:
    inputs: list
    preset: str | None
    weights_path: str | None
    kind: str
    tolerances: Tolerances
    seed: int
    output: str | None


@dataclass
class Loaded:
    H: Hypergraph
    weights: WeightConfig
    digest: str
    path: str


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _load(path: str, cfg: RunConfig, digests: list) -> Loaded:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise HypergraphError(f"cannot read {path}: {exc.strerror}") from None
    H, embedded = parse_document(raw.decode("utf-8"))
    digests.append({"path": path, "sha256": _digest(raw)})
    weights = _resolve_weights(H, embedded, cfg, digests)
    return Loaded(H, weights, digests[-1]["sha256"], path)


def _resolve_weights(H: Hypergraph, embedded, cfg: RunConfig, digests: list) -> WeightConfig:
    if cfg.weights_path:
        with open(cfg.weights_path, "rb") as fh:
            raw = fh.read()
        digests.append({"path": cfg.weights_path, "sha256": _digest(raw)})
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise HypergraphError(f"malformed weights file: {exc}") from None
        if not isinstance(doc, dict):
            raise HypergraphError("malformed weights file: top level must be an object")
        extra = set(doc) - {"vertex_weights", "edge_weights"}
        if extra:
            raise HypergraphError(f"malformed weights file: unknown keys {sorted(extra)}")
        return WeightConfig.from_maps(H, doc.get("vertex_weights"), doc.get("edge_weights"))
    if cfg.preset:
        return preset_weights(H, cfg.preset)
    if embedded is not None:
        return embedded
    return preset_weights(H, "R")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": "), allow_nan=False) + "\n"


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".unit-spectra-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg: RunConfig, command: str, digests: list, result: dict) -> None:
    report = {
        "tool": "unit-spectra",
        "version": __version__,
        "command": command,
        "tolerances": cfg.tolerances.as_dict(),
        "seed": cfg.seed,
        "inputs": digests,
        "result": result,
    }
    text = canonical_json(report)
    if cfg.output:
        _write_atomic(cfg.output, text)
    else:
        sys.stdout.write(text)


def _labels(H: Hypergraph, idx) -> list[str]:
    return [str(H.vertices[i]) for i in idx]


def _contraction_dict(C) -> dict:
    return {
        "kind": C.kind,
        "hypergraph": json.loads(serialize_hypergraph(C.quotient)),
        "projection": {str(k): v for k, v in C.projection.items()},
        "edge_projection": dict(C.edge_projection),
        "edge_multiplicity": dict(C.edge_multiplicity),
    }


# --- subcommands -------------------------------------------------------------


def cmd_units(args, cfg: RunConfig) -> dict:
    digests: list = []
    L = _load(args.input, cfg, digests)
    H = L.H
    P = compute_units(H)
    classes = twin_classes(H, P)
    units = []
    for i in range(P.m):
        members, gens = unit_names(H, P, i)
        units.append({"index": i + 1, "members": [str(v) for v in members], "generating_set": gens})
    twins = []
    for c in classes:
        maps = {}
        for j in c.members[1:]:
            f = canonical_map(H, P, c.members[0], j)
            maps[f"W{c.members[0] + 1}->W{j + 1}"] = {H.edges[a].name: H.edges[b].name for a, b in f.items()}
        twins.append({"units": [f"W{u + 1}" for u in c.members], "equipotent": c.equipotent, "canonical_bijections": maps})
    result = {
        "n_vertices": H.n,
        "n_edges": H.m,
        "units": units,
        "unit_neighbours": [[f"W{i + 1}", f"W{j + 1}"] for i, j in sorted(unit_neighbours(P))],
        "twin_classes": twins,
        "unit_contraction": _contraction_dict(unit_contraction(H, P)),
        "twin_contraction": _contraction_dict(twin_contraction(H, P, classes)),
    }
    _emit(cfg, "units", digests, result)
    return result


def cmd_contract(args, cfg: RunConfig) -> dict:
    digests: list = []
    L = _load(args.input, cfg, digests)
    P = compute_units(L.H)
    if args.to == "unit":
        C = unit_contraction(L.H, P)
    else:
        C = twin_contraction(L.H, P, twin_classes(L.H, P))
    result = _contraction_dict(C)
    _emit(cfg, "contract", digests, result)
    return result


def _dump_matrix(path: str, M: np.ndarray) -> None:
    buf = io.StringIO()
    for row in M:
        buf.write(" ".join(repr(float(x)) for x in row) + "\n")
    _write_atomic(path, buf.getvalue())


def _write_csv(path: str, structured, oracle) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "structured", "oracle", "gap"])
    for i, (a, b) in enumerate(zip(structured, oracle)):
        w.writerow([i, repr(float(a)), repr(float(b)), repr(abs(float(a) - float(b)))])
    _write_atomic(path, buf.getvalue())


def cmd_spectrum(args, cfg: RunConfig) -> dict:
    digests: list = []
    L = _load(args.input, cfg, digests)
    if cfg.kind == "P":
        cert, report = walk_spectrum(L.H, L.weights, cfg.tolerances)
        matrix = WalkModel.build(L.H, L.weights).P
    else:
        cert, report = assemble_full_spectrum(L.H, L.weights, cfg.kind, tol=cfg.tolerances)
        matrix = build_operator(L.H, L.weights, cfg.kind).matrix
    result = {
        "preset": L.weights.preset,
        "kind": cfg.kind,
        "vertices": [str(v) for v in L.H.vertices],
        "certificate": cert.as_dict(),
        "report": report.as_dict(),
    }
    if args.dump_matrix:
        result["matrix"] = [[float(x) for x in row] for row in matrix]
        _dump_matrix(args.dump_matrix, matrix)
    if args.csv:
        _write_csv(args.csv, report.structured, report.oracle)
    _emit(cfg, "spectrum", digests, result)
    if not report.accepted:
        raise VerificationFailure("structured spectrum does not match the dense oracle within tolerance")
    return result


def cmd_verify(args, cfg: RunConfig) -> dict:
    digests: list = []
    L = _load(args.input, cfg, digests)
    H, w = L.H, L.weights
    P = compute_units(H)
    checks = {}
    ok = True
    kinds = ["A", "L", "Q"] if cfg.kind in ("all", None) else [cfg.kind]
    for k in kinds:
        if k == "P":
            cert, rep = walk_spectrum(H, w, cfg.tolerances)
            checks["P"] = {"spectrum": rep.as_dict()}
            ok &= rep.accepted
            continue
        T = build_operator(H, w, k)
        comp = check_compatibility(T, P.classes())
        cert, rep = assemble_full_spectrum(H, w, k, P, cfg.tolerances)
        checks[k] = {
            "compatibility_max_violation": comp.max_violation,
            "spectrum": {key: val for key, val in rep.as_dict().items() if key in ("max_pair_gap", "max_residual", "rank", "accepted")},
        }
        ok &= comp.ok(cfg.tolerances.identity) and rep.accepted
    result = {"preset": w.preset, "checks": checks, "passed": bool(ok)}
    _emit(cfg, "verify", digests, result)
    if not ok:
        raise VerificationFailure("verification failed")
    return result


def cmd_classify(args, cfg: RunConfig) -> dict:
    digests: list = []
    L = _load(args.input, cfg, digests)
    U = [s.strip() for s in args.set.split(",") if s.strip()]
    alpha = AlphaWeighting.by_tag(args.alpha, L.H, L.weights)
    verdict = classify_set(L.H, U, alpha, compute_units(L.H), cfg.tolerances)
    result = {"set": U, "alpha": args.alpha, "verdict": verdict.as_dict()}
    _emit(cfg, "classify", digests, result)
    return result


def cmd_generate(args, cfg: RunConfig) -> dict:
    if args.family == "hyperflower":
        H, _ = make_hyperflower(HyperflowerSpec(args.l, args.r, args.t, args.m))
    elif args.family == "multilayer":
        H, _ = make_multilayer(MultiLayerSpec(args.k))
    else:
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
        H = random_hypergraph(rng, n_max=args.n_max, m_max=args.m_max)
    text = serialize_hypergraph(H)
    if cfg.output:
        _write_atomic(cfg.output, text)
    else:
        sys.stdout.write(text)
    return {"n_vertices": H.n, "n_edges": H.m}


def cmd_walk(args, cfg: RunConfig) -> dict:
    digests: list = []
    L = _load(args.input, cfg, digests)
    model = WalkModel.build(L.H, L.weights)
    if args.action == "hitting":
        _need(args, "source", "target")
        prof = hitting_distribution(model, args.source, args.target, args.tmax)
        result = {"hitting": prof.as_dict()}
    elif args.action == "spectrum":
        cert, report = walk_spectrum(L.H, L.weights, cfg.tolerances)
        result = {"certificate": cert.as_dict(), "report": report.as_dict()}
    else:
        _need(args, "source")
        result = {"trajectory": [str(v) for v in simulate(model, args.source, args.steps, cfg.seed)]}
        if args.target is not None:
            freq = empirical_hitting(model, args.source, args.target, args.tmax, args.runs, cfg.seed)
            exact = hitting_distribution(model, args.source, args.target, args.tmax).probabilities
            result["empirical"] = {"runs": args.runs, "frequencies": [float(x) for x in freq], "exact": [float(x) for x in exact]}
    _emit(cfg, f"walk {args.action}", digests, result)
    return result


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise HypergraphError("missing required option(s): " + ", ".join("--" + ("from" if n == "source" else "to" if n == "target" else n) for n in missing))


def cmd_distance(args, cfg: RunConfig) -> dict:
    digests: list = []
    L = _load(args.input, cfg, digests)
    P = compute_units(L.H)
    rep = distance_report(L.H, P, unit_graph(L.H, P))
    result = rep.as_dict(L.H)
    if args.report:
        _write_atomic(args.report, canonical_json(result))
    _emit(cfg, "distance", digests, result)
    return result


def cmd_color(args, cfg: RunConfig) -> dict:
    digests: list = []
    L = _load(args.input, cfg, digests)
    H = L.H
    result: dict = {}
    if args.bounds:
        result["bounds"] = bound_report(H, strict=True).as_dict()
    C = contraction_of(H)
    greedy = greedy_coloring(C.quotient)
    lifted = lift_coloring(H, C, greedy, strict=args.bounds)
    result["chi_exact"] = chromatic_exact(H)
    result["lifted_coloring"] = {str(k): v for k, v in lifted.assignment.items()}
    result["colors_used"] = lifted.num_colors
    _emit(cfg, "color", digests, result)
    return result


def cmd_cospectral(args, cfg: RunConfig) -> dict:
    digests: list = []
    A = _load(args.first, cfg, digests)
    B = _load(args.second, cfg, digests)
    v = cospectral_sufficient(A.H, A.weights, B.H, B.weights, cfg.tolerances)
    result = {"cospectral": v.cospectral, "reason": v.reason, "quotient_gap": v.quotient_gap, "full_gap": v.full_gap}
    _emit(cfg, "cospectral", digests, result)
    return result


# --- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=["R", "B", "N"], help="weight preset (default: embedded weights, else R)")
    common.add_argument("--weights", metavar="FILE", help="JSON with vertex_weights and/or edge_weights maps")
    common.add_argument("--kind", choices=["A", "L", "Q", "P"], default=None, help="operator")
    common.add_argument("--tol", type=float, default=None, help="pair-gap and membership tolerance")
    common.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    common.add_argument("-o", "--output", metavar="FILE", help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="unit-spectra", description="Units, twin units and certified spectra of hypergraphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("units", parents=[common], help="units, twin classes and both contractions")
    s.add_argument("input")
    s.set_defaults(func=cmd_units)

    s = sub.add_parser("contract", parents=[common], help="unit or twin contraction as a hypergraph")
    s.add_argument("input")
    s.add_argument("--to", choices=["unit", "twin"], default="twin")
    s.set_defaults(func=cmd_contract)

    s = sub.add_parser("spectrum", parents=[common], help="structured spectrum with oracle comparison")
    s.add_argument("input")
    s.add_argument("--dump-matrix", metavar="FILE", help="also write the operator as row-major text")
    s.add_argument("--csv", metavar="FILE", help="plot-ready table of structured and oracle eigenvalues")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("verify", parents=[common], help="compatibility and completeness checks for A, L, Q")
    s.add_argument("input")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("classify", parents=[common], help="regular / symmetric / co-regular verdict for a vertex set")
    s.add_argument("input")
    s.add_argument("--set", required=True, help="comma separated vertex labels")
    s.add_argument("--alpha", default="sigma", choices=["sigma", "rho", "eta", "constant_one"])
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("generate", parents=[common], help="write a family member as .hg.json")
    s.add_argument("family", choices=["hyperflower", "multilayer", "random"])
    s.add_argument("--l", type=int, default=2)
    s.add_argument("--r", type=int, default=2)
    s.add_argument("--t", type=int, default=2)
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--n-max", type=int, default=12)
    s.add_argument("--m-max", type=int, default=8)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("walk", parents=[common], help="random walk: hitting, spectrum, simulate")
    s.add_argument("action", choices=["hitting", "spectrum", "simulate"])
    s.add_argument("input")
    s.add_argument("--from", dest="source")
    s.add_argument("--to", dest="target")
    s.add_argument("--tmax", type=int, default=50)
    s.add_argument("--steps", type=int, default=20)
    s.add_argument("--runs", type=int, default=100_000)
    s.set_defaults(func=cmd_walk)

    s = sub.add_parser("distance", parents=[common], help="unit distance report")
    s.add_argument("input")
    s.add_argument("--report", metavar="FILE", help="write the bare distance report here as well")
    s.set_defaults(func=cmd_distance)

    s = sub.add_parser("color", parents=[common], help="colourings and bounds via the twin contraction")
    s.add_argument("input")
    s.add_argument("--bounds", action="store_true", help="compute and assert the bound chain")
    s.set_defaults(func=cmd_color)

    s = sub.add_parser("cospectral", parents=[common], help="sufficient co-spectrality test for Q")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_cospectral)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    tol = DEFAULT
    if args.tol is not None:
        if not args.tol > 0:
            print("error: --tol must be positive", file=sys.stderr)
            return 1
        tol = replace(DEFAULT, pair_gap=args.tol, membership=args.tol)
    if not (0 <= args.seed < 2**64):
        print("error: --seed must fit in 64 bits", file=sys.stderr)
        return 1
    kind = args.kind or ("all" if args.command == "verify" else "Q")
    cfg = RunConfig(
        inputs=[], preset=args.preset, weights_path=args.weights, kind=kind, tolerances=tol, seed=args.seed, output=args.output
    )
    try:
        args.func(args, cfg)
    except HypothesisError as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        return 2
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2
    except (HypergraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
