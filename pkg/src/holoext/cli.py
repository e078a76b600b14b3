"""Command-line interface: ``holoext <group> <command> [flags]``.

Exit codes: 0 success, 1 search failure, 2 rejected input (including
malformed JSON), 3 internal-consistency error, 64 unknown subcommand.
Reports are JSON (or CSV with ``--format csv``) and carry the tool version,
the seed and a SHA-256 digest of the input, so that a run can be replayed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, domains, extension_lab as lab, hyperbolic as hyp, operator_model as om, pick, selftest
from .boundary import Circle, Quadric, SupEstimator, Torus
from .errors import ConsistencyError, HoloextError, InputError, RangeViolationError, SearchFailure
from .pick import _complex_array
from .polys import Poly, VectorPolyMap

EXIT_OK, EXIT_SEARCH, EXIT_INPUT, EXIT_CONSISTENCY, EXIT_USAGE = 0, 1, 2, 3, 64

SPEC_ALIASES = {"parabola": "parabola_curve"}


class UsageError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse with exceptions instead of ``sys.exit``; unknown commands map to 64."""

    def error(self, message):
        command_args = ("group", "cmd", "which")
        about_command = any(f"argument {a}" in message or message.endswith(f"required: {a}")
                            for a in command_args)
        code = EXIT_USAGE if about_command else EXIT_INPUT
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}", code)


def thread_count():
    """Worker cap from HOLOEXT_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("HOLOEXT_THREADS", "1")))
    except ValueError:
        raise InputError("HOLOEXT_THREADS must be an integer") from None


# ---------------------------------------------------------------- input / output


def load_input(path):
    """Parse a JSON file; returns (object, sha256 digest of its bytes)."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(raw.decode("utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except UnicodeDecodeError:
        raise InputError(f"{path}: not UTF-8 text") from None
    return obj, "sha256:" + hashlib.sha256(raw).hexdigest()


def _plain(obj):
    """Convert numpy scalars, arrays and complex numbers into JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(obj.real), _plain(obj.imag)]
    return obj


def _points(obj, dim=None):
    arr = _complex_array(obj)
    if arr.ndim == 1:
        arr = arr[None, :] if dim is not None and arr.size == dim else arr[:, None]
    return arr


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([json.dumps(_plain(v)) if isinstance(v, (list, dict, np.ndarray, complex)) else _plain(v)
                    for v in row])
    return buf.getvalue()


def _flatten(prefix, obj, out):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    else:
        out.append((prefix, obj))


def emit(args, report, table=None):
    """Write the report as JSON, or as CSV (the table if there is one, else key/value pairs)."""
    report = _plain(report)
    if args.format == "csv":
        if table is None:
            pairs = []
            _flatten("", report, pairs)
            text = _csv_text(["key", "value"], pairs)
        else:
            text = _csv_text(*table)
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def envelope(args, command, digest, result, parameters=None):
    return {
        "tool": "holoext",
        "version": __version__,
        "command": command,
        "seed": getattr(args, "seed", 0),
        "input_digest": digest,
        "parameters": parameters or {},
        "result": result,
    }


def _param_digest(params):
    text = json.dumps(_plain(params), sort_keys=True)
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def plot_sweep(path, xs, ys, xlabel, ylabel, title):
    """Deterministic one-dimensional sweep plot written as SVG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "holoext"
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(xs, ys, marker="o")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# ---------------------------------------------------------------- commands


def cmd_pick_solve(args):
    obj, digest = load_input(args.input)
    problem = pick.PickProblem.from_json(obj)
    g = problem.gram
    nodes = g.nodes[:, 0] if g.kernel_id == "szego_disk" else g.nodes
    rep = pick.solve_minimal_norm(g.kernel_id, nodes, problem.targets, args.tol)
    result = rep.to_dict()
    result["psd_at_unit_norm"] = pick.is_psd(pick.pick_matrix(problem))
    if args.plot:
        scales = np.geomspace(0.25, 4.0, 9)
        ts = [pick.minimal_sup_norm(g.kernel_id, nodes, c * problem.targets, args.tol) for c in scales]
        plot_sweep(args.plot, scales, ts, "target scale", "minimal norm t*", "t* versus target scale")
    table = (["probe", "t", "min_eigenvalue"], [(i, t, e) for i, (t, e) in enumerate(rep.trace)])
    emit(args, envelope(args, "pick solve", digest, result, {"tol": args.tol}), table)
    return EXIT_OK


def _kernel_patches(kernel_id, dim):
    if kernel_id == "szego_disk":
        return [Circle(lambda th: np.exp(1j * th)[:, None])]
    if kernel_id == "szego_polydisk_product":
        return [Torus(dim)]
    return [Quadric(np.ones(dim), np.ones(dim))]


def _interpolant(nodes, targets):
    """Lagrange interpolant of one variable through (nodes, targets)."""
    lam = nodes[:, 0]
    V = np.vander(lam, increasing=True)
    coef = np.linalg.solve(V, targets)
    return Poly({(k,): c for k, c in enumerate(coef)}, 1)


def cmd_model_check(args):
    obj, digest = load_input(args.input)
    try:
        kernel = obj["kernel"]
        model = om.build_model(kernel, _points(obj["nodes"]))
        if "poly" in obj:
            p = Poly.from_json(obj["poly"])
        elif "targets" in obj and model.dim_d == 1:
            p = _interpolant(model.nodes, _complex_array(obj["targets"]).reshape(-1))
        else:
            raise InputError("model check needs 'poly' (or 'targets' for one-variable kernels)")
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed model input: {exc}") from None
    values = om.node_values(model, p)
    sup_v = float(obj.get("sup_on_V", np.max(np.abs(values))))
    if "sup_on_Omega" in obj:
        sup_o = float(obj["sup_on_Omega"])
    else:
        sup_o, _ = SupEstimator(_kernel_patches(kernel, model.dim_d)).sup(p)
    vn = om.von_neumann_check(model, p, sup_v, sup_o)
    a = vn.witness
    defect = om.defect_form(model, p, a)
    T = [model.coordinate(r) for r in range(model.dim_d)]
    comm = max((om.operator_norm(om.GramOperator(T[r] @ T[s] - T[s] @ T[r], model.gram))
                for r in range(len(T)) for s in range(r + 1, len(T))), default=0.0)
    result = {
        "model": model.to_json(),
        "poly": p.to_json(),
        "node_values": values,
        "sup_on_V": sup_v,
        "sup_on_Omega": sup_o,
        "von_neumann": vn.to_dict(),
        "defect_at_witness": defect,
        "subordinate": om.subordination_check(model, p, values),
        "commutator_norm": comm,
        "minimal_sup_norm": pick.minimal_sup_norm(kernel, model.nodes[:, 0] if kernel == "szego_disk"
                                                  else model.nodes, values),
    }
    emit(args, envelope(args, "model check", digest, result))
    return EXIT_OK


def _read_datum(obj):
    try:
        dom = domains.DomainSpec.from_json(obj["domain"])
        lam = _points(obj["lambda"], dom.dim)[0]
        mu = _points(obj["mu"], dom.dim)[0]
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"malformed datum input: {exc}") from None
    return dom, hyp.Datum(lam, mu, dom)


def cmd_extremal(args):
    obj, digest = load_input(args.input)
    dom, datum = _read_datum(obj)
    if args.which == "koba":
        if dom.kind != "ball":
            raise InputError("closed-form Kobayashi extremals are available for the ball only")
        result = hyp.kobayashi_ball(datum).to_dict()
        params = {}
    else:
        result = hyp.caratheodory_search(dom, datum, args.degree, args.budget, args.seed).to_dict()
        params = {"degree": args.degree, "budget": args.budget}
    result["domain"] = dom.to_json()
    result["datum"] = datum.to_json()
    emit(args, envelope(args, f"extremal {args.which}", digest, result, params))
    return EXIT_OK


def cmd_domain_slc(args):
    obj, digest = load_input(args.input)
    try:
        dom = domains.DomainSpec.from_json(obj["domain"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed domain input: {exc}") from None
    if "points" in obj:
        pts = _points(obj["points"], dom.dim)
    else:
        pts = domains.boundary_sample(dom, args.count, args.seed)
    rows = []
    for i, pt in enumerate(pts):
        rep = domains.check_strong_linear_convexity(dom, pt, args.samples, args.seed + i, args.tol)
        rows.append((i, pt, rep.worst_margin, rep.passed, rep.worst_vector))
    worst = min(rows, key=lambda r: r[2])
    result = {
        "domain": dom.to_json(),
        "points_tested": len(rows),
        "pass": all(r[3] for r in rows),
        "worst_margin": worst[2],
        "worst_point": worst[1],
        "worst_vector": worst[4],
        "margins": [r[2] for r in rows],
    }
    table = (["point_id", "point", "worst_margin", "pass", "worst_vector"], rows)
    params = {"samples": args.samples, "tol": args.tol, "count": len(rows)}
    emit(args, envelope(args, "domain slc", digest, result, params), table)
    return EXIT_OK


def _variety_setup(args):
    """Variety spec, host domain and input digest from --input and/or --spec flags."""
    obj, digest = ({}, None)
    if args.input:
        obj, digest = load_input(args.input)
    if "spec" in obj:
        spec = lab.VarietySpec.from_json(obj["spec"])
    elif args.spec:
        kind = SPEC_ALIASES.get(args.spec, args.spec)
        kw = {}
        if kind == "ball_slice":
            kw["k"] = args.k
        if kind in ("sym_D", "sym_R_union_D"):
            kw["beta"] = complex(args.beta)
        spec = lab.VarietySpec(kind, args.dim, **kw)
    else:
        raise InputError("give a variety with --spec or an input file with a 'spec' entry")
    dom = domains.DomainSpec.from_json(obj["domain"]) if "domain" in obj else spec.host_domain()
    if digest is None:
        digest = _param_digest({"spec": spec.to_json(), "domain": dom.to_json()})
    return obj, spec, dom, digest


def cmd_variety_geodesic(args):
    _, spec, dom, digest = _variety_setup(args)
    sample = lab.sample_variety(spec, args.count, args.seed)
    rep = lab.totally_geodesic_test(dom, sample, args.pairs, args.seed, args.tol)
    result = {"spec": spec.to_json(), **rep.to_dict()}
    params = {"count": args.count, "pairs": args.pairs, "tol": args.tol}
    emit(args, envelope(args, "variety geodesic", digest, result, params))
    return EXIT_OK


def cmd_variety_certificate(args):
    obj, spec, dom, digest = _variety_setup(args)
    sample = lab.sample_variety(spec, args.count, args.seed)
    first = tuple(obj.get("datum", args.datum))
    n = len(sample.points)
    if len(first) != 2 or not all(0 <= int(i) < n for i in first):
        raise InputError(f"datum indices must be two integers in [0, {n})")
    pairs = [tuple(int(i) for i in first)]
    rng = np.random.default_rng(args.seed)
    while len(pairs) < args.pairs:
        i, j = rng.choice(n, size=2, replace=False)
        pairs.append((int(i), int(j)))

    def run(ij):
        i, j = ij
        datum = hyp.Datum(sample.points[i], sample.points[j], dom)
        return lab.certificate_search(dom, sample, datum, args.degree, args.budget, args.seed)

    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        certs = list(pool.map(run, pairs))
    cert = certs[0]
    result = {"spec": spec.to_json(), "datum_indices": list(pairs[0]), **cert.to_dict()}
    if len(certs) > 1:
        result["sweep"] = [{"pair_id": k, "indices": list(ij), "baseline": c.baseline,
                            "achieved": c.achieved, "margin": c.margin} for k, (ij, c) in enumerate(zip(pairs, certs))]
    if args.plot:
        degs = [d for d, _ in cert.per_degree]
        plot_sweep(args.plot, degs, [v - cert.baseline for _, v in cert.per_degree],
                   "degree", "margin", "certificate margin versus degree")
    table = (["pair_id", "baseline", "achieved", "margin"],
             [(k, c.baseline, c.achieved, c.margin) for k, c in enumerate(certs)])
    params = {"degree": args.degree, "budget": args.budget, "count": args.count, "pairs": len(pairs)}
    emit(args, envelope(args, "variety certificate", digest, result, params), table)
    return EXIT_OK


def cmd_variety_retract(args):
    obj, spec, dom, digest = _variety_setup(args)
    if "map" in obj:
        try:
            r = VectorPolyMap.from_json(obj["map"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed map: {exc}") from None
    elif spec.kind == "line":
        r = lab.lempert_retract(spec.unit_direction)
    else:
        raise InputError("retract check needs a 'map' entry in the input file")
    sample = lab.sample_variety(spec, args.count, args.seed)
    rep = lab.retract_check(r, dom, sample, args.probes, args.seed, args.tol)
    result = {"spec": spec.to_json(), "map": r.to_json(), **rep.to_dict()}
    params = {"count": args.count, "probes": args.probes, "tol": args.tol}
    emit(args, envelope(args, "variety retract", digest, result, params))
    return EXIT_OK


def cmd_selftest(args):
    results = selftest.run_all()
    ok = all(r["pass"] for r in results)
    table = (["check", "pass", "detail"], [(r["check"], r["pass"], r["detail"]) for r in results])
    emit(args, envelope(args, "selftest", _param_digest({}), {"pass": ok, "checks": results}), table)
    return EXIT_OK if ok else EXIT_CONSISTENCY


# ---------------------------------------------------------------- parser


def _common(p, seed=True, tol=None):
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    if seed:
        p.add_argument("--seed", type=int, default=0)
    if tol is not None:
        p.add_argument("--tol", type=float, default=tol)


def _search_flags(p):
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--budget", type=int, default=1000)


def _variety_flags(p):
    p.add_argument("--input", help="JSON with 'spec' (and optionally 'domain', 'datum', 'map')")
    p.add_argument("--spec", help="variety name: ball_slice, parabola, sym_R, sym_D, sym_R_union_D, line")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--k", type=int, default=1, help="slice dimension for ball_slice")
    p.add_argument("--beta", type=float, default=0.0, help="real beta for sym_D and sym_R_union_D")
    p.add_argument("--count", type=int, default=40, help="number of sample points")


def build_parser():
    parser = _Parser(prog="holoext", description="Extension-property laboratory.")
    parser.add_argument("--version", action="version", version=f"holoext {__version__}")
    groups = parser.add_subparsers(dest="group", metavar="group", required=True, parser_class=_Parser)

    g = groups.add_parser("pick", help="Pick problems").add_subparsers(dest="cmd", metavar="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("solve", help="minimal interpolation norm by bisection")
    p.add_argument("--input", required=True)
    p.add_argument("--plot", help="SVG of t* versus target scale")
    _common(p, tol=1e-10)
    p.set_defaults(func=cmd_pick_solve)

    g = groups.add_parser("model", help="operator model").add_subparsers(dest="cmd", metavar="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("check", help="von Neumann, subordination and defect witness")
    p.add_argument("--input", required=True)
    _common(p)
    p.set_defaults(func=cmd_model_check)

    g = groups.add_parser("extremal", help="extremal maps").add_subparsers(dest="which", metavar="which", required=True,
                                                                          parser_class=_Parser)
    for which, text in (("cara", "Caratheodory lower bound by search"), ("koba", "closed-form ball geodesic")):
        p = g.add_parser(which, help=text)
        p.add_argument("--input", required=True)
        _search_flags(p)
        _common(p)
        p.set_defaults(func=cmd_extremal)

    g = groups.add_parser("domain", help="domain tests").add_subparsers(dest="cmd", metavar="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("slc", help="strong linear convexity sweep")
    p.add_argument("--input", required=True)
    p.add_argument("--count", type=int, default=100, help="boundary points when the input lists none")
    p.add_argument("--samples", type=int, default=256, help="random tangent vectors per point")
    _common(p, tol=1e-9)
    p.set_defaults(func=cmd_domain_slc)

    g = groups.add_parser("variety", help="variety experiments").add_subparsers(dest="cmd", metavar="cmd", required=True,
                                                                               parser_class=_Parser)
    p = g.add_parser("geodesic", help="totally geodesic test (ball)")
    _variety_flags(p)
    p.add_argument("--pairs", type=int, default=20)
    _common(p, tol=1e-9)
    p.set_defaults(func=cmd_variety_geodesic)
    p = g.add_parser("certificate", help="extension-failure certificate search")
    _variety_flags(p)
    _search_flags(p)
    p.add_argument("--datum", type=int, nargs=2, default=(0, 1), metavar=("I", "J"))
    p.add_argument("--pairs", type=int, default=1, help="pairs in the sweep table (first is --datum)")
    p.add_argument("--plot", help="SVG of margin versus degree")
    _common(p)
    p.set_defaults(func=cmd_variety_certificate)
    p = g.add_parser("retract", help="retraction checks")
    _variety_flags(p)
    p.add_argument("--probes", type=int, default=200)
    _common(p, tol=1e-9)
    p.set_defaults(func=cmd_variety_retract)

    p = groups.add_parser("selftest", help="run the built-in invariant suite")
    _common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def _validate(args):
    if getattr(args, "tol", 1.0) <= 0:
        raise InputError("--tol must be positive")
    if getattr(args, "budget", 1) < 1:
        raise InputError("--budget must be at least 1")
    if getattr(args, "degree", 1) < 1:
        raise InputError("--degree must be at least 1")


def run(argv):
    """Run the CLI on ``argv`` and return the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return exc.code
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    try:
        _validate(args)
        return args.func(args)
    except (InputError, RangeViolationError) as exc:
        print(f"holoext: rejected input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        print(f"holoext: internal consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except SearchFailure as exc:
        print(f"holoext: search failed: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    except HoloextError as exc:
        print(f"holoext: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None):
    return run(sys.argv[1:] if argv is None else argv)
