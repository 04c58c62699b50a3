"""Command-line front end.

Exit codes: 0 success, 1 semantic failure (invalid state, unmet condition,
failed check), 2 I/O or parse failure.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import _json
from .completion import complete_family
from .decompose import (
    Protocol,
    decompose_laurent,
    decompose_linear,
    decompose_one_step,
    laurent_degree,
)
from .errors import MQSPError
from .poly import DEFAULT_VALIDATION_TOL, LaurentPolynomial, PolynomialState, is_valid_state
from .protocols import (
    ArcSpec,
    GaussianWindowSpec,
    build_gaussian_window_state,
    build_phase_estimation_protocol,
    build_phase_location,
    discarded_norm,
    windowed_distribution,
)
from .protocols.reports import BuildReport
from .simulate import (
    grid_report_csv,
    outcome_distribution,
    protocol_to_state,
    run_discrete_log,
    run_phase_location,
    sample_counts,
)

EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2


class InputError(Exception):
    """Unreadable or malformed input file (exit code 2)."""


def _number(text):
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _integer(text):
    # accept "1e3" as well as "1000"
    v = _number(text)
    if not v.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def _load(path, what):
    try:
        return _json.read_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {what} from {path}: {exc}") from exc


def _load_state(path):
    obj = _load(path, "state")
    try:
        return PolynomialState.from_dict(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed state file {path}: {exc}") from exc


def _load_protocol(path):
    obj = _load(path, "protocol")
    try:
        return Protocol.from_dict(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed protocol file {path}: {exc}") from exc


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2)
    if out:
        _json.write_atomic(out, text + "\n")
    print(text)


def _state_error(p, s):
    """Max coefficient difference between the protocol's expansion and ``s``."""
    return protocol_to_state(p).max_abs_diff(s)


def cmd_validate(args):
    s = _load_state(args.path)
    rep = is_valid_state(s, args.tol)
    print(
        json.dumps(
            {
                "valid": bool(rep.valid),
                "max_deviation": rep.max_deviation,
                "worst_power": rep.worst_power,
                "degree": s.degree,
                "min_power": s.min_power,
                "dim": s.dim,
            }
        )
    )
    return EXIT_OK if rep.valid else EXIT_FAIL


def cmd_decompose(args):
    s = _load_state(args.path)
    if args.mode == "linear":
        p = decompose_linear(s, split=args.split, tol=args.tol)
    elif args.mode == "one-step":
        p = decompose_one_step(s, bits=args.bits, tol=args.tol)
    else:
        p = decompose_laurent(s, split=args.split, n_steps=laurent_degree(s), tol=args.tol)
    err = _state_error(p, s)
    obj = p.to_dict()
    if args.output:
        _json.write_json(args.output, obj)
    print(json.dumps({"mode": args.mode, "steps": p.n_steps, "dim": p.dim, "round_trip_error": err}))
    return EXIT_OK


def cmd_eval(args):
    """Expand a protocol and compare with a state file (round-trip checker)."""
    p = _load_protocol(args.protocol)
    s = _load_state(args.state)
    err = _state_error(p, s)
    ok = err <= args.max_error
    print(json.dumps({"round_trip_error": err, "ok": ok}))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_complete(args):
    obj = _load(args.path, "polynomial family")
    try:
        polys = [LaurentPolynomial.from_dict(p) for p in obj["polynomials"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed family file {args.path}: {exc}") from exc
    n = args.degree
    if n is None:
        n = max([max(-p.min_exponent, p.max_exponent) for p in polys if not p.is_zero] + [0])
    res = complete_family(polys, n, tol=args.tol)
    full = PolynomialState.from_polynomials(list(res.partials) + [res.polynomial])
    rep = is_valid_state(full, max(args.tol, 1e-8))
    out = {
        "polynomial": res.polynomial.to_dict(),
        "state": full.to_dict(),
        "report": BuildReport(res.grid_max_error, res.rescale_applied, None).to_dict(),
        "valid": bool(rep.valid),
        "max_deviation": rep.max_deviation,
    }
    if args.output:
        _json.write_json(args.output, out)
    print(json.dumps({k: out[k] for k in ("report", "valid", "max_deviation")}))
    return EXIT_OK if rep.valid else EXIT_FAIL


def _write_report(path, text):
    if path:
        _json.write_atomic(path, text)


def _dist_csv(probs, header="outcome"):
    lines = [f"{header},probability"]
    lines += [f"{i},{p!r}" for i, p in enumerate(map(float, probs))]
    return "\n".join(lines) + "\n"


def _demo_phase_est(args):
    p = build_phase_estimation_protocol(args.bits)
    probs = outcome_distribution(p, args.phase)
    best = int(np.argmax(probs))
    metrics = {
        "argmax": best,
        "max_probability": float(probs[best]),
        "probabilities": [float(v) for v in probs],
    }
    _write_report(args.report, _dist_csv(probs))
    return metrics, {"bits": args.bits, "phase": args.phase}, probs


def _demo_gaussian(args):
    spec = GaussianWindowSpec(args.n, args.sigma)
    s = build_gaussian_window_state(spec)
    p = decompose_one_step(s, tol=args.tol)
    probs = outcome_distribution(p, args.phase)
    oracle = windowed_distribution(spec, args.phase)
    best = int(np.argmax(probs))
    metrics = {
        "argmax": best,
        "max_probability": float(probs[best]),
        "oracle_max_error": float(np.max(np.abs(probs - oracle))),
        "report": BuildReport(0.0, 1.0, spec.truncation_bound).to_dict(),
        "discarded_norm": discarded_norm(spec),
    }
    _write_report(args.report, _dist_csv(probs))
    return metrics, {"n": spec.N, "sigma": spec.sigma, "phase": args.phase}, probs


def _demo_dlog(args):
    res = run_discrete_log(args.order, args.log)
    metrics = {
        "success_probability": res.success_probability,
        "expected": sum(1 for s in range(res.order) if math.gcd(s, res.order) == 1) / res.order,
        "recovered": {str(k): v for k, v in sorted(res.recovered.items()) if v > 1e-15},
    }
    if args.report:
        n = res.order
        lines = ["x,y,probability"]
        lines += [f"{x},{y},{float(res.joint[x, y])!r}" for x in range(n) for y in range(n)]
        _write_report(args.report, "\n".join(lines) + "\n")
    return metrics, {"order": args.order, "log": args.log}, res.joint.ravel()


def _demo_phase_loc(args):
    spec = ArcSpec.from_dict(_load(args.spec, "arc spec"))
    build = build_phase_location(spec, args.eps)
    p = decompose_linear(build.state, tol=1e-6, fallback=1e-6)
    inner = spec.shrunk_arcs(spec.delta / 2)
    centers = []
    for j, (a, b) in enumerate(inner):
        width = (b - a) % (2 * math.pi)
        if 0 < width < 2 * math.pi - spec.delta:
            centers.append((a + width / 2) % (2 * math.pi))
    probs = run_phase_location(build.state, spec, centers, protocol=p) if centers else np.zeros(0)
    metrics = {
        "grid_ok": bool(build.grid_ok),
        "worst_inside": build.worst_inside,
        "worst_outside": build.worst_outside,
        "center_probabilities": [float(v) for v in probs],
        "sign_degree": build.n,
        "steps": p.n_steps,
        "report": build.report().to_dict(),
    }
    if args.report:
        thetas = 2 * math.pi * np.arange(256) / 256
        _write_report(args.report, grid_report_csv(p, thetas, build.state))
    return metrics, {"spec": spec.to_dict(), "eps": args.eps}, None


DEMOS = {
    "phase-est": _demo_phase_est,
    "phase-loc": _demo_phase_loc,
    "gaussian": _demo_gaussian,
    "dlog": _demo_dlog,
}


def cmd_demo(args):
    metrics, params, probs = DEMOS[args.name](args)
    if args.shots and probs is not None:
        metrics["sample_counts"] = sample_counts(probs, args.shots, args.seed).tolist()
    summary = {"demo": args.name, "metrics": metrics, "params": params}
    _emit(summary, args.summary)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="mqsp", description="Multi-qubit QSP synthesis and demos.")
    ap.add_argument("--tol", type=_number, default=DEFAULT_VALIDATION_TOL, help="validation tolerance")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check that a state file is normalized")
    v.add_argument("path")
    v.set_defaults(func=cmd_validate)

    d = sub.add_parser("decompose", help="synthesize a protocol for a state file")
    d.add_argument("path")
    d.add_argument("--mode", choices=("linear", "one-step", "laurent"), default="linear")
    d.add_argument("--split", type=_integer, default=None)
    d.add_argument("--bits", type=_integer, default=None)
    d.add_argument("-o", "--output", default=None)
    d.set_defaults(func=cmd_decompose)

    c = sub.add_parser("complete", help="complete a partial polynomial family")
    c.add_argument("path")
    c.add_argument("--degree", type=_integer, default=None)
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(func=cmd_complete)

    e = sub.add_parser("eval")  # hidden round-trip checker
    e.add_argument("protocol")
    e.add_argument("state")
    e.add_argument("--max-error", type=_number, default=1e-8)
    e.set_defaults(func=cmd_eval)

    m = sub.add_parser("demo", help="run one of the worked examples")
    m.add_argument("name", choices=sorted(DEMOS))
    m.add_argument("--bits", type=_integer, default=3)
    m.add_argument("--phase", type=_number, default=0.375)
    m.add_argument("--spec", default=None)
    m.add_argument("--eps", type=_number, default=0.05)
    m.add_argument("--n", type=_integer, default=64)
    m.add_argument("--sigma", type=_number, default=0.05)
    m.add_argument("--order", type=_integer, default=5)
    m.add_argument("--log", type=_integer, default=3)
    m.add_argument("--report", default=None, help="CSV output path")
    m.add_argument("--summary", default=None, help="JSON summary output path")
    m.add_argument("--shots", type=_integer, default=0)
    m.add_argument("--seed", type=_integer, default=None)
    m.set_defaults(func=cmd_demo)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "demo" and args.name == "phase-loc" and not args.spec:
        ap.error("demo phase-loc needs --spec")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (MQSPError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
