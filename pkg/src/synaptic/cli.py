"""Command-line interface: ``synaptic <subcommand> ...``.

Exit codes: 0 success, 1 law failure (or a numerical diagnostic), 2 input or
domain error.
"""
import argparse
import json
import sys

import numpy as np

from . import serialize as ser
from .audit import INJECTIONS, LAWS, AuditConfig, run_axiom_audit, run_law
from .eigen import BACKEND
from .errors import DiagnosticError, DomainError, InputError, SynapticError
from .funcalc import TAG_RULES, func_calc_eigen, func_calc_poly, func_calc_rs, parse_function
from .generators import random_fn
from .loomis_sikorski import QuotientMorphism, apply_h, audit_morphism, is_regular
from .matrix_model import (
    DEFAULT_TOL,
    Projection,
    maxabs,
    order_unit_norm,
    spectral_resolution,
    spectrum,
)
from .projection_lattice import complement, join, mackey_compatible, meet, orthogonal, proj_leq
from .states import distribution, evaluate, expectation, measure_apply, observable_of

EXIT_OK, EXIT_LAW, EXIT_INPUT = 0, 1, 2


def _read(path):
    if path == "-":
        try:
            return json.load(sys.stdin)
        except json.JSONDecodeError as exc:
            raise InputError(f"stdin: invalid JSON ({exc.msg})") from None
    return ser.load_json(path)


def _json_arg(text):
    """Inline JSON, or ``@path`` to read it from a file."""
    if text.startswith("@"):
        return ser.load_json(text[1:])
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid inline JSON ({exc.msg})") from None


def _matrix(args, path=None):
    return ser.matrix_from_json(_read(path or args.matrix), args.tol)


# ------------------------------------------------------------ commands


def cmd_spectrum(args):
    a = _matrix(args)
    spec = spectrum(a)
    res = spectral_resolution(a)
    return {
        "command": "spectrum",
        "dim": a.dim,
        "spectrum": list(spec.points),
        "multiplicities": list(spec.multiplicities),
        "norm": order_unit_norm(a),
        "lower_bound": res.lower_bound,
        "upper_bound": res.upper_bound,
        "breakpoints": list(res.breakpoints),
        "reconstruction_residual": maxabs(a.entries - res.reconstruct().entries),
    }, EXIT_OK


def cmd_resolution(args):
    a = _matrix(args)
    res = spectral_resolution(a)
    doc = {
        "command": "resolution",
        "lower_bound": res.lower_bound,
        "upper_bound": res.upper_bound,
        "steps": [{"lambda": lam, "projection": ser.matrix_to_json(p)} for lam, p in zip(res.breakpoints, res.projections)],
    }
    if args.at:
        doc["values"] = [{"lambda": lam, "projection": ser.matrix_to_json(res.at(lam))} for lam in args.at]
    return doc, EXIT_OK


def cmd_funcalc(args):
    a = _matrix(args)
    f = parse_function(args.function)
    eig = func_calc_eigen(a, f)
    rs = func_calc_rs(a, f, args.mesh, args.tags)
    poly = func_calc_poly(a, f, args.degree, args.poly_mode)
    es = a.eigensystem()
    lip = f.lipschitz_on(float(es.eigenvalues[0]) - args.mesh, float(es.eigenvalues[-1]))
    norms = {
        "eigen_vs_rs": order_unit_norm(eig - rs),
        "eigen_vs_poly": order_unit_norm(eig - poly),
        "rs_vs_poly": order_unit_norm(rs - poly),
    }
    doc = {
        "command": "funcalc",
        "function": f.name,
        "mesh": args.mesh,
        "degree": args.degree,
        "result": ser.matrix_to_json(eig),
        "agreement": norms,
        "rs_bound": None if lip is None else lip * args.mesh,
    }
    status = EXIT_OK
    if lip is not None and norms["eigen_vs_rs"] > lip * args.mesh * (1 + 1e-9) + 10 * a.tol:
        doc["violation"] = "Riemann-Stieltjes sum exceeds the Lipschitz bound"
        status = EXIT_LAW
    return doc, status


def _parse_set(args):
    if args.set is not None:
        return ser.borel_from_json(_json_arg(args.set))
    return ser.borel_from_json({"intervals": args.interval or [], "points": args.point or []})


def cmd_observable(args):
    a = _matrix(args)
    xi = observable_of(a)
    d = _parse_set(args)
    return {
        "command": "observable",
        "set": ser.borel_to_json(d),
        "spectrum": list(xi.support.points),
        "projection": ser.matrix_to_json(measure_apply(xi, d)),
    }, EXIT_OK


def cmd_expect(args):
    a = _matrix(args)
    rho = ser.state_from_json(_read(args.state))
    if rho.kind != "trace":
        raise InputError("expect needs a trace-form state for a matrix")
    e = expectation(rho, a)
    v = evaluate(rho, a)
    return {
        "command": "expect",
        "expectation": e,
        "evaluate": v,
        "gap": abs(e - v),
        "distribution": [[lam, pr] for lam, pr in distribution(rho, observable_of(a))],
    }, EXIT_OK


def cmd_ls_audit(args):
    doc = _read(args.ground)
    ground = ser.ground_from_json(doc["ground"] if "ground" in doc else doc)
    m = QuotientMorphism.over(ground)
    if args.functions:
        fns = [ser.labelled_fn_from_json(ground, f) for f in _read(args.functions)]
        if len(fns) % 2:
            fns.append(fns[0])
        pairs = list(zip(fns[::2], fns[1::2]))
    else:
        rng = np.random.default_rng(args.seed)
        pairs = [(random_fn(rng, ground.space), random_fn(rng, ground.space)) for _ in range(args.cases)]
    laws = audit_morphism(m, pairs)
    samples = []
    for f, _ in pairs[:3]:
        samples.append({"f": f.as_dict(), "h(f)": apply_h(m, f).as_dict(), "regular": is_regular(m, f)})
    report = {
        "command": "ls-audit",
        "ground": ser.ground_to_json(ground),
        "pairs": len(pairs),
        "laws": {k: {"passed": v[0], "failed": v[1], "witness": v[2]} for k, v in sorted(laws.items())},
        "samples": samples,
    }
    failed = [k for k, v in laws.items() if v[1]]
    report["status"] = "fail" if failed else "pass"
    return report, EXIT_LAW if failed else EXIT_OK


def cmd_lattice(args):
    p = ser.projection_from_json(_read(args.p), args.tol)
    q = ser.projection_from_json(_read(args.q), args.tol)
    if p.dim != q.dim:
        raise InputError(f"dimension mismatch: {p.dim} vs {q.dim}")
    return {
        "command": "lattice",
        "meet": ser.matrix_to_json(meet(p, q)),
        "join": ser.matrix_to_json(join(p, q)),
        "complement_p": ser.matrix_to_json(complement(p)),
        "complement_q": ser.matrix_to_json(complement(q)),
        "p_leq_q": proj_leq(p, q),
        "orthogonal": orthogonal(p, q),
        "compatible": mackey_compatible(p, q),
    }, EXIT_OK


def _write_witnesses(path, report):
    wit = [w for law in report["laws"].values() for w in law["witnesses"]]
    with open(path, "w") as fh:
        fh.write(ser.dumps({"config": report["config"], "witnesses": wit}) + "\n")


def cmd_axiom_audit(args):
    if args.replay:
        data = _read(args.replay)
        out = []
        for w in data.get("witnesses", []):
            if w.get("law") not in LAWS:
                continue
            cfg = AuditConfig(**{**data["config"], "cases": 1})
            ok, detail = run_law(w["law"], cfg, w["case"])
            out.append({"law": w["law"], "case": w["case"], "passed": ok, "detail": detail})
        failed = any(not r["passed"] for r in out)
        return {"command": "axiom-audit", "replay": out, "status": "fail" if failed else "pass"}, (
            EXIT_LAW if failed else EXIT_OK
        )
    cfg = AuditConfig(seed=args.seed, dim_max=args.dim_max, cases=args.cases, tol=args.tol, inject=args.inject)
    report = run_axiom_audit(cfg, args.laws)
    if report["failed_laws"]:
        _write_witnesses(args.witness_file, report)
        report["witness_file"] = args.witness_file
        return report, EXIT_LAW
    return report, EXIT_OK


# --------------------------------------------------------------- parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="working tolerance (default 1e-10)")
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")

    parser = argparse.ArgumentParser(prog="synaptic", description="GH-algebra computations on finite models.")
    parser.add_argument("--version", action="version", version=f"%(prog)s (eigen backend: {BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="spectrum, bounds and reconstruction residual")
    p.add_argument("matrix", help="matrix JSON file, or - for stdin")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("resolution", parents=[common], help="spectral resolution steps")
    p.add_argument("matrix")
    p.add_argument("--at", type=float, action="append", help="also evaluate p at this value (repeatable)")
    p.set_defaults(func=cmd_resolution)

    p = sub.add_parser("funcalc", parents=[common], help="f(a) by three methods with agreement norms")
    p.add_argument("matrix")
    p.add_argument("--function", "-f", required=True, help="abs | exp | square | clamp(lo,hi) | poly(c0,c1,...)")
    p.add_argument("--mesh", type=float, default=1e-3, help="Riemann-Stieltjes mesh width")
    p.add_argument("--degree", type=int, default=32, help="polynomial degree")
    p.add_argument("--tags", choices=TAG_RULES, default="right")
    p.add_argument("--poly-mode", choices=("bernstein", "interpolate"), default="bernstein")
    p.set_defaults(func=cmd_funcalc)

    p = sub.add_parser("observable", parents=[common], help="apply the spectral measure to a set")
    p.add_argument("matrix")
    p.add_argument("--set", help='Borel set JSON, inline or @file: {"intervals": [[lo, hi]], "points": [...]}')
    p.add_argument("--interval", nargs=2, action="append", metavar=("LO", "HI"), help="half-open (LO, HI]; use --set for infinite ends")
    p.add_argument("--point", type=float, action="append")
    p.set_defaults(func=cmd_observable)

    p = sub.add_parser("expect", parents=[common], help="expectation, state value and distribution")
    p.add_argument("matrix")
    p.add_argument("--state", required=True, help="state JSON file")
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("ls-audit", parents=[common], help="audit the quotient morphism of a ground set")
    p.add_argument("ground", help="ground set JSON file")
    p.add_argument("--functions", help="JSON list of label -> value maps, taken in pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=100)
    p.set_defaults(func=cmd_ls_audit)

    p = sub.add_parser("lattice", parents=[common], help="meet, join and relations of two projections")
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("axiom-audit", parents=[common], help="randomized law suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim-max", type=int, default=6)
    p.add_argument("--cases", type=int, default=500)
    p.add_argument("--laws", nargs="+", help="restrict to these laws (default: all)")
    p.add_argument("--inject", choices=INJECTIONS, help="fault injection for testing the suite itself")
    p.add_argument("--witness-file", default="synaptic-witnesses.json")
    p.add_argument("--replay", help="re-run the cases listed in a witness file")
    p.set_defaults(func=cmd_axiom_audit)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "json")
    try:
        doc, status = args.func(args)
    except DiagnosticError as exc:
        print(f"synaptic: diagnostic: {exc}", file=sys.stderr)
        return EXIT_LAW
    except (InputError, DomainError, SynapticError) as exc:
        print(f"synaptic: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(ser.render(doc, fmt))
    return status


if __name__ == "__main__":
    sys.exit(main())
