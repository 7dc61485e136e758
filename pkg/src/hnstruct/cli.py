"""Command-line front end.

Exit codes are shared by every subcommand: 0 when all checks pass, 1 when a
mathematical check fails, 2 for unusable input or bad usage.  Reports go to
stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import linalg, serialize
from .calculus import verify_lemma_2_1
from .errors import (
    BackendMismatchError,
    DegenerateMetricError,
    DimensionMismatchError,
    G1PredicateDisagreement,
    GeneratorFailure,
    InstanceFormatError,
    NotALieAlgebraError,
    StructureError,
    Theorem36Inconsistency,
)
from .frame import build_lie_frame
from .instances import Instance, example_instance, random_endo_matrix, random_instance
from .structure import (
    assoc_six,
    class_report,
    pair_label,
    structure_violations,
    verify_en_formulas,
    verify_lemma_3_1,
    verify_nn_nhat,
)
from .tensors import Endo
from .torsion import TorsionProblem, solve_skew_torsion, verify_connection

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
BACKEND_ENV = "NIJ_BACKEND"


class UsageError(Exception):
    pass


# --- instance sources -----------------------------------------------------


def _read_instance(path: str) -> Instance:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return serialize.load_instance(text)


def _sources(args) -> list[tuple[str, Instance]]:
    """``(label, instance)`` pairs in a fixed order."""
    if args.instance is not None and args.random is not None:
        raise UsageError("give an instance file or --random, not both")
    if args.instance is not None:
        return [(args.instance, _read_instance(args.instance))]
    if args.random is None:
        raise UsageError("an instance file or --random N is required")
    if args.random < 1:
        raise UsageError("--random needs a positive count")
    return [
        (f"seed={s}", random_instance(s, args.m, coupled=args.coupled))
        for s in range(args.seed, args.seed + args.random)
    ]


def _build(inst: Instance, backend):
    """Structure or a report entry describing why it could not be built."""
    try:
        return inst.build(backend), None
    except StructureError as exc:
        return None, [_violation_json(v) for v in exc.violations]
    except (NotALieAlgebraError, DegenerateMetricError) as exc:
        return None, [{"kind": _kind(exc), "relation": str(exc), "index": None}]


def _kind(exc) -> str:
    return "lie-algebra-violation" if isinstance(exc, NotALieAlgebraError) else "signature-violation"


def _violation_json(v) -> dict:
    return {"kind": v.kind, "relation": v.relation, "index": list(v.index) if v.index else None}


def _residuals_json(residuals) -> list:
    return [r.to_json() for r in residuals]


def _tolerance_json(residuals) -> dict:
    """Worst float residual relative to its own threshold."""
    worst = max(residuals, key=lambda r: float(r.max_abs) / (1.0 + r.scale))
    return {
        "rel_tol": linalg.ZERO_TOL,
        "max_residual": float(worst.max_abs),
        "max_scaled_residual": float(worst.max_abs) / (1.0 + worst.scale),
        "label": worst.label,
    }


# --- subcommands ----------------------------------------------------------


def cmd_check(inst: Instance, backend, args) -> dict:
    C = linalg.convert(inst.C, backend)
    g = linalg.convert(inst.g, backend)
    try:
        frame = build_lie_frame(inst.n, C, g)
    except (NotALieAlgebraError, DegenerateMetricError) as exc:
        return {"ok": False, "violations": [{"kind": _kind(exc), "relation": str(exc), "index": None}]}
    if inst.n % 4:
        raise DimensionMismatchError(f"an almost hypercomplex frame needs n = 4m, got n = {inst.n}")
    Js = [Endo(frame, linalg.convert(m, backend)) for m in inst.J]
    violations = structure_violations(frame, *Js)
    out = {"ok": not violations, "violations": [_violation_json(v) for v in violations]}
    if not violations:
        out["signature"] = list(linalg.signature(frame.g))
    return out


def cmd_lemmas(inst: Instance, backend, args) -> dict:
    H, bad = _build(inst, backend)
    if H is None:
        return {"ok": False, "violations": bad}
    rng = np.random.default_rng(args.seed)
    triples = []
    for _ in range(args.triples):
        J, K, L = (Endo(H.frame, linalg.convert(random_endo_matrix(rng, H.n), backend)) for _ in range(3))
        triples.append(verify_lemma_2_1(J, K, L))
    l31 = verify_lemma_3_1(H)
    out = {
        "lemma_2_1": _residuals_json(triples),
        "lemma_3_1": _residuals_json(l31),
        "ok": all(r.ok for r in triples + l31),
    }
    if backend is linalg.FLOAT:
        out["tolerance"] = _tolerance_json(triples + l31)
    return out


def _six_json(H) -> tuple[dict, bool, object]:
    try:
        six = assoc_six(H)
    except Theorem36Inconsistency as exc:
        return {"error": f"theorem-3.6-inconsistency: {exc}"}, False, None
    return six.to_json(), True, six


def cmd_classes(inst: Instance, backend, args) -> dict:
    H, bad = _build(inst, backend)
    if H is None:
        return {"ok": False, "violations": bad}
    six_json, ok, _ = _six_json(H)
    formulas = [r for a in (1, 2, 3) for r in verify_en_formulas(H, a)] + [verify_nn_nhat(H)]
    out = {"assoc_six": six_json, "formulas": _residuals_json(formulas)}
    ok = ok and all(r.ok for r in formulas)
    try:
        report = class_report(H)
    except G1PredicateDisagreement as exc:
        out["classes"] = {"error": f"g1-predicate-disagreement: {exc}"}
        ok = False
    else:
        out["classes"] = report.to_json()
    if backend is linalg.FLOAT:
        out["tolerance"] = _tolerance_json(formulas)
    out["ok"] = ok
    return out


def torsion_condition(six, preserve) -> tuple[str, bool]:
    """The tensor condition that should be equivalent to existence."""
    if len(preserve) == 1:
        (a,) = preserve
        label = pair_label(a, a)
        return f"{label}=0", six.vanish[label]
    return "all six vanish", six.all_vanish


def _torsion_one(H, preserve, six) -> dict:
    result = solve_skew_torsion(TorsionProblem(H, frozenset(preserve)))
    out = result.to_json()
    ok = True
    if result.T is not None:
        residuals = verify_connection(H, result.T, preserve)
        out["residuals"] = {r.label: r.to_json() for r in residuals}
        ok = all(r.ok for r in residuals)
    label, holds = torsion_condition(six, preserve)
    consistent = result.exists == holds
    if preserve == {1} and result.exists:
        consistent = consistent and result.family_dim == 0
    out["cross_check"] = {"condition": label, "condition_holds": holds, "consistent": consistent}
    out["preserve"] = sorted(preserve)
    out["ok"] = ok and consistent
    return out


def cmd_torsion(inst: Instance, backend, args) -> dict:
    H, bad = _build(inst, backend)
    if H is None:
        return {"ok": False, "violations": bad}
    six_json, ok, six = _six_json(H)
    if six is None:
        return {"ok": False, "assoc_six": six_json}
    out = _torsion_one(H, args.preserve, six)
    out["assoc_six"] = six_json
    return out


def cmd_sweep(inst: Instance, backend, args) -> dict:
    H, bad = _build(inst, backend)
    if H is None:
        return {"ok": False, "violations": bad}
    l31 = verify_lemma_3_1(H)
    six_json, ok, six = _six_json(H)
    out = {"lemma_3_1_ok": all(r.ok for r in l31), "assoc_six": six_json}
    ok = ok and out["lemma_3_1_ok"]
    formulas = [r for a in (1, 2, 3) for r in verify_en_formulas(H, a)] + [verify_nn_nhat(H)]
    out["formulas_ok"] = all(r.ok for r in formulas)
    ok = ok and out["formulas_ok"]
    try:
        out["classes"] = class_report(H).to_json()
    except G1PredicateDisagreement as exc:
        out["classes"] = {"error": f"g1-predicate-disagreement: {exc}"}
        ok = False
    if six is not None:
        out["vanishing"] = six.count_vanishing
        out["torsion"] = {}
        for preserve in ({1}, {1, 2, 3}):
            t = _torsion_one(H, preserve, six)
            out["torsion"][",".join(map(str, sorted(preserve)))] = {
                "status": t["status"],
                "family_dim": t["family_dim"],
                "consistent": t["cross_check"]["consistent"],
                "ok": t["ok"],
            }
            ok = ok and t["ok"]
    out["ok"] = ok
    return out


COMMANDS = {
    "check": cmd_check,
    "lemmas": cmd_lemmas,
    "classes": cmd_classes,
    "torsion": cmd_torsion,
    "random-sweep": cmd_sweep,
}


# --- text rendering -------------------------------------------------------


def _render_text(report: dict) -> str:
    lines = [f"{report['command']} ({report['backend']}): {'PASS' if report['ok'] else 'FAIL'}"]
    for entry in report["instances"]:
        lines.append(f"[{entry['source']}] {'ok' if entry['result']['ok'] else 'FAIL'}")
        lines.extend("  " + s for s in _render_entry(entry["result"]))
    return "\n".join(lines) + "\n"


def _render_entry(res: dict) -> list[str]:
    out = []
    for v in res.get("violations", []):
        where = f" at {v['index']}" if v["index"] is not None else ""
        out.append(f"{v['kind']}: {v['relation']}{where}")
    if "signature" in res:
        out.append(f"signature {tuple(res['signature'])}")
    for key in ("lemma_2_1", "lemma_3_1", "formulas"):
        for r in res.get(key, []):
            out.append(f"{r['label']}: {r['max_abs']} {'ok' if r['ok'] else 'FAIL'}")
    six = res.get("assoc_six")
    if six:
        if "error" in six:
            out.append(six["error"])
        else:
            zero = [k for k, v in six.items() if v["vanishes"]]
            out.append(f"vanishing associated tensors: {', '.join(zero) or 'none'}")
    classes = res.get("classes")
    if classes:
        out.append("classes: " + ", ".join(f"{k}={v}" for k, v in sorted(classes.items())))
    if "status" in res:
        out.append(f"torsion {res['preserve']}: {res['status']} (family_dim {res['family_dim']})")
        for t in res["T"]:
            out.append(f"  T[{t['i']},{t['j']},{t['k']}] = {t['value']}")
        for label, r in sorted(res.get("residuals", {}).items()):
            out.append(f"{label}: {r['max_abs']} {'ok' if r['ok'] else 'FAIL'}")
        cc = res["cross_check"]
        out.append(f"{cc['condition']}: {cc['condition_holds']}, consistent: {cc['consistent']}")
    for preserve, t in sorted(res.get("torsion", {}).items()):
        out.append(f"torsion {{{preserve}}}: {t['status']} consistent: {t['consistent']}")
    if "tolerance" in res:
        tol = res["tolerance"]
        out.append(f"max scaled residual {tol['max_scaled_residual']:.3e} ({tol['label']}), tol {tol['rel_tol']}")
    return out


# --- argument parsing -----------------------------------------------------


def _preserve(text: str) -> frozenset:
    try:
        vals = frozenset(int(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --preserve value {text!r}") from exc
    if not vals or not vals <= {1, 2, 3}:
        raise argparse.ArgumentTypeError("--preserve takes a comma list drawn from 1,2,3")
    return vals


def _lambdas(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("--lambdas needs four comma-separated values")
    try:
        return tuple(linalg.to_scalar(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad --lambdas value {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=[b.value for b in linalg.Backend], default=None,
                        help=f"scalar backend (default: ${BACKEND_ENV} or rational)")
    common.add_argument("--format", choices=["json", "text"], default="json")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("instance", nargs="?", help="instance JSON file, '-' for stdin")
    source.add_argument("--random", type=int, metavar="N", help="use N generated instances instead")
    source.add_argument("--seed", type=int, default=0, help="first seed (default 0)")
    source.add_argument("--m", type=int, default=1, help="generated dimension is 4m (default 1)")
    source.add_argument("--coupled", action="store_true",
                        help="generate the algebra in the same basis as the structure")

    parser = argparse.ArgumentParser(prog="hnstruct", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common, source], help="validate an HN-metric structure")
    lem = sub.add_parser("lemmas", parents=[common, source], help="run the identity residual suites")
    lem.add_argument("--triples", type=int, default=5, help="random (J, K, L) triples per instance")
    sub.add_parser("classes", parents=[common, source], help="associated tensors and class membership")
    tor = sub.add_parser("torsion", parents=[common, source], help="solve for a skew-torsion connection")
    tor.add_argument("--preserve", type=_preserve, default=frozenset({1, 2, 3}),
                     help="structures to preserve, e.g. 1 or 1,2,3 (default 1,2,3)")
    sweep = sub.add_parser("random-sweep", parents=[common], help="run every check on generated instances")
    sweep.add_argument("--count", type=int, default=10)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--m", type=int, default=1)
    sweep.add_argument("--coupled", action="store_true")
    ex = sub.add_parser("example", parents=[common], help="write an instance JSON")
    ex.add_argument("--lambdas", type=_lambdas, default=None, help="p/q,p/q,p/q,p/q (default 1,2,3,4)")
    ex.add_argument("--seed", type=int, default=None, help="generate a random instance instead")
    ex.add_argument("--m", type=int, default=1)
    ex.add_argument("--coupled", action="store_true")
    ex.add_argument("-o", "--output", help="write to a file instead of stdout")
    return parser


def _backend(args) -> linalg.Backend:
    value = args.backend or os.environ.get(BACKEND_ENV) or "rational"
    try:
        return linalg.Backend(value)
    except ValueError as exc:
        raise UsageError(f"unknown backend {value!r}") from exc


def _run_example(args, backend) -> str:
    if args.seed is not None and args.lambdas is not None:
        raise UsageError("give --lambdas or --seed, not both")
    if args.seed is not None:
        inst = random_instance(args.seed, args.m, coupled=args.coupled)
    else:
        try:
            inst = example_instance(args.lambdas or (1, 2, 3, 4))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return serialize.dump_instance(inst, backend)


def _run(args, backend) -> tuple[str, int]:
    if args.command == "example":
        return _run_example(args, backend), EXIT_OK
    if args.command == "random-sweep":
        if args.count < 1:
            raise UsageError("--count needs a positive value")
        args.instance = None
        args.random = args.count
    sources = _sources(args)
    handler = COMMANDS[args.command]
    entries = [{"source": label, "result": handler(inst, backend, args)} for label, inst in sources]
    report = {
        "command": args.command,
        "backend": backend.value,
        "instances": entries,
        "ok": all(e["result"]["ok"] for e in entries),
    }
    if args.format == "text":
        text = _render_text(report)
    else:
        text = serialize.dumps(report)
    return text, EXIT_OK if report["ok"] else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        backend = _backend(args)
        text, code = _run(args, backend)
    except (UsageError, InstanceFormatError, DimensionMismatchError, BackendMismatchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GeneratorFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
