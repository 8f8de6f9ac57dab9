"""Command line interface.

Subcommands: derive, verify, degrees, symmetry, krel, reduce-f, same.
Text mode prints one canonical polynomial text line per polynomial so shell
pipelines can diff outputs; --json prints the full run report.  Exit codes:
0 ok, 1 verification or pruning failure, 2 parse or validation error,
3 degeneracy.  Fixed seed and inputs give byte-identical stdout; timing goes
to stderr only.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .derive import derive_addition_theorem, eliminate, reduce_f_to_g
from .errors import (
    AddTheoError,
    DegenerateEliminationError,
    DegenerateSpecializationError,
    DegreeLawError,
    ExprSyntaxError,
    PruningError,
    SamplingError,
    SpecValidationError,
    VerificationError,
)
from .exprparse import parse_polynomial
from .funcspec import FuncSpec, parse_spec
from .laws import (
    alpha_complex,
    degree_report,
    full_substitution_group,
    k_relation,
    multiplier_group,
    same_theorem,
)
from .numeric import EvalConfig, class_tolerance, relative_residual, sample_graph

_PARSE_ERRORS = (ExprSyntaxError, SpecValidationError)
_DEGENERATE_ERRORS = (
    DegenerateEliminationError,
    DegenerateSpecializationError,
    SamplingError,
)


def _load_spec(path) -> FuncSpec:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_spec(handle.read())


def _config(spec, args) -> EvalConfig:
    tol = class_tolerance(spec, getattr(args, "tol", None))
    return EvalConfig(tol=tol, seed=getattr(args, "seed", 0))


def _alpha_name(descriptor) -> str:
    k, j = descriptor
    if k == 1:
        return "1"
    if k == 2:
        return "-1"
    if k == 4:
        return "i" if j == 1 else "-i"
    return f"zeta{k}^{j}" if j != 1 else f"zeta{k}"


def _fmt_complex(z: complex) -> str:
    re, im = z.real, z.imag
    if abs(im) < 5e-7:
        return f"{re:.6g}"
    if abs(re) < 5e-7:
        return f"{im:.6g}i"
    sign = "+" if im >= 0 else "-"
    return f"{re:.6g}{sign}{abs(im):.6g}i"


def cmd_derive(args):
    spec = _load_spec(args.spec)
    cfg = _config(spec, args)
    if args.trace:
        raw = eliminate(spec)
        print(f"trace (non-contractual): eliminant = {raw.to_text()}", file=sys.stderr)
    theorem = derive_addition_theorem(spec, cfg, verify_samples=args.samples)
    lines = [theorem.G.to_text()]
    return lines, {"theorem": theorem.to_json_dict()}


def cmd_verify(args):
    spec = _load_spec(args.spec)
    cfg = _config(spec, args)
    text = args.g
    try:
        with open(text, "r", encoding="utf-8") as handle:
            text = handle.read().strip()
    except OSError:
        pass
    g = parse_polynomial(text, ("x", "y", "z")).canonicalize()
    samples = sample_graph(spec, args.samples, cfg, salt=7)
    worst = None
    worst_res = -1.0
    for s in samples:
        res = relative_residual(g, {"x": s.x, "y": s.y, "z": s.z})
        if res > worst_res:
            worst_res = res
            worst = s
    ok = worst_res < cfg.tol
    result = {
        "G": g.to_text(),
        "max_residual": worst_res,
        "tol": cfg.tol,
        "ok": ok,
        "worst_sample": {
            "u": [worst.u.real, worst.u.imag],
            "v": [worst.v.real, worst.v.imag],
        },
    }
    if ok:
        return [f"ok max_residual={worst_res:.3e}"], result
    raise VerificationError(
        f"max_residual={worst_res:.3e} exceeds tol={cfg.tol:.1e} at "
        f"u={_fmt_complex(worst.u)} v={_fmt_complex(worst.v)}"
    )


def cmd_degrees(args):
    spec = _load_spec(args.spec)
    theorem = None
    if args.derive:
        theorem = derive_addition_theorem(spec, _config(spec, args), verify_samples=args.samples)
    report = degree_report(spec, theorem)
    line = (
        f"m={report.m} nu={report.nu} lambda0={report.lambda0} "
        f"predicted={report.predicted}"
    )
    if report.actual is not None:
        line += " actual=" + ",".join(str(d) for d in report.actual)
    return [line], {"degrees": report.to_json_dict()}


def cmd_symmetry(args):
    spec = _load_spec(args.spec)
    report = full_substitution_group(spec)
    mults = ",".join(_alpha_name(a) for a in report.multipliers)
    group = ",".join(_alpha_name(a) for a in report.group_alphas)
    line = (
        f"multipliers={mults} lambda0={report.lambda0} "
        f"group={group} lambda={report.lam} beta_search={report.beta_search}"
    )
    return [line], {"symmetry": report.to_json_dict()}


def cmd_krel(args):
    spec = _load_spec(args.spec)
    cfg = _config(spec, args)
    theorem = derive_addition_theorem(spec, cfg, verify_samples=args.samples)
    rel = k_relation(theorem, spec, cfg, verify_samples=args.samples)
    lines = [
        rel.K.to_text(),
        "degrees=" + ",".join(str(d) for d in rel.degrees) + f" lambda={rel.lam}",
    ]
    return lines, {"k_relation": rel.to_json_dict(), "theorem": theorem.to_json_dict()}


def cmd_reduce_f(args):
    with open(args.f, "r", encoding="utf-8") as handle:
        text = handle.read().strip()
    F = parse_polynomial(text, ("X", "Y", "Z"))
    rel = reduce_f_to_g(F, Fraction(args.x0), Fraction(args.y0))
    return [rel.to_text()], {"relation": rel.to_text()}


def cmd_same(args):
    spec_a = _load_spec(args.spec_a)
    spec_b = _load_spec(args.spec_b)
    cfg = _config(spec_a, args)
    verdict = same_theorem(spec_a, spec_b, cfg)
    if not verdict.same:
        line = "same=false"
    elif verdict.alpha is None:
        line = "same=true alpha=unresolved"
    else:
        line = f"same=true alpha={_fmt_complex(verdict.alpha)}"
    return [line], {"same_theorem": verdict.to_json_dict()}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="addtheo",
        description="derive and verify algebraic addition theorems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, samples_default=200):
        p.add_argument("--json", action="store_true", help="print a JSON run report")
        p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
        p.add_argument(
            "--tol",
            type=float,
            default=None,
            help="identity tolerance (default 1e-9; 1e-6 for elliptic specs)",
        )
        p.add_argument(
            "--samples", type=int, default=samples_default,
            help=f"verification sample count (default {samples_default})",
        )

    p = sub.add_parser("derive", help="derive the canonical addition theorem")
    p.add_argument("spec")
    p.add_argument("--trace", action="store_true", help="dump the raw eliminant to stderr")
    common(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("verify", help="check a candidate theorem against samples")
    p.add_argument("spec")
    p.add_argument("--g", required=True, help="polynomial in x, y, z (inline or a file path)")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("degrees", help="order, multiplier count, and degree prediction")
    p.add_argument("spec")
    p.add_argument("--derive", action="store_true", help="also derive and report actual degrees")
    common(p)
    p.set_defaults(func=cmd_degrees)

    p = sub.add_parser("symmetry", help="multipliers and the substitution group")
    p.add_argument("spec")
    common(p)
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("krel", help="derive the four-variable K-relation")
    p.add_argument("spec")
    common(p)
    p.set_defaults(func=cmd_krel)

    p = sub.add_parser("reduce-f", help="reduce a mixed relation F to a chi-relation")
    p.add_argument("f", help="file containing a polynomial in X, Y, Z")
    p.add_argument("--x0", required=True, help="base value phi(a), a rational")
    p.add_argument("--y0", required=True, help="base value psi(b), a rational")
    common(p)
    p.set_defaults(func=cmd_reduce_f)

    p = sub.add_parser("same", help="decide whether two specs share one theorem")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    common(p)
    p.set_defaults(func=cmd_same)
    return parser


def _report(args, status, result=None, message=None):
    report = {
        "command": args.command,
        "specs": [
            value
            for key in ("spec", "spec_a", "spec_b", "f")
            if (value := getattr(args, key, None)) is not None
        ],
        "seed": getattr(args, "seed", 0),
        "tol": getattr(args, "tol", None),
        "samples": getattr(args, "samples", None),
        "status": status,
    }
    if result is not None:
        report["result"] = result
    if message is not None:
        report["message"] = message
    return report


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        lines, result = args.func(args)
        status, code, message = "ok", 0, None
    except _PARSE_ERRORS as exc:
        lines, result = None, None
        status, code, message = "parse-error", 2, str(exc)
    except _DEGENERATE_ERRORS as exc:
        lines, result = None, None
        status, code, message = "degenerate", 3, str(exc)
    except (PruningError, VerificationError, DegreeLawError, AddTheoError) as exc:
        lines, result = None, None
        status, code, message = "verification-failed", 1, str(exc)
    elapsed_ms = int(1000 * (time.monotonic() - started))
    if getattr(args, "json", False):
        print(json.dumps(_report(args, status, result, message), sort_keys=True, indent=2))
    else:
        if lines:
            for line in lines:
                print(line)
        if message is not None:
            print(f"error: {message}", file=sys.stderr)
    print(f"elapsed_ms={elapsed_ms}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
