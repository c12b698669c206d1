"""Command-line front end: normalize, verify, represent, spectrum.

Output is deterministic for a fixed argv: orderings are canonical, floats
print with 17 significant digits, and randomized checks take their seed
from the command line.  Exit codes: 0 on success (all requested checks
passed), 1 on a failed verification, 2 on syntax or domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebra import (
    RewriteFuelError,
    confluence_probe,
    normalize,
    presentation_S,
    presentation_Sigma,
)
from .expr import ExprSyntaxError, parse, print_canonical
from .rep import RepConfig, apply_element, basis_state, matrix, matrix_json, yn1_spectrum
from .scalar import DomainError
from .verify import SUITES, CheckReport, ConfigurationError, run_suite


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _parse_q(text: str) -> Fraction:
    parts = text.split("/")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise DomainError(f"q must be an exact rational like 1/2, got {text!r}")
    return Fraction(int(parts[0]), int(parts[1]))


def _parse_lambda(text: str):
    """Returns (complex value, exact rational pair or None)."""
    named = {"1": (Fraction(1), Fraction(0)), "-1": (Fraction(-1), Fraction(0)),
             "i": (Fraction(0), Fraction(1)), "-i": (Fraction(0), Fraction(-1))}
    if text in named:
        re, im = named[text]
        return complex(float(re), float(im)), (re, im)
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"lambda must be 1, -1, i, -i or re,im; got {text!r}")
    try:
        re_exact, im_exact = Fraction(parts[0]), Fraction(parts[1])
    except ValueError:
        re_exact = im_exact = None
    if re_exact is not None and re_exact**2 + im_exact**2 == 1:
        return complex(float(re_exact), float(im_exact)), (re_exact, im_exact)
    try:
        return complex(float(parts[0]), float(parts[1])), None
    except ValueError as err:
        raise DomainError(f"cannot parse lambda {text!r}") from err


def _presentation(args):
    build = presentation_S if args.algebra == "s" else presentation_Sigma
    return build(args.n, args.sphere == "on")


def _rep_config(args) -> RepConfig:
    if args.algebra == "s":
        raise DomainError("representations are only constructed for the sigma algebra")
    lam, lam_exact = _parse_lambda(args.lam)
    return RepConfig(args.n, _parse_q(args.q), lam, args.K, args.mode, lam_exact)


def _add_common(sub):
    sub.add_argument("--algebra", choices=("s", "sigma"), default="sigma")
    sub.add_argument("--n", type=int, default=1)
    sub.add_argument("--q", default="1/2", help="exact rational, e.g. 1/2")
    sub.add_argument("--lambda", dest="lam", default="1",
                     help="1, -1, i, -i, or re,im on the unit circle")
    sub.add_argument("--K", type=int, default=6)
    sub.add_argument("--sphere", choices=("on", "off"), default="on")
    sub.add_argument("--mode", choices=("numeric", "exact"), default="numeric")
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_argument("--seed", type=int, default=0)


def cmd_normalize(args) -> int:
    p = _presentation(args)
    element = parse(args.expr, p)
    print(print_canonical(normalize(element, p)))
    return 0


def cmd_verify(args) -> int:
    p = _presentation(args)
    config = _rep_config(args) if args.algebra == "sigma" else None
    reports = run_suite(args.suite, p, config)
    if args.probe_trials:
        probe = confluence_probe(p, args.probe_trials, args.seed, args.probe_len)
        reports.append(CheckReport(
            "confluence_probe",
            {"kind": p.kind, "n": p.n, "trials": probe.trials,
             "max_steps": probe.max_steps},
            tolerance=0.0,
            max_residual=float(len(probe.discrepancies)),
            witnesses=probe.discrepancies[:5]))
    if args.format == "json":
        print(json.dumps([r.to_json() for r in reports], indent=None, sort_keys=True))
    else:
        for report in reports:
            print(report)
    return 0 if all(r.passed for r in reports) else 1


def cmd_rep_matrix(args) -> int:
    config = _rep_config(args)
    p = _presentation(args)
    element = parse(args.expr, p)
    print(matrix_json(matrix(element, config), config))
    return 0


def cmd_rep_apply(args) -> int:
    config = _rep_config(args)
    p = _presentation(args)
    element = parse(args.expr, p)
    try:
        state = tuple(int(part) for part in args.state.split(","))
    except ValueError as err:
        raise DomainError(f"bad state {args.state!r}; expected k1,..,kn") from err
    numeric = RepConfig(config.n, config.q0, config.lam, config.K, "numeric",
                        config.lam_exact)
    out = apply_element(element, basis_state(numeric, state), numeric)
    if args.format == "json":
        payload = {"n": numeric.n, "K": numeric.K,
                   "state": [[list(k), amp.real, amp.imag] for k, amp in out.items()]}
        print(json.dumps(payload))
    else:
        if out.is_zero():
            print("0")
        for k, amp in out.items():
            print(f"{','.join(map(str, k))} {_fmt(amp.real)} {_fmt(amp.imag)}")
    return 0


def cmd_spectrum(args) -> int:
    config = _rep_config(args)
    values = yn1_spectrum(config)
    if args.format == "json":
        print(json.dumps({"spectrum": [[v.real, v.imag] for v in values]}))
    else:
        from .rep import fock_indices
        for k, v in zip(fock_indices(config), values):
            print(f"{','.join(map(str, k))} {_fmt(v.real)} {_fmt(v.imag)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsphere",
        description="Normalize, verify and represent elements of the two "
                    "q-deformed sphere *-algebras.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_norm = subs.add_parser("normalize", help="print the canonical normal form")
    _add_common(p_norm)
    p_norm.add_argument("expr")
    p_norm.set_defaults(func=cmd_normalize)

    p_verify = subs.add_parser("verify", help="run identity checks")
    _add_common(p_verify)
    p_verify.add_argument("--suite", choices=SUITES, default="all")
    p_verify.add_argument("--probe-trials", type=int, default=0,
                          help="also run this many confluence-probe trials")
    p_verify.add_argument("--probe-len", type=int, default=6)
    p_verify.set_defaults(func=cmd_verify)

    p_rep = subs.add_parser("rep", help="representation operations")
    rep_subs = p_rep.add_subparsers(dest="rep_command", required=True)

    p_mat = rep_subs.add_parser("matrix", help="emit the sparse matrix as JSON")
    _add_common(p_mat)
    p_mat.add_argument("expr")
    p_mat.set_defaults(func=cmd_rep_matrix)

    p_apply = rep_subs.add_parser("apply", help="apply an element to a basis state")
    _add_common(p_apply)
    p_apply.add_argument("expr")
    p_apply.add_argument("--state", required=True, help="comma-separated index, e.g. 0,2")
    p_apply.set_defaults(func=cmd_rep_apply)

    p_spec = subs.add_parser("spectrum", help="print the diagonal of y_{n+1}")
    _add_common(p_spec)
    p_spec.set_defaults(func=cmd_spectrum)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ExprSyntaxError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (DomainError, RewriteFuelError, ConfigurationError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
