"""``gammakit`` command line: membership, tuple certificates, dilations.

Reports are JSON written to stdout (or ``--out``) and end with a "summary"
object. Exit codes: 0 when every check passes, 1 when a check fails, 2 for
usage, input or I/O errors. Timings go to stderr so the JSON stays
reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .dilation import (build_coisometry_model, build_isometric_dilation, build_unitary_dilation,
                       minimality_rank_check, verify_dilation_moments, verify_step_identities)
from .errors import GammaError
from .fundamental import (lemma72_suite, prop66_conditions, radius_bound_check,
                          solve_fundamental, thm73_gate, uniqueness_check)
from .geometry import (alpha_grid, bboundary_check, beta_grid, costara_decompose,
                       roots_membership, scalar_pencils_batch, schur_membership)
from .linalg import commute_check, commute_tol_for, op_norm
from .pencils import (classify_coisometry, classify_isometry, classify_unitary,
                      necessary_contraction_suite)
from .serialize import (dilation_to_dict, dumps, fundamental_to_dict, point_from_json,
                        tuple_from_json)
from .suites import DEFAULT_SEED, verify_paper


SCHUR_TOL = 1e-9


class UsageError(Exception):
    pass


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GAMMA_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"GAMMA_SEED must be an integer, got {env!r}") from None


def _load(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _header(args, command: str, **extra) -> dict:
    head = {"command": command, "version": __version__, "seed": _seed(args), "tol": args.tol,
            "alpha_grid": args.alpha_grid, "beta_grid": args.beta_grid}
    head.update(extra)
    return head


def _summary(passed: bool, text: str, **extra) -> dict:
    out = {"pass": bool(passed), "text": text}
    out.update(extra)
    return out


def cmd_check_point(args) -> tuple[dict, int]:
    s = point_from_json(_load(args.input))
    n = s.size
    tol = 1e-8 if args.tol is None else args.tol
    methods = {}
    roots = roots_membership(s, tol)
    methods["roots"] = roots.to_dict()
    L, strict = schur_membership(s, 1.0, SCHUR_TOL)
    lam = float(np.linalg.eigvalsh(L)[0])
    # Clustered roots close to the circle make L nearly singular even for
    # interior points; inside that band the Schur test gives no verdict.
    ambiguous = abs(lam) <= SCHUR_TOL
    methods["schur"] = {"open": bool(strict), "lambda_min": lam, "ambiguous": ambiguous}
    agree = {}
    if roots.region != "boundary" and roots.region != "closed" and not ambiguous:
        agree["schur_vs_roots"] = strict == roots.in_open
    if abs(s[-1]) < 1 - tol and n > 1:
        c = costara_decompose(s, check_membership=False)
        c_in = roots_membership(c["c"], tol).in_closed
        methods["costara"] = {"c": c["c"], "residual": c["residual"], "c_in_closed": c_in,
                              "closed": c_in}
        if roots.region != "boundary":
            agree["costara_vs_roots"] = c_in == roots.in_closed
    if n > 1:
        alphas = alpha_grid(args.alpha_grid)
        worst = min(min(float(p.min()) for p in scalar_pencils_batch(i, alphas, s[None, :]))
                    for i in range(1, n))
        nonneg = worst >= -1e-10
        methods["pencils"] = {"min": worst, "nonnegative": nonneg,
                              "note": "necessary condition for the closed set"}
        if roots.in_closed:
            agree["pencils_necessary"] = nonneg
    bb = bboundary_check(s, tol)
    methods["distinguished_boundary"] = bb
    agree["boundary_vs_roots"] = bb["agrees_with_roots"]
    ok = all(agree.values())
    report = {"header": _header(args, "check-point", tol=tol),
              "point": {"n": n, "s": s}, "region": roots.region, "methods": methods,
              "agreement": agree,
              "summary": _summary(ok, f"region {roots.region}; methods "
                                  + ("agree" if ok else "disagree"))}
    return report, 0 if ok else 1


def _tuple_certificate(t, args) -> tuple[dict, bool]:
    tol = 1e-10 if args.tol is None else args.tol
    alphas = alpha_grid(args.alpha_grid)
    betas = beta_grid(args.beta_grid)
    comm, comm_ok = commute_check(t)
    cert = {"commute": {"residual": comm, "tol": commute_tol_for(t.dim), "pass": comm_ok}}
    if not comm_ok:
        return cert, False
    suite = necessary_contraction_suite(t, alphas, tol)
    cert["necessary_suite"] = suite
    cert["classifiers"] = {"unitary": classify_unitary(t, tol, alphas),
                           "isometry": classify_isometry(t, tol, alphas, betas),
                           "co_isometry": classify_coisometry(t, tol, alphas=alphas, betas=betas)}
    ok = suite["pass"]
    if t.n >= 2 and op_norm(t.S(t.n)) <= 1 + tol:
        try:
            E = solve_fundamental(t, "direct")
            F = solve_fundamental(t, "adjoint")
        except GammaError as exc:
            cert["fundamental"] = {"skipped": str(exc)}
        else:
            cert["fundamental"] = {"E": {"rank": E.rank, "residuals": E.residuals,
                                         "off_defect": E.off_defect, "flags": E.flags},
                                   "F": {"rank": F.rank, "residuals": F.residuals,
                                         "off_defect": F.off_defect, "flags": F.flags}}
            cert["radius_bound"] = {"E": radius_bound_check(E), "F": radius_bound_check(F)}
            cert["prop66"] = {"E": prop66_conditions(E), "F": prop66_conditions(F)}
            cert["thm73_gate"] = {"E": thm73_gate(E), "F": thm73_gate(F)}
            lem = lemma72_suite(t, E, F)
            cert["lemma72"] = lem
            ok &= E.solved and F.solved
            if suite["pass"]:
                ok &= all(v is not False for v in lem["pass"].values())
    else:
        cert["fundamental"] = {"skipped": "S_n is not a contraction"}
    return cert, ok


def cmd_check_tuple(args) -> tuple[dict, int]:
    t = tuple_from_json(_load(args.input))
    cert, ok = _tuple_certificate(t, args)
    cls = "non-commuting"
    if "classifiers" in cert:
        c = cert["classifiers"]
        cls = next((v.cls for v in (c["unitary"], c["isometry"], c["co_isometry"]) if v.ok),
                   "necessary-conditions-pass" if cert["necessary_suite"]["pass"] else "fail")
    report = {"header": _header(args, "check-tuple"), "tuple": {"n": t.n, "dim": t.dim},
              "certificate": cert,
              "summary": _summary(ok, f"class {cls}; " + ("all checks pass" if ok
                                                            else "some checks fail"),
                                  **{"class": cls})}
    return report, 0 if ok else 1


def cmd_fundamental(args) -> tuple[dict, int]:
    t = tuple_from_json(_load(args.input))
    if t.n < 2:
        raise UsageError("fundamental operators need n >= 2")
    E = solve_fundamental(t, "direct")
    F = solve_fundamental(t, "adjoint")
    uniq = uniqueness_check(t, rng=np.random.default_rng(_seed(args)))
    ok = E.solved and F.solved and uniq["pass"]
    report = {"header": _header(args, "fundamental"),
              "E": fundamental_to_dict(E), "F": fundamental_to_dict(F),
              "uniqueness": uniq,
              "summary": _summary(ok, f"defect ranks {E.rank}/{F.rank}; "
                                  + ("solved" if ok else "not solved"))}
    return report, 0 if ok else 1


def cmd_dilate(args) -> tuple[dict, int]:
    t = tuple_from_json(_load(args.input))
    if t.n < 2:
        raise UsageError("dilation needs n >= 2")
    E = solve_fundamental(t, "direct")
    F = solve_fundamental(t, "adjoint")
    dil = build_unitary_dilation(t, E, F, args.trunc_past, args.trunc_future)
    degree = min(4, dil.safe_degree)
    steps = verify_step_identities(t, E, F)
    moments = verify_dilation_moments(t, dil, degree)
    iso = build_isometric_dilation(t, E, F, args.trunc_past)
    _, co = build_coisometry_model(t, F, args.trunc_future)
    mini = minimality_rank_check(dil)
    ok = bool(steps["pass"] and moments["pass"] and mini["pass"] and iso["passing"]
              and co["pass"])
    gates_ok = all(steps["gates"].values())
    written = None
    if args.out and args.out != "-":
        written = args.dilation_out or args.out + ".dilation.json"
    elif args.dilation_out:
        written = args.dilation_out
    if written:
        try:
            with open(written, "w", encoding="utf-8") as fh:
                fh.write(dumps(dilation_to_dict(dil), exact=True))
        except OSError as exc:
            raise UsageError(f"cannot write {written}: {exc.strerror}") from None
    if ok:
        text = "dilation verified" + ("" if E.rank else " (trivial: S_n unitary)")
    elif not gates_ok:
        text = "hypothesis gates fail; failing identities: " + ", ".join(steps["failing"])
    else:
        text = "dilation checks fail"
    report = {"header": _header(args, "dilate", trunc_past=args.trunc_past,
                                trunc_future=args.trunc_future, max_degree=degree),
              "blocks": dil.blocks.to_list(), "safe_degree": dil.safe_degree,
              "steps": steps, "moments": moments, "minimality": mini,
              "isometric": {k: v for k, v in iso.items() if k in ("variants", "passing")},
              "coisometry": co, "dilation_file": written,
              "summary": _summary(ok, text, gates=steps["gates"], failing=steps["failing"])}
    return report, 0 if ok else 1


def cmd_verify_paper(args) -> tuple[dict, int]:
    timings = {}
    report = verify_paper(_seed(args), args.samples, timings)
    for name, sec in timings.items():
        print(f"[timing] {name}: {sec:.2f}s", file=sys.stderr)
    s = report["summary"]
    s["text"] = (f"{s['passed']}/{s['suites']} suites pass"
                 + ("" if s["pass"] else "; failed: " + ", ".join(s["failed"])))
    return report, 0 if s["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="check tolerance (command-specific default)")
    common.add_argument("--alpha-grid", type=int, default=64,
                        help="alpha points per circle for pencil sweeps")
    common.add_argument("--beta-grid", type=int, default=128,
                        help="points on |beta| = 1 for isometry checks")
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (falls back to GAMMA_SEED)")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="gammakit",
                                description="Numerical toolkit for the symmetrized polydisc.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, helptext in (("check-point", cmd_check_point, "membership of a point"),
                               ("check-tuple", cmd_check_tuple, "certificate for a tuple"),
                               ("fundamental", cmd_fundamental, "solve fundamental operators"),
                               ("dilate", cmd_dilate, "build and verify dilations")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("input", help="JSON input file, or - for stdin")
        sp.set_defaults(func=fn)
        if name == "dilate":
            sp.add_argument("--trunc-past", type=int, default=6)
            sp.add_argument("--trunc-future", type=int, default=6)
            sp.add_argument("--dilation-out", default=None,
                            help="dilation matrices file (default: <out>.dilation.json)")
    sp = sub.add_parser("verify-paper", parents=[common], help="run every verification suite")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.set_defaults(func=cmd_verify_paper)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        for flag in ("alpha_grid", "beta_grid", "samples", "trunc_past", "trunc_future"):
            v = getattr(args, flag, None)
            if v is not None and v < 1:
                raise UsageError(f"--{flag.replace('_', '-')} must be positive")
        if args.tol is not None and not args.tol > 0:
            raise UsageError("--tol must be positive")
        report, code = args.func(args)
        text = dumps(report)
        if args.out and args.out != "-":
            try:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            except OSError as exc:
                raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
        else:
            sys.stdout.write(text)
    except (UsageError, GammaError) as exc:
        print(f"gammakit: error: {exc}", file=sys.stderr)
        return 2
    print(f"[timing] total: {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
