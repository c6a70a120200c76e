"""``symred`` command-line interface.

Exit status: 0 when every check passes, 1 when any verification fails,
2 on usage errors.  Errors go to stderr as ``ERROR <code>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import catalog
from .expr import ExprError, ParseError, parse, substitute
from .jet import EvolutionaryField, check_lb_symmetry, check_point_symmetry_pde
from .numerics import (RTOL, ATOL, IntegrationError, StepSizeUnderflow, ValidityViolation,
                       eval_family, family_ic, integrate, resolve_params)
from .reduction import ReductionError, derive_system

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "format": "text",
    "samples": 50,
    "seed": 0,
    "threshold": 1e-8,
    "t0": 0.0,
    "t1": 0.5,
    "points": 11,
    "rtol": RTOL,
    "atol": ATOL,
    "mol_rtol": 1e-8,
    "mol_atol": 1e-10,
    "times": "0,0.3",
    "exact_tol": 1e-9,
    "mol_tol": 1e-3,
}


class UsageError(Exception):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ----------------------------------------------------------------- helpers

def parse_bindings(text: Optional[str], exact: bool) -> Dict[str, object]:
    """``k1=3/2,k2=1`` -> {name: Fraction}; floats allowed unless ``exact``."""
    out: Dict[str, object] = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"expected name=value, got {item!r}")
        k, v = (s.strip() for s in item.split("=", 1))
        if k in out:
            raise UsageError(f"{k} bound twice")
        try:
            out[k] = Fraction(v)
        except (ValueError, ZeroDivisionError):
            if exact:
                raise UsageError(f"{k}={v} is not an exact rational") from None
            try:
                out[k] = float(v)
            except ValueError:
                raise UsageError(f"{k}={v} is not a number") from None
    return out


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _family_inputs(args):
    case = catalog.get_case(args.case)
    fam = catalog.get_family(args.case, args.family)
    params = dict(fam.default_params)
    params.update(parse_bindings(args.params, exact=False))
    constants = dict(fam.default_constants)
    constants.update(parse_bindings(args.constants, exact=False))
    return case, fam, constants, params


def _table(rows: List[List[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


# ----------------------------------------------------------------- commands

def cmd_catalog(args) -> int:
    if args.action == "list":
        entries = catalog.list_entries()
        if args.format == "json":
            _emit(args, _dumps([{"id": e.id, "H": str(e.H), "parameters": list(e.parameters)}
                                for e in entries]))
        else:
            _emit(args, _table([["id", "H", "parameters"]] + [
                [e.id, str(e.H), ",".join(e.parameters) or "-"] for e in entries]))
        return EXIT_OK
    if args.action == "dump":
        _emit(args, catalog.dump_json())
        return EXIT_OK
    constraints = parse_bindings(args.params, exact=True) or None
    entries = [catalog.get_entry(args.entry)] if args.entry else catalog.list_entries()
    reports = [catalog.verify_entry(e, constraints) for e in entries]
    if args.format == "json":
        _emit(args, _dumps([r.to_dict() for r in reports]))
    else:
        lines = []
        for r in reports:
            line = f"{r.entry_id:<28} {'PASS' if r.passed else 'FAIL'}"
            if not r.passed:
                line += f"  remainder: {r.remainder}"
            lines.append(line)
        _emit(args, "\n".join(lines))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _read_ode_file(path: str):
    text = Path(path).read_text(encoding="utf-8").strip()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            if "=" in line:
                line = line.split("=", 1)[1]
            return parse(line)
    raise UsageError(f"no equation found in {path}")


def cmd_symmetry(args) -> int:
    if bool(args.ode) == bool(args.file):
        raise UsageError("give exactly one of --ode and --file")
    if args.ode:
        entry = catalog.get_entry(args.ode)
        U, label = entry.U, entry.id
        F = parse(args.operator) if args.operator else entry.operator.characteristic
    else:
        if not args.operator:
            raise UsageError("--operator is required with --file")
        U, label, F = _read_ode_file(args.file), args.file, parse(args.operator)
    constraints = parse_bindings(args.params, exact=True) or None
    r = check_lb_symmetry(EvolutionaryField(F), U, constraints, label)
    if args.format == "json":
        _emit(args, _dumps(r.to_dict()))
    else:
        _emit(args, f"{label}: {'PASS' if r.passed else 'FAIL'}"
                    + ("" if r.passed else f"\nremainder: {r.remainder}"))
    return EXIT_OK if r.passed else EXIT_FAIL


def cmd_pde(args) -> int:
    case = catalog.get_case(args.case)
    params = parse_bindings(args.params, exact=True)
    K = case.K
    rows = []
    ok = True
    for g in case.generators:
        constraints = dict(g.constraint_map)
        if params:
            bound = {k: parse(str(v)) for k, v in params.items()}
            if not _applicable(g, bound):
                rows.append({"id": g.id, "condition": g.condition, "source": g.source,
                             "status": "not-applicable"})
                continue
            constraints = {**{k: substitute(v, bound) for k, v in constraints.items()
                              if k not in bound}, **bound}
        r = check_point_symmetry_pde(g.generator, K, constraints or None, g.id)
        ok &= r.passed
        rows.append({"id": g.id, "condition": g.condition, "source": g.source,
                     "status": "pass" if r.passed else "fail",
                     **({} if r.passed else {"remainder": str(r.remainder)})})
    if args.format == "json":
        _emit(args, _dumps({"case": case.id, "generators": rows}))
    else:
        _emit(args, "\n".join(
            f"{row['id']:<22} {row['status'].upper():<15} {row['condition']}".rstrip()
            + (f"\n    remainder: {row['remainder']}" if "remainder" in row else "")
            for row in rows))
    return EXIT_OK if ok else EXIT_FAIL


def _applicable(g, bound) -> bool:
    """False when the parameter point contradicts the generator's side condition."""
    for k, rule in g.constraint_map.items():
        if k in bound and not (substitute(rule, bound) - bound[k]).is_zero():
            return False
    return all(not substitute(e, bound).is_zero() for e in g.nonzero)


def cmd_reduce(args) -> int:
    case = catalog.get_case(args.case)
    F = parse(args.F) if args.F else case.F
    m = args.m or case.m
    system = derive_system(parse(f"kappa/x^{m}"), F, m, 1, case.id)
    matches = system.equals(case.reduction_expected) if not args.F and m == case.m else None
    if args.json or args.format == "json":
        _emit(args, json.dumps(system.to_json_obj(), indent=2))
    else:
        lines = [f"case {system.case}, m = {system.m}"]
        lines += [f"{k}' = {system.rhs[k]}" for k in ("phi2", "phi1", "phi0")]
        if matches is not None:
            lines.append(f"matches catalog system: {'yes' if matches else 'NO'}")
        _emit(args, "\n".join(lines))
    return EXIT_FAIL if matches is False else EXIT_OK


def cmd_solve(args) -> int:
    case, fam, constants, params = _family_inputs(args)
    env = resolve_params(fam, params)
    times = np.linspace(args.t0, args.t1, args.points)
    closed = np.array(eval_family(fam, constants, params, times)).T
    result = {"case": case.id, "family": fam.id}
    if args.rk45:
        traj = integrate(case.reduction_expected, env, family_ic(fam, constants, params, args.t0),
                         args.t0, args.t1, args.rtol, args.atol, t_eval=times)
        values = traj.values
        rel = float(np.max(np.abs(values - closed) / np.maximum(1.0, np.abs(closed))))
        result.update(method="rk45", max_rel_diff_closed_form=rel, accepted=traj.n_accepted,
                      rejected=traj.n_rejected, rtol=args.rtol, atol=args.atol)
        csv = traj.to_csv()
    else:
        values = closed
        from .numerics import Trajectory
        csv = Trajectory(times, values, 0.0, 0.0).to_csv()
        result.update(method="closed-form")
    if args.csv:
        Path(args.csv).write_text(csv, encoding="utf-8")
    if args.format == "csv":
        _emit(args, csv)
    elif args.format == "json":
        result["times"] = times.tolist()
        result["values"] = values.tolist()
        _emit(args, _dumps(result))
    else:
        lines = [f"{'t':>10} {'phi0':>22} {'phi1':>22} {'phi2':>22}"]
        lines += [f"{t:10.4f} " + " ".join(f"{v:22.15g}" for v in row) for t, row in zip(times, values)]
        if args.rk45:
            lines.append(f"max relative difference to closed form: {result['max_rel_diff_closed_form']:.3e}")
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_residual(args) -> int:
    from .pdecheck import Grid, convergence_ratio, residual
    case, fam, constants, params = _family_inputs(args)
    grid = Grid.parse(args.grid) if args.grid else Grid(*fam.x_window, 65)
    times = _floats(args.times)
    rep = residual(case, fam, constants, params, grid, times, exact=args.exact)
    out = {"case": case.id, "family": fam.id, **rep.to_dict()}
    if args.exact:
        ok = rep.max_abs_residual <= args.tol
        out["tolerance"] = args.tol
    else:
        r1, r2, ratio = convergence_ratio(case, fam, constants, params, grid, times)
        out.update(max_residual_h2=r2, convergence_ratio=ratio)
        ok = 3.2 <= ratio <= 4.8
    out["passed"] = ok
    if args.csv:
        Path(args.csv).write_text(rep.to_csv(), encoding="utf-8")
    if args.format == "csv":
        _emit(args, rep.to_csv())
    elif args.format == "json":
        _emit(args, _dumps(out))
    else:
        line = f"{case.id}/{fam.id} {rep.mode}: max |residual| = {rep.max_abs_residual:.3e}"
        if not args.exact:
            line += f", ratio h/(h/2) = {out['convergence_ratio']:.3f}"
        _emit(args, f"{line}  {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_mol(args) -> int:
    from .pdecheck import Grid, NegativeSolution, mol_validate
    case, fam, constants, params = _family_inputs(args)
    grid = Grid.parse(args.grid) if args.grid else Grid(*fam.x_window, 201)
    try:
        out = mol_validate(case, fam, constants, params, grid, args.t1, args.t0,
                           rtol=args.rtol, atol=args.atol)
    except NegativeSolution as exc:
        if float(Fraction(str(params.get("kappa", 0)))) > 0:
            raise NegativeSolution(f"{exc}; kappa > 0 gives a negative diffusion coefficient "
                                   f"-kappa/(x^m u^2), pass --params with kappa < 0", exc.t) from exc
        raise
    ok = out["rel_linf_error"] <= args.tol
    out.update(tolerance=args.tol, passed=ok)
    if args.format == "json":
        _emit(args, _dumps(out))
    else:
        _emit(args, f"{case.id}/{fam.id} MOL nx={grid.nx} t1={args.t1}: relative Linf error "
                    f"{out['rel_linf_error']:.3e}  {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_invariance(args) -> int:
    from .invariance import AnsatzSolution, conditions_hold, invariance_test
    case, fam, constants, params = _family_inputs(args)
    sol = AnsatzSolution.from_family(case, fam, constants, params)
    if args.generators:
        gens = [case.generator(g.strip()) for g in args.generators.split(",")]
    else:
        # verified generators whose side conditions hold at these parameters
        gens = []
        for g in case.generators:
            if not conditions_hold(g, sol.params):
                continue
            if check_point_symmetry_pde(g.generator, case.K, g.constraint_map or None).passed:
                gens.append(g)
    rep = invariance_test(sol, gens, args.samples, args.seed, args.threshold)
    ok = args.expect is None or rep.verdict == args.expect
    if args.format == "json":
        _emit(args, rep.to_json())
    else:
        lines = [f"{case.id}/{fam.id} over {{{', '.join(rep.generators)}}}: {rep.verdict}",
                 "singular values: " + " ".join(f"{s:.3e}" for s in rep.singular_values)]
        for k in rep.kernel:
            lines.append("kernel: " + " ".join(f"{c:+.6g}*{n}" for c, n in zip(k, rep.generators)))
        _emit(args, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


# ----------------------------------------------------------------- parser

def _common(p, fmt=("text", "json")):
    p.add_argument("--format", choices=fmt, help=f"output format (default: {DEFAULTS['format']})")
    p.add_argument("--output", help="write output to this file instead of stdout")


def _family_opts(p):
    p.add_argument("--case", required=True, help="PDE case id (A, B, C, D)")
    p.add_argument("--family", required=True, help="solution family id within the case")
    p.add_argument("--params", help="parameters k=v,... (default: the family's catalog defaults)")
    p.add_argument("--constants", help="integration constants c0=..,c1=.. (default: catalog defaults)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="symred", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key=value file with the same keys as the flags; flags win")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("catalog", help="list, dump or verify the ODE catalog")
    c.add_argument("action", choices=["list", "dump", "verify"])
    c.add_argument("--entry", help="verify only this entry (appendix id, kappa_over_x or kappa_over_x2)")
    c.add_argument("--params", help="exact rational parameter bindings k=v,... applied before deciding")
    _common(c)
    c.set_defaults(func=cmd_catalog)

    s = sub.add_parser("symmetry", help="Lie-Baecklund symmetry check F d/du of u_xxx = U")
    s.add_argument("action", choices=["check"])
    s.add_argument("--ode", help="catalog entry id")
    s.add_argument("--file", help="file holding U (one line, optionally 'u3 = ...')")
    s.add_argument("--operator", help="characteristic F (default with --ode: the entry's (H/u)_xx)")
    s.add_argument("--params", help="exact rational parameter bindings")
    _common(s)
    s.set_defaults(func=cmd_symmetry)

    d = sub.add_parser("pde", help="verify a case's point-symmetry classification")
    d.add_argument("action", choices=["classify-verify"])
    d.add_argument("--case", required=True)
    d.add_argument("--params", help="exact rational parameter point; generators whose side "
                                    "condition contradicts it are reported not-applicable")
    _common(d)
    d.set_defaults(func=cmd_pde)

    r = sub.add_parser("reduce", help="derive the reduction system of a case")
    r.add_argument("--case", required=True)
    r.add_argument("--json", action="store_true", help="print the system as JSON")
    r.add_argument("--F", help="override the case's F terms")
    r.add_argument("--m", type=int, choices=[1, 2], help="override the exponent in H = kappa/x^m")
    _common(r)
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("solve", help="evaluate a solution family, optionally against RK45")
    _family_opts(v)
    v.add_argument("--t0", type=float, help=f"start time (default: {DEFAULTS['t0']})")
    v.add_argument("--t1", type=float, help=f"end time (default: {DEFAULTS['t1']})")
    v.add_argument("--points", type=int, help=f"output times (default: {DEFAULTS['points']})")
    v.add_argument("--rk45", action="store_true", help="integrate the reduction system from phi(t0)")
    v.add_argument("--rtol", type=float, help=f"relative tolerance (default: {DEFAULTS['rtol']:g})")
    v.add_argument("--atol", type=float, help=f"absolute tolerance (default: {DEFAULTS['atol']:g})")
    v.add_argument("--csv", help="also write the trajectory CSV (t,phi0,phi1,phi2) here")
    _common(v, ("text", "json", "csv"))
    v.set_defaults(func=cmd_solve)

    e = sub.add_parser("residual", help="PDE residual of a family on a grid")
    _family_opts(e)
    e.add_argument("--grid", help="x0,x1,nx (default: the family window with 65 points)")
    e.add_argument("--times", help=f"comma-separated times (default: {DEFAULTS['times']})")
    e.add_argument("--exact", action="store_true", help="analytic spatial derivatives")
    e.add_argument("--tol", type=float, help=f"exact-mode tolerance (default: {DEFAULTS['exact_tol']:g})")
    e.add_argument("--csv", help="write x,t,u,residual CSV here")
    _common(e, ("text", "json", "csv"))
    e.set_defaults(func=cmd_residual)

    m = sub.add_parser("mol", help="method-of-lines cross-validation of a family")
    _family_opts(m)
    m.add_argument("--grid", help="x0,x1,nx (default: the family window with 201 points)")
    m.add_argument("--t0", type=float, help=f"start time (default: {DEFAULTS['t0']})")
    m.add_argument("--t1", type=float, required=False, help="horizon (default: 0.25)")
    m.add_argument("--rtol", type=float, help=f"relative tolerance (default: {DEFAULTS['mol_rtol']:g})")
    m.add_argument("--atol", type=float, help=f"absolute tolerance (default: {DEFAULTS['mol_atol']:g})")
    m.add_argument("--tol", type=float, help=f"pass threshold on relative Linf error (default: {DEFAULTS['mol_tol']:g})")
    _common(m)
    m.set_defaults(func=cmd_mol)

    i = sub.add_parser("invariance", help="classical-invariance rank test of a family")
    _family_opts(i)
    i.add_argument("--generators", help="generator ids (default: verified generators whose side "
                                        "conditions hold)")
    i.add_argument("--samples", type=int, help=f"sample points (default: {DEFAULTS['samples']})")
    i.add_argument("--seed", type=int, help=f"random seed (default: {DEFAULTS['seed']})")
    i.add_argument("--threshold", type=float,
                   help=f"kernel threshold relative to the largest singular value (default: {DEFAULTS['threshold']:g})")
    i.add_argument("--expect", choices=["strictly-non-invariant", "invariant-along"],
                   help="exit 1 unless the verdict matches")
    _common(i)
    i.set_defaults(func=cmd_invariance)
    return p


_PER_COMMAND_DEFAULTS = {
    "mol": {"t1": 0.25, "rtol": DEFAULTS["mol_rtol"], "atol": DEFAULTS["mol_atol"], "tol": DEFAULTS["mol_tol"]},
    "residual": {"tol": DEFAULTS["exact_tol"]},
}


def _read_config(path: str) -> Dict[str, str]:
    cfg = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        cfg[k.replace("-", "_")] = v
    return cfg


def _apply_defaults(parser, args) -> None:
    cfg = _read_config(args.config) if args.config else {}
    actions = {a.dest: a for sp in parser._subparsers._group_actions
               for name, sub in sp.choices.items() if name == args.command for a in sub._actions}
    for k, v in cfg.items():
        if k not in actions:
            raise UsageError(f"unknown config key {k!r} for {args.command}")
        if getattr(args, k, None) in (None, False):
            a = actions[k]
            if a.nargs == 0:
                setattr(args, k, v.lower() in ("1", "true", "yes"))
            else:
                try:
                    setattr(args, k, a.type(v) if a.type else v)
                except ValueError:
                    raise UsageError(f"bad value for config key {k}: {v!r}") from None
    merged = {**DEFAULTS, **_PER_COMMAND_DEFAULTS.get(args.command, {})}
    for k, v in merged.items():
        if hasattr(args, k) and getattr(args, k) is None:
            setattr(args, k, v)


def dispatch(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        _apply_defaults(parser, args)
        return args.func(args)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    except catalog.UnknownIdError as exc:
        return _fail("unknown-id", str(exc), EXIT_USAGE)
    except ParseError as exc:
        return _fail("parse", str(exc), EXIT_USAGE)
    except ValidityViolation as exc:
        return _fail("validity", str(exc), EXIT_USAGE)
    except StepSizeUnderflow as exc:
        return _fail("blow-up", str(exc), EXIT_FAIL)
    except ReductionError as exc:
        return _fail("reduction", f"{type(exc).__name__}: {exc}", EXIT_FAIL)
    except (IntegrationError, RuntimeError) as exc:
        return _fail("numeric", str(exc), EXIT_FAIL)
    except (ExprError, ValueError) as exc:
        return _fail("input", str(exc), EXIT_USAGE)


def _fail(code: str, message: str, status: int) -> int:
    sys.stderr.write(f"ERROR {code}: {message}\n")
    return status


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
