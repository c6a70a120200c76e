"""Closed-form solution families and numeric integration of reduction systems."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..expr import Expr, eval_numeric, lambdify, substitute
from .rk import ATOL, RTOL, Trajectory, dopri5

PHI = ("phi0", "phi1", "phi2")


class ValidityViolation(ValueError):
    """A family's validity predicate fails for the given data."""

    def __init__(self, message: str, predicate: str = ""):
        super().__init__(message)
        self.predicate = predicate


def as_number(v):
    """Exact rationals stay exact, everything else becomes binary64."""
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except ValueError:
            return float(v)
    return float(v)


@lru_cache(maxsize=None)
def _phi_exprs(fam) -> Tuple[Expr, Expr, Expr]:
    cons = fam.constraint_map
    return tuple(substitute(fam.phi_map[p], cons) if cons else fam.phi_map[p] for p in PHI)


def family_phi(fam) -> Dict[str, Expr]:
    """The family's phi triple with its parameter constraints applied."""
    return dict(zip(PHI, _phi_exprs(fam)))


def resolve_params(fam, params: Mapping[str, object]) -> Dict[str, float]:
    """Numeric parameter environment with the family's constraints enforced.

    A constrained parameter may be omitted; if given it must agree with the
    constraint.
    """
    env = {k: float(as_number(v)) for k, v in params.items()}
    for name, rule in fam.constraints:
        val = float(eval_numeric(rule, env))
        if name in env and not np.isclose(env[name], val, rtol=1e-12, atol=1e-14):
            raise ValidityViolation(
                f"family {fam.key} requires {name} = {rule} (= {val!r}), got {env[name]!r}",
                f"{name} = {rule}")
        env[name] = val
    return env


def check_validity(fam, constants: Mapping[str, object], params: Mapping[str, object]) -> Dict[str, float]:
    env = resolve_params(fam, params)
    for c in fam.constants:
        if c not in constants:
            raise ValidityViolation(f"missing integration constant {c!r}", c)
        env[c] = float(as_number(constants[c]))
    for p in fam.positive:
        if not eval_numeric(p, env) > 0:
            raise ValidityViolation(f"family {fam.key} requires {p} > 0", f"{p} > 0")
    for p in fam.nonzero:
        if eval_numeric(p, env) == 0:
            raise ValidityViolation(f"family {fam.key} requires {p} != 0", f"{p} != 0")
    return env


def eval_family(fam, constants: Mapping[str, object], params: Mapping[str, object], t):
    """(phi0, phi1, phi2) at time(s) t."""
    env = check_validity(fam, constants, params)
    env["t"] = np.asarray(t, dtype=float) if np.ndim(t) else float(t)
    cache: dict = {}
    out = []
    for p, e in zip(PHI, _phi_exprs(fam)):
        v = eval_numeric(e, env) if not e.is_constant() else float(e.constant_value())
        v = np.broadcast_to(v, np.shape(env["t"])).astype(float) if np.ndim(t) else float(v)
        if not np.all(np.isfinite(v)):
            raise ValidityViolation(f"{p} is not finite in family {fam.key}", p)
        out.append(v)
    return tuple(out)


def family_evaluator(fam, constants: Mapping[str, object], params: Mapping[str, object]):
    """Validate once and return t -> (phi0, phi1, phi2) for repeated calls."""
    env = check_validity(fam, constants, params)
    names = ["t", *env]
    values = list(env.values())
    fns = [lambdify(e, names) for e in _phi_exprs(fam)]

    def phi(t):
        return tuple(float(f(t, *values)) for f in fns)

    return phi


def family_ic(fam, constants, params, t0: float = 0.0) -> Tuple[float, float, float]:
    """Initial data phi(t0) shared by the closed form and the integrator."""
    return tuple(float(v) for v in eval_family(fam, constants, params, t0))


def system_rhs(system, params: Mapping[str, object]):
    """Vectorized right-hand side f(t, phi) of a ReductionSystem."""
    env = {k: float(as_number(v)) for k, v in params.items() if k not in PHI and k != "t"}
    names = ["t", *PHI, *env]
    values = list(env.values())
    fns = [lambdify(system.rhs[p], names) for p in PHI]

    def f(t, y):
        return np.array([fn(t, y[0], y[1], y[2], *values) for fn in fns], dtype=float)

    return f


def integrate(system, params: Mapping[str, object], ic: Sequence[float], t0: float, t1: float,
              rtol: float = RTOL, atol: float = ATOL,
              t_eval: Optional[Sequence[float]] = None) -> Trajectory:
    """Integrate phi' = R(phi) with Dormand-Prince 5(4)."""
    return dopri5(system_rhs(system, params), t0, ic, t1, rtol, atol, t_eval)


def family_defect(fam, system, constants, params, times, step: float = 1e-4) -> float:
    """max_nu |d/dt phi_nu - R_nu(phi)| / (1 + |R_nu|) over ``times``.

    d/dt is the five-point central difference with the given step.
    """
    times = np.asarray(times, dtype=float)
    env = resolve_params(fam, params)
    f = system_rhs(system, env)
    shifts = {k: np.array(eval_family(fam, constants, params, times + k * step)) for k in (-2, -1, 1, 2)}
    dphi = (shifts[-2] - 8 * shifts[-1] + 8 * shifts[1] - shifts[2]) / (12 * step)
    phi = np.array(eval_family(fam, constants, params, times))
    R = np.array([f(t, phi[:, j]) for j, t in enumerate(times)]).T
    return float(np.max(np.abs(dphi - R) / (1 + np.abs(R))))
