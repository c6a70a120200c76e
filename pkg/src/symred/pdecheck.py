"""Residual checks of closed-form solutions against u_t = (H/u)_xx + F, and a
method-of-lines integrator used as an independent oracle."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Optional, Sequence, Tuple

import numpy as np

from .expr import Expr, differentiate, eval_numeric, lambdify, symbol
from .numerics import StepSizeUnderflow, ValidityViolation, dopri5, eval_family, family_evaluator, resolve_params, system_rhs
from .numerics.families import PHI, as_number
from .reduction import Ansatz


class PoleOnGrid(ValueError):
    pass


class NegativeSolution(RuntimeError):
    """u <= 0 was reached during method-of-lines integration."""

    def __init__(self, message: str, t: float):
        super().__init__(message)
        self.t = t


@dataclass(frozen=True)
class Grid:
    x0: float
    x1: float
    nx: int

    def __post_init__(self):
        if not 0 < self.x0 < self.x1:
            raise ValueError(f"grid needs 0 < x0 < x1, got [{self.x0}, {self.x1}]")
        if self.nx < 16:
            raise ValueError(f"grid needs at least 16 points, got {self.nx}")

    @property
    def h(self) -> float:
        return (self.x1 - self.x0) / (self.nx - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.nx)

    def refined(self) -> "Grid":
        """Same interval with half the spacing."""
        return Grid(self.x0, self.x1, 2 * self.nx - 1)

    @classmethod
    def parse(cls, text: str) -> "Grid":
        x0, x1, nx = text.split(",")
        return cls(float(x0), float(x1), int(nx))


@dataclass
class ResidualReport:
    x: np.ndarray
    times: np.ndarray
    u: np.ndarray
    residual: np.ndarray
    h: float
    mode: str

    @property
    def max_abs_residual(self) -> float:
        return float(np.max(np.abs(self.residual[np.isfinite(self.residual)])))

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("x,t,u,residual\n")
        for j, t in enumerate(self.times):
            for i, x in enumerate(self.x):
                r = self.residual[j, i]
                if np.isfinite(r):
                    out.write(f"{x:.17g},{t:.17g},{self.u[j, i]:.17g},{r:.17g}\n")
        return out.getvalue()

    def to_dict(self) -> dict:
        return {"mode": self.mode, "h": self.h, "times": self.times.tolist(),
                "max_abs_residual": self.max_abs_residual}


def _case_params(case, fam, params) -> dict:
    env = resolve_params(fam, params) if fam is not None else {
        k: float(as_number(v)) for k, v in params.items()}
    missing = [p for p in case.parameters if p not in env]
    if missing:
        raise ValueError(f"missing parameters for case {case.id}: {', '.join(missing)}")
    return env


@lru_cache(maxsize=None)
def _ansatz_jets(m: int, sign: int) -> Tuple[Expr, Expr, Expr]:
    u = Ansatz(m, sign).u
    u1 = differentiate(u, "x")
    return u, u1, differentiate(u1, "x")


def solution_fields(case, fam, constants, params, x, t, sign: int = 1):
    """u, u_x, u_xx and u_t of the family on the ansatz, all analytic.

    u_t goes through phi' = R(phi) using the case's reduction system.
    """
    env = _case_params(case, fam, params)
    phi = eval_family(fam, constants, params, t)
    x = np.asarray(x, dtype=float)
    v = phi[2] * x ** 2 + phi[1] * x + phi[0]
    if np.any(v < 0):
        raise ValidityViolation(f"radicand phi2*x^2 + phi1*x + phi0 < 0 at t={t}", "v > 0")
    if np.any(np.abs(v) < 1e-300):
        raise PoleOnGrid(f"radicand vanishes on the grid at t={t}")
    dphi = system_rhs(case.reduction_expected, env)(t, np.array(phi, dtype=float))
    u = sign / (x ** case.m * np.sqrt(v))
    jenv = dict(zip(PHI, phi))
    jenv["x"] = x
    _, e1, e2 = _ansatz_jets(case.m, sign)
    u1 = eval_numeric(e1, jenv)
    u2 = eval_numeric(e2, jenv)
    vt = dphi[2] * x ** 2 + dphi[1] * x + dphi[0]
    ut = -0.5 * u * vt / v
    return u, u1, u2, ut, env


def pointwise_residual(case, params: Mapping, x, u, ux, uxx, ut):
    """u_t - K(x, u, u_x, u_xx) for a profile given with its derivatives."""
    env = {k: float(as_number(v)) for k, v in params.items()}
    return ut - _spatial_exact(case, env, np.asarray(x, dtype=float), u, ux, uxx)


def _spatial_exact(case, env, x, u, u1, u2):
    e = dict(env)
    e.update(x=x, u=u, u1=u1, u2=u2)
    return eval_numeric(case.K, e)


def _spatial_fd(case, env, x, u, h):
    """Second-order central differences; endpoints are NaN."""
    e = dict(env)
    w = eval_numeric(case.H / symbol("u"), {**e, "x": x, "u": u})
    out = np.full_like(u, np.nan)
    ux = (u[2:] - u[:-2]) / (2 * h)
    wxx = (w[2:] - 2 * w[1:-1] + w[:-2]) / h ** 2
    e.update(x=x[1:-1], u=u[1:-1], u1=ux)
    out[1:-1] = wxx + eval_numeric(case.F, e)
    return out


def residual(case, fam, constants: Mapping, params: Mapping, grid: Grid, times: Sequence[float],
             exact: bool = False, sign: int = 1) -> ResidualReport:
    """u_t - (H/u)_xx - F on grid x times.

    u_t is analytic (through the reduction system).  Spatial terms use
    central differences unless ``exact`` is set.
    """
    x = grid.x
    times = np.asarray(list(times), dtype=float)
    U = np.empty((times.size, x.size))
    Rs = np.empty_like(U)
    for j, t in enumerate(times):
        u, u1, u2, ut, env = solution_fields(case, fam, constants, params, x, float(t), sign)
        spatial = _spatial_exact(case, env, x, u, u1, u2) if exact else _spatial_fd(case, env, x, u, grid.h)
        U[j] = u
        Rs[j] = ut - spatial
    return ResidualReport(x, times, U, Rs, grid.h, "exact" if exact else "fd")


def convergence_ratio(case, fam, constants, params, grid: Grid, times) -> Tuple[float, float, float]:
    """(max residual at h, at h/2, ratio)."""
    r1 = residual(case, fam, constants, params, grid, times).max_abs_residual
    r2 = residual(case, fam, constants, params, grid.refined(), times).max_abs_residual
    return r1, r2, r1 / r2


def exact_profile(case, fam, constants, params, x, t, sign: int = 1) -> np.ndarray:
    phi = eval_family(fam, constants, params, t)
    v = phi[2] * x ** 2 + phi[1] * x + phi[0]
    if np.any(v <= 0):
        raise ValidityViolation(f"radicand not positive at t={t}", "v > 0")
    return sign / (x ** case.m * np.sqrt(v))


def mol_integrate(case, params: Mapping, u0, grid: Grid, t0: float, t1: float,
                  boundary: Callable[[float], Tuple[float, float]],
                  rtol: float = 1e-8, atol: float = 1e-10, max_steps: int = 2_000_000) -> np.ndarray:
    """Method of lines for u_t = (H/u)_xx + F with Dirichlet data from ``boundary``.

    Returns the profile at t1 (boundary points included).
    """
    env = {k: float(as_number(v)) for k, v in params.items()}
    x = grid.x
    h = grid.h
    u0 = np.asarray(u0, dtype=float)
    if u0.shape != x.shape:
        raise ValueError("u0 must be sampled on the grid")
    if np.any(u0 <= 0):
        raise NegativeSolution("initial profile must be strictly positive", t0)
    Hx = eval_numeric(case.H, {**env, "x": x})
    Hx = np.broadcast_to(np.asarray(Hx, dtype=float), x.shape)
    F_zero = case.F.is_zero()
    Fn = lambdify(case.F, ["x", "u", "u1", *env])
    pvals = list(env.values())
    xi = x[1:-1]
    full = np.empty_like(x)

    def rhs(t, y):
        if np.any(y <= 0):
            # trial stage left the model's domain; the step is rejected
            return np.full_like(y, np.nan)
        full[0], full[-1] = boundary(t)
        full[1:-1] = y
        w = Hx / full
        out = (w[2:] - 2 * w[1:-1] + w[:-2]) / h ** 2
        if not F_zero:
            out = out + Fn(xi, y, (full[2:] - full[:-2]) / (2 * h), *pvals)
        return out

    try:
        traj = dopri5(rhs, t0, u0[1:-1], t1, rtol, atol, t_eval=[t1], max_steps=max_steps,
                      labels=[f"u{i}" for i in range(1, x.size - 1)])
    except StepSizeUnderflow as exc:
        raise NegativeSolution(f"integration collapsed at t={exc.t_last} (u <= 0 or blow-up)",
                               exc.t_last) from exc
    result = np.empty_like(x)
    result[0], result[-1] = boundary(t1)
    result[1:-1] = traj.final
    if np.any(result <= 0):
        raise NegativeSolution(f"u <= 0 at t={t1}", t1)
    return result


def mol_validate(case, fam, constants, params, grid: Grid, t1: float, t0: float = 0.0, **kw) -> dict:
    """Integrate exact initial data and compare with the closed form at t1."""
    x = grid.x
    phi = family_evaluator(fam, constants, params)
    ends = np.array([x[0], x[-1]])

    def boundary(t):
        p0, p1, p2 = phi(t)
        u = 1.0 / (ends ** case.m * np.sqrt(p2 * ends ** 2 + p1 * ends + p0))
        return float(u[0]), float(u[1])

    env = _case_params(case, fam, params)
    u0 = exact_profile(case, fam, constants, params, x, t0)
    u1 = mol_integrate(case, env, u0, grid, t0, t1, boundary, **kw)
    ex = exact_profile(case, fam, constants, params, x, t1)
    err = float(np.max(np.abs(u1 - ex)) / np.max(np.abs(ex)))
    return {"case": case.id, "family": fam.id, "nx": grid.nx, "t1": t1, "rel_linf_error": err}


def convergence_json(case, fam, constants, params, grid: Grid, times) -> str:
    r1, r2, ratio = convergence_ratio(case, fam, constants, params, grid, times)
    return json.dumps({"case": case.id, "family": fam.id, "h": grid.h, "max_residual_h": r1,
                       "max_residual_h2": r2, "ratio": ratio}, indent=2)
