"""Numeric rank test for classical invariance of ansatz solutions.

A solution u(x, t) is invariant under sum_i alpha_i X_i iff the invariant
surface conditions Q_i = eta_i - xi_i u_x - tau_i u_t, evaluated on the
solution, are linearly dependent as functions of (x, t).  Sampling them at
random points and taking an SVD turns that into a rank decision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .expr import ExprError, eval_numeric, lambdify
from .jet import PointGenerator
from .numerics import ValidityViolation, family_evaluator, resolve_params, system_rhs
from .numerics.families import as_number

THRESHOLD = 1e-8
SAMPLES = 50
MAX_RESAMPLES = 5

NON_INVARIANT = "strictly-non-invariant"
INVARIANT = "invariant-along"


class DegenerateSampling(RuntimeError):
    pass


class GeneratorConditionError(ValueError):
    pass


@dataclass
class AnsatzSolution:
    """u = sign * x^-m (phi2 x^2 + phi1 x + phi0)^(-1/2) with phi(t) supplied."""

    case: object
    params: Mapping[str, float]
    phi: Callable[[float], Tuple[float, float, float]]
    x_window: Tuple[float, float] = (1.0, 2.0)
    t_window: Tuple[float, float] = (0.0, 0.5)
    sign: int = 1
    label: str = ""

    @classmethod
    def from_family(cls, case, fam, constants, params, sign: int = 1) -> "AnsatzSolution":
        env = resolve_params(fam, params)
        return cls(case, env, family_evaluator(fam, constants, params), fam.x_window, fam.t_window,
                   sign, fam.key)

    def fields(self, x: float, t: float) -> Tuple[float, float, float]:
        """(u, u_x, u_t); u_t via phi' = R(phi)."""
        p0, p1, p2 = self.phi(t)
        d0, d1, d2 = self._rhs(t, np.array([p0, p1, p2]))
        v = p2 * x * x + p1 * x + p0
        if not v > 0:
            raise ValidityViolation(f"radicand not positive at x={x}, t={t}", "v > 0")
        m = self.case.m
        u = self.sign / (x ** m * np.sqrt(v))
        ux = u * (-m / x - (2 * p2 * x + p1) / (2 * v))
        ut = -0.5 * u * (d2 * x * x + d1 * x + d0) / v
        return float(u), float(ux), float(ut)

    @property
    def _rhs(self):
        f = self.__dict__.get("_rhs_cache")
        if f is None:
            f = system_rhs(self.case.reduction_expected, self.params)
            self.__dict__["_rhs_cache"] = f
        return f


@dataclass
class InvarianceReport:
    generators: List[str]
    points: np.ndarray
    singular_values: np.ndarray
    kernel: np.ndarray
    threshold: float
    seed: int

    @property
    def verdict(self) -> str:
        return INVARIANT if self.kernel.size else NON_INVARIANT

    @property
    def invariant(self) -> bool:
        return bool(self.kernel.size)

    def to_dict(self) -> dict:
        d = {"verdict": self.verdict, "generators": list(self.generators),
             "samples": int(len(self.points)), "seed": self.seed, "threshold": self.threshold,
             "singular_values": [float(s) for s in self.singular_values],
             "kernel": [[float(c) for c in k] for k in self.kernel]}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _check_conditions(gen, params: Mapping[str, float]) -> None:
    constraints = getattr(gen, "constraint_map", None) or {}
    for name, rule in constraints.items():
        want = float(eval_numeric(rule, params))
        have = params.get(name)
        if have is None or not np.isclose(have, want, rtol=1e-12, atol=1e-14):
            raise GeneratorConditionError(
                f"generator {gen.id} requires {name} = {rule}, parameters give {have!r}")
    for e in getattr(gen, "nonzero", ()):
        if float(eval_numeric(e, params)) == 0:
            raise GeneratorConditionError(f"generator {gen.id} requires {e} != 0")


def conditions_hold(gen, params: Mapping[str, float]) -> bool:
    try:
        _check_conditions(gen, params)
    except (GeneratorConditionError, ExprError):
        return False
    return True


def _as_point_generator(g) -> PointGenerator:
    return g.generator if hasattr(g, "generator") else g


def invariance_test(solution: AnsatzSolution, generators: Sequence, samples: int = SAMPLES,
                    seed: int = 0, threshold: float = THRESHOLD) -> InvarianceReport:
    """Rank test of [Q_i(x_p, t_p)] for the given generators.

    ``generators`` holds PointGenerator or catalog CaseGenerator records; the
    latter have their parameter side conditions checked first.  Columns are
    scaled to unit norm before the SVD.
    """
    if not generators:
        raise ValueError("at least one generator is required")
    params = {k: float(v) for k, v in solution.params.items()}
    for g in generators:
        if hasattr(g, "generator"):
            _check_conditions(g, params)
    pgs = [_as_point_generator(g) for g in generators]
    names = ["x", "t", "u", *params]
    pvals = list(params.values())
    comp = [[lambdify(e, names) for e in (g.xi, g.tau, g.eta)] for g in pgs]

    rng = np.random.default_rng(seed)
    rows, pts = [], []
    attempts = 0
    while len(rows) < samples:
        if attempts > MAX_RESAMPLES:
            raise DegenerateSampling(
                f"only {len(rows)} of {samples} sample points were usable after {MAX_RESAMPLES} resamplings")
        need = samples - len(rows)
        xs = rng.uniform(*solution.x_window, size=need)
        ts = rng.uniform(*solution.t_window, size=need)
        for x, t in zip(xs, ts):
            try:
                u, ux, ut = solution.fields(float(x), float(t))
                row = []
                for fxi, ftau, feta in comp:
                    xi, tau, eta = (float(f(x, t, u, *pvals)) for f in (fxi, ftau, feta))
                    row.append(eta - xi * ux - tau * ut)
            except (ValidityViolation, ExprError, ZeroDivisionError, FloatingPointError):
                continue
            if all(np.isfinite(row)):
                rows.append(row)
                pts.append((float(x), float(t)))
        attempts += 1
    M = np.array(rows)
    norms = np.linalg.norm(M, axis=0)
    scale = np.where(norms > 0, norms, 1.0)
    _, s, vt = np.linalg.svd(M / scale, full_matrices=False)
    smax = s[0] if s.size else 0.0
    small = s <= threshold * smax if smax > 0 else np.ones_like(s, dtype=bool)
    kernel = vt[small] / scale
    kernel = np.array([k / k[np.argmax(np.abs(k))] for k in kernel]).reshape(-1, len(pgs))
    return InvarianceReport([g.name or f"G{i + 1}" for i, g in enumerate(pgs)], np.array(pts), s,
                            kernel, threshold, seed)
