"""Adaptive Dormand-Prince 5(4) integrator with cubic Hermite dense output."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

RTOL = 1e-10
ATOL = 1e-12

# Butcher tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B - _B4


class IntegrationError(RuntimeError):
    pass


class StepSizeUnderflow(IntegrationError):
    """Step size fell below round-off level, typically at a finite-time blow-up."""

    def __init__(self, message: str, t_last: float):
        super().__init__(message)
        self.t_last = t_last


@dataclass
class Trajectory:
    times: np.ndarray
    values: np.ndarray
    rtol: float
    atol: float
    n_accepted: int = 0
    n_rejected: int = 0
    n_evals: int = 0
    labels: Sequence[str] = ("phi0", "phi1", "phi2")

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)

    @property
    def final(self) -> np.ndarray:
        return self.values[-1]

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(",".join(["t", *self.labels]) + "\n")
        for t, row in zip(self.times, self.values):
            out.write(",".join(format(float(v), ".17g") for v in (t, *row)) + "\n")
        return out.getvalue()

    def to_dict(self) -> dict:
        return {"rtol": self.rtol, "atol": self.atol, "accepted": self.n_accepted,
                "rejected": self.n_rejected, "evaluations": self.n_evals,
                "times": self.times.tolist(), "values": self.values.tolist()}


def _initial_step(f, t0, y0, f0, direction, rtol, atol):
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + direction * h0 * f0
    f1 = f(t0 + direction * h0, y1)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1)


def _hermite(t, t0, t1, y0, y1, f0, f1):
    h = t1 - t0
    s = (t - t0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def dopri5(f: Callable[[float, np.ndarray], np.ndarray], t0: float, y0, t1: float,
           rtol: float = RTOL, atol: float = ATOL, t_eval: Optional[Sequence[float]] = None,
           max_steps: int = 1_000_000, h0: Optional[float] = None,
           labels: Sequence[str] = ("phi0", "phi1", "phi2")) -> Trajectory:
    """Integrate y' = f(t, y) from t0 to t1.

    With ``t_eval`` the trajectory holds dense-output values at those times,
    otherwise every accepted step.  Raises StepSizeUnderflow when the step
    collapses (blow-up) and IntegrationError when ``max_steps`` is exceeded.
    """
    y = np.array(y0, dtype=float)
    if not np.all(np.isfinite(y)):
        raise IntegrationError("non-finite initial data")
    direction = 1.0 if t1 >= t0 else -1.0
    span = abs(t1 - t0)
    if t_eval is not None:
        t_eval = np.asarray(t_eval, dtype=float)
        if np.any(direction * np.diff(t_eval) <= 0):
            raise ValueError("t_eval must be strictly monotone in the direction of integration")
        if t_eval.size and (direction * (t_eval[0] - t0) < 0 or direction * (t_eval[-1] - t1) > 0):
            raise ValueError("t_eval outside the integration interval")
    n_eval = 0

    def F(t, yy):
        nonlocal n_eval
        n_eval += 1
        return np.asarray(f(t, yy), dtype=float)

    t = float(t0)
    fy = F(t, y)
    times, values = [t], [y.copy()]
    out_t, out_y, k_out = [], [], 0
    if t_eval is not None:
        while k_out < len(t_eval) and t_eval[k_out] == t0:
            out_t.append(t0)
            out_y.append(y.copy())
            k_out += 1
    if span == 0:
        return _finish(t_eval, out_t, out_y, times, values, rtol, atol, 0, 0, n_eval, labels)
    h = h0 if h0 else _initial_step(F, t, y, fy, direction, rtol, atol)
    h = min(h, span)
    accepted = rejected = 0
    K = np.empty((7, y.size))
    while direction * (t1 - t) > 0:
        if accepted + rejected > max_steps:
            raise IntegrationError(f"maximum number of steps exceeded at t={t}")
        hmin = 16 * np.finfo(float).eps * max(abs(t), 1.0)
        if h < hmin:
            raise StepSizeUnderflow(f"step size underflow at t={t!r} (possible blow-up)", t)
        last = h >= abs(t1 - t)
        if last:
            h = abs(t1 - t)
        hs = direction * h
        K[0] = fy
        for i in range(1, 7):
            yi = y + hs * (np.asarray(_A[i]) @ K[:i])
            K[i] = F(t + _C[i] * hs, yi)
        y_new = y + hs * (_B @ K)
        if not np.all(np.isfinite(y_new)):
            rejected += 1
            h *= 0.2
            continue
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(float(np.mean((hs * (_E @ K) / scale) ** 2)))
        if err <= 1.0:
            t_new = t1 if last else t + hs
            f_new = K[6].copy()
            if t_eval is not None:
                while k_out < len(t_eval) and direction * (t_eval[k_out] - t_new) <= 0:
                    out_t.append(t_eval[k_out])
                    out_y.append(_hermite(t_eval[k_out], t, t_new, y, y_new, fy, f_new))
                    k_out += 1
            t, y, fy = t_new, y_new, f_new
            times.append(t)
            values.append(y.copy())
            accepted += 1
            fac = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
            h = h * fac
        else:
            rejected += 1
            h = h * max(0.2, 0.9 * err ** -0.2)
    return _finish(t_eval, out_t, out_y, times, values, rtol, atol, accepted, rejected, n_eval, labels)


def _finish(t_eval, out_t, out_y, times, values, rtol, atol, acc, rej, nev, labels):
    if t_eval is not None:
        times, values = out_t, out_y
    vals = np.array(values, dtype=float).reshape(len(times), -1)
    return Trajectory(np.array(times), vals, rtol, atol, acc, rej, nev, tuple(labels))
