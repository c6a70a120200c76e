"""Special functions needed by the closed-form solutions."""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp


class SpecialDomainError(ValueError):
    pass


def E1(x: float) -> float:
    """Exponential integral E1(x) = Gamma(0, x) for x > 0."""
    if not x > 0:
        raise SpecialDomainError(f"E1 requires x > 0, got {x!r}")
    return float(_sp.exp1(x))


_SCALAR = {
    "erf": math.erf,
    "tanh": math.tanh,
    "exp": math.exp,
    "E1": E1,
}


def special(f: str, x: float) -> float:
    try:
        fn = _SCALAR[f]
    except KeyError:
        raise ValueError(f"unknown special function {f!r}") from None
    return fn(float(x))


def special_array(f: str, x):
    """Vectorized counterpart of :func:`special` (scalars pass through)."""
    if not isinstance(x, np.ndarray):
        return special(f, x)
    if f == "exp":
        return np.exp(x)
    if f == "tanh":
        return np.tanh(x)
    if f == "erf":
        return _sp.erf(x)
    if f == "E1":
        if np.any(x <= 0):
            raise SpecialDomainError("E1 requires x > 0")
        return _sp.exp1(x)
    raise ValueError(f"unknown special function {f!r}")
