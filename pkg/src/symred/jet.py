"""Jet-space calculus for third-order ODEs and evolution equations.

Jet coordinates are the symbols ``u, u1, u2, ...`` (u, u_x, u_xx, ...).  An
abstract coefficient H(x) is carried by the chain ``H0, H1, H2, ...`` with
``D_x H_i = H_{i+1}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

from .expr import ONE, ZERO, Expr, derivation, differentiate, parse, substitute
from .expr.core import _coerce

_JET_RE = re.compile(r"^u(\d*)$")
_H_RE = re.compile(r"^H(\d+)$")


class JetOrderError(ValueError):
    pass


def jet_name(i: int) -> str:
    return "u" if i == 0 else f"u{i}"


def jet_index(name: str) -> Optional[int]:
    m = _JET_RE.match(name)
    if not m:
        return None
    return int(m.group(1)) if m.group(1) else 0


def jet_order(e: Expr) -> int:
    """Highest jet index present; -1 when e is free of u."""
    orders = [jet_index(s) for s in e.free_symbols()]
    return max((o for o in orders if o is not None), default=-1)


def _dx_rule(name: str) -> Optional[Expr]:
    if name == "x":
        return ONE
    i = jet_index(name)
    if i is not None:
        return parse(jet_name(i + 1))
    m = _H_RE.match(name)
    if m:
        return parse(f"H{int(m.group(1)) + 1}")
    return None


def total_derivative_x(e, times: int = 1) -> Expr:
    """D_x = d/dx + sum u_{i+1} d/du_i (+ abstract H chain)."""
    e = _coerce(e)
    for _ in range(times):
        e = derivation(e, _dx_rule)
    return e


@dataclass(frozen=True)
class EvolutionaryField:
    """X = characteristic * d/du."""

    characteristic: Expr

    @property
    def order(self) -> int:
        return jet_order(self.characteristic)

    def scaled(self, factor) -> "EvolutionaryField":
        return EvolutionaryField(self.characteristic * _coerce(factor))


@dataclass(frozen=True)
class PointGenerator:
    """X = xi d/dx + tau d/dt + eta d/du."""

    xi: Expr = ZERO
    tau: Expr = ZERO
    eta: Expr = ZERO
    name: str = ""

    def characteristic(self, ut: Expr) -> Expr:
        return self.eta - self.xi * parse("u1") - self.tau * ut

    def scaled(self, factor) -> "PointGenerator":
        f = _coerce(factor)
        return PointGenerator(self.xi * f, self.tau * f, self.eta * f, self.name)

    def substitute(self, binding: Mapping[str, Expr]) -> "PointGenerator":
        return PointGenerator(substitute(self.xi, binding), substitute(self.tau, binding),
                              substitute(self.eta, binding), self.name)


@dataclass
class SymmetryReport:
    remainder: Expr
    passed: bool
    entry_id: str = ""
    constraints: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"id": self.entry_id, "passed": self.passed, "remainder": str(self.remainder),
                "constraints": dict(self.constraints)}


def _apply(e: Expr, constraints: Optional[Mapping[str, object]]) -> Expr:
    return substitute(e, constraints) if constraints else e


def _constraint_text(constraints: Optional[Mapping[str, object]]) -> Dict[str, str]:
    return {k: str(_coerce(v)) for k, v in (constraints or {}).items()}


def lb_remainder(F: Expr, U: Expr) -> Expr:
    """X^(inf)(u3 - U) restricted to u3 = U, for X = F d/du."""
    if jet_order(U) > 2:
        raise JetOrderError(f"U must depend on at most u, u1, u2: {U}")
    if jet_order(F) > 2:
        raise JetOrderError(f"characteristic must have order <= 2: {F}")
    DF = [F]
    for _ in range(3):
        DF.append(total_derivative_x(DF[-1]))
    expr = DF[3]
    for i in range(3):
        dU = differentiate(U, jet_name(i))
        if not dU.is_zero():
            expr = expr - dU * DF[i]
    # on-shell images of u3, u4, u5, each already reduced
    u3 = U
    u4 = substitute(total_derivative_x(u3), {"u3": u3})
    u5 = substitute(total_derivative_x(u4), {"u3": u3})
    return substitute(expr, {"u3": u3, "u4": u4, "u5": u5})


def check_lb_symmetry(F: EvolutionaryField, U, constraints: Optional[Mapping[str, object]] = None,
                      entry_id: str = "") -> SymmetryReport:
    """Decide exactly whether F d/du is a Lie-Baecklund symmetry of u_xxx = U."""
    char = _apply(F.characteristic, constraints)
    rhs = _apply(_coerce(U), constraints)
    rem = lb_remainder(char, rhs)
    return SymmetryReport(rem, rem.is_zero(), entry_id, _constraint_text(constraints))


def frechet_derivative(K, Q) -> Expr:
    """K'[Q] = sum_i dK/du_i * D_x^i Q."""
    K, Q = _coerce(K), _coerce(Q)
    total = ZERO
    DQ = Q
    for i in range(jet_order(K) + 1):
        if i:
            DQ = total_derivative_x(DQ)
        dK = differentiate(K, jet_name(i))
        if not dK.is_zero():
            total = total + dK * DQ
    return total


def point_symmetry_remainder(X: PointGenerator, K: Expr) -> Expr:
    Q = X.characteristic(K)
    R = differentiate(Q, "t")
    DK = K
    for i in range(jet_order(Q) + 1):
        if i:
            DK = total_derivative_x(DK)
        dQ = differentiate(Q, jet_name(i))
        if not dQ.is_zero():
            R = R + dQ * DK
    return R - frechet_derivative(K, Q)


def check_point_symmetry_pde(X: PointGenerator, K, constraints: Optional[Mapping[str, object]] = None,
                             entry_id: str = "") -> SymmetryReport:
    """Decide whether X is a point symmetry of u_t = K(x, u, u1, u2)."""
    K = _apply(_coerce(K), constraints)
    if jet_order(K) > 2:
        raise JetOrderError(f"K must have order <= 2: {K}")
    if constraints:
        X = X.substitute({k: _coerce(v) for k, v in constraints.items()})
    rem = point_symmetry_remainder(X, K)
    return SymmetryReport(rem, rem.is_zero(), entry_id or X.name, _constraint_text(constraints))
