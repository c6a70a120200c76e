"""Reduction of u_t = (H/u)_xx + F to three ODEs via the quadratic-radical ansatz

    u = sign * x^(-m) * (phi2 x^2 + phi1 x + phi0)^(-1/2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

from .expr import ONE, Expr, coefficients, derivation, differentiate, parse, sqrt, substitute, symbol
from .expr.core import _coerce
from .jet import jet_name, jet_order, total_derivative_x

PHI = ("phi0", "phi1", "phi2")
DPHI = ("dphi0", "dphi1", "dphi2")


class ReductionError(Exception):
    pass


class IncompatibleAnsatz(ReductionError):
    """The coefficient equations are not exactly three consistent ones."""


class NonRationalStructure(ReductionError):
    """The radical-even part of the residual does not vanish."""


@dataclass(frozen=True)
class Ansatz:
    m: int
    sign: int = 1

    @property
    def radicand(self) -> Expr:
        return parse("phi2*x^2 + phi1*x + phi0")

    @property
    def radical(self) -> Expr:
        return sqrt(self.radicand)

    @property
    def u(self) -> Expr:
        return self.sign * ONE / (symbol("x") ** self.m * self.radical)


def _dt_rule(name: str) -> Optional[Expr]:
    if name == "t":
        return ONE
    if name in PHI:
        return symbol("d" + name)
    return None


@dataclass
class ReductionSystem:
    """phi_nu' = rhs[phi_nu] for nu = 0, 1, 2."""

    rhs: Dict[str, Expr]
    case: str = ""
    m: int = 0

    def __getitem__(self, key: str) -> Expr:
        return self.rhs[key]

    def equals(self, other: "ReductionSystem") -> bool:
        return all((self.rhs[k] - other.rhs[k]).is_zero() for k in PHI)

    def substitute(self, binding: Mapping[str, object]) -> "ReductionSystem":
        return ReductionSystem({k: substitute(v, binding) for k, v in self.rhs.items()},
                               self.case, self.m)

    def to_json_obj(self) -> dict:
        return {"case": self.case, "m": self.m,
                "odes": {f"{k}'": str(self.rhs[k]) for k in ("phi2", "phi1", "phi0")}}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ReductionSystem":
        return cls({k: parse(obj["odes"][f"{k}'"]) for k in PHI}, obj.get("case", ""),
                   obj.get("m", 0))


def pde_operator(H, F) -> Expr:
    """K(x, u, u1, u2) = (H/u)_xx + F as a jet expression."""
    return total_derivative_x(_coerce(H) / symbol("u"), 2) + _coerce(F)


def ansatz_residual(H, F, ansatz: Ansatz) -> Expr:
    """u_t - (H/u)_xx - F on the ansatz, with phi_nu' kept as symbols dphi_nu."""
    u = ansatz.u
    K = pde_operator(H, F)
    jets = {}
    D = u
    for i in range(max(jet_order(K), 0) + 1):
        if i:
            D = total_derivative_x(D)
        jets[jet_name(i)] = D
    ut = derivation(u, _dt_rule)
    return ut - substitute(K, jets)


def _solve_linear(rows: List[List[Expr]]) -> List[Expr]:
    """Solve rows [a0, a1, a2, b] meaning a.dphi + b = 0; exact elimination."""
    rows = [list(r) for r in rows]
    n = 3
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        rows[r] = [v / p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if len(pivots) < n:
        raise IncompatibleAnsatz(f"coefficient system has rank {len(pivots)} < 3 in phi'")
    for extra in rows[n:]:
        if not extra[n].is_zero():
            raise IncompatibleAnsatz(
                f"coefficient system is inconsistent (more than 3 independent equations): "
                f"0 = {extra[n]}")
    return [-rows[k][n] for k in range(n)]


def derive_system(H, F, m: int, sign: int = 1, case: str = "") -> ReductionSystem:
    """Derive phi_nu' = R_nu by matching coefficients of x^k and of the radical."""
    ansatz = Ansatz(m, sign)
    R = ansatz_residual(H, F, ansatz)
    coeffs = _coefficient_equations(R, ansatz)
    rows = []
    for (_, parity), c in sorted(coeffs.items()):
        a = [differentiate(c, d) for d in DPHI]
        b = substitute(c, {d: 0 for d in DPHI})
        if any(not differentiate(ak, d).is_zero() for ak in a for d in DPHI):
            raise IncompatibleAnsatz("coefficient equation is not linear in phi'")
        if all(ak.is_zero() for ak in a):
            if b.is_zero():
                continue
            if parity == 0:
                raise NonRationalStructure(f"radical-even part does not vanish: {b}")
        rows.append(a + [b])
    sol = _solve_linear(rows)
    return ReductionSystem(dict(zip(PHI, sol)), case, m)


def _coefficient_equations(R: Expr, ansatz: Ansatz) -> Dict[tuple, Expr]:
    return coefficients(R, [symbol("x"), ansatz.radical])


def substitute_ansatz(case) -> ReductionSystem:
    """Reduction system of a catalog PdeCase."""
    return derive_system(case.H, case.F, case.m, 1, case.id)


def verify_roundtrip(H, F, m: int, system: ReductionSystem, sign: int = 1) -> Expr:
    """Ansatz residual with phi_nu' replaced by the system; zero when consistent."""
    R = ansatz_residual(H, F, Ansatz(m, sign))
    return substitute(R, {d: system.rhs[p] for d, p in zip(DPHI, PHI)})


def parity_check(H, F, m: int) -> bool:
    """True when the + and - branches of the ansatz give the same system."""
    return derive_system(H, F, m, 1).equals(derive_system(H, F, m, -1))

