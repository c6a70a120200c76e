"""Registry of the ODEs, diffusion equations, reduction systems and solution
families shipped in ``data/catalog.yaml``.

Records are returned exactly as stored.  Whether a record actually holds is a
separate question answered by :func:`verify_entry` and
:func:`verify_case_generators`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from importlib import resources
from typing import Dict, List, Mapping, Optional, Tuple

import yaml

from .expr import Expr, parse, substitute, symbol
from .jet import (EvolutionaryField, PointGenerator, SymmetryReport, check_lb_symmetry,
                  check_point_symmetry_pde, total_derivative_x)
from .reduction import PHI, ReductionSystem


class UnknownIdError(KeyError):
    def __str__(self) -> str:
        return str(self.args[0])


@dataclass(frozen=True)
class OdeEntry:
    id: str
    H: Expr
    U: Expr
    parameters: Tuple[str, ...]
    side_condition: str = ""
    H_form: str = ""
    generators: Tuple[Tuple[str, Expr], ...] = ()
    ansatz_m: Optional[int] = None

    @property
    def operator(self) -> EvolutionaryField:
        """(H/u)_xx as an evolutionary field."""
        return EvolutionaryField(total_derivative_x(self.H / symbol("u"), 2))


@dataclass(frozen=True)
class CaseGenerator:
    generator: PointGenerator
    condition: str = ""
    constraints: Tuple[Tuple[str, Expr], ...] = ()
    source: str = "listed"
    notes: str = ""
    nonzero: Tuple[Expr, ...] = ()

    @property
    def id(self) -> str:
        return self.generator.name

    @property
    def constraint_map(self) -> Dict[str, Expr]:
        return dict(self.constraints)


@dataclass(frozen=True)
class PdeCase:
    id: str
    ode: str
    m: int
    F: Expr
    parameters: Tuple[str, ...]
    generators: Tuple[CaseGenerator, ...]
    reduction_expected: ReductionSystem
    families: Tuple[str, ...]
    side_condition: str = ""
    notes: str = ""

    @property
    def H(self) -> Expr:
        return parse(f"kappa/x^{self.m}")

    # alias matching the field name used in reports
    @property
    def F_terms(self) -> Expr:
        return self.F

    @cached_property
    def K(self) -> Expr:
        """Right-hand side of u_t = K as a jet expression."""
        from .reduction import pde_operator
        return pde_operator(self.H, self.F)

    def generator(self, gid: str) -> CaseGenerator:
        for g in self.generators:
            if g.id == gid:
                return g
        raise UnknownIdError(f"case {self.id} has no generator {gid!r}")


@dataclass(frozen=True)
class SolutionFamily:
    id: str
    case: str
    constants: Tuple[str, ...]
    phi: Tuple[Tuple[str, Expr], ...]
    constraints: Tuple[Tuple[str, Expr], ...] = ()
    positive: Tuple[Expr, ...] = ()
    nonzero: Tuple[Expr, ...] = ()
    condition: str = ""
    notes: str = ""
    default_params: Tuple[Tuple[str, str], ...] = ()
    default_constants: Tuple[Tuple[str, str], ...] = ()
    x_window: Tuple[float, float] = (1.0, 2.0)
    t_window: Tuple[float, float] = (0.0, 0.5)

    @property
    def key(self) -> str:
        return f"{self.case}/{self.id}"

    @property
    def phi_map(self) -> Dict[str, Expr]:
        return dict(self.phi)

    @property
    def constraint_map(self) -> Dict[str, Expr]:
        return dict(self.constraints)

    def free_parameters(self, case: PdeCase) -> List[str]:
        fixed = set(self.constraint_map)
        return [p for p in case.parameters if p not in fixed]


def _expr(text) -> Expr:
    return parse(str(text))


def _load_raw() -> dict:
    text = resources.files("symred").joinpath("data/catalog.yaml").read_text(encoding="utf-8")
    return yaml.safe_load(text)


def _constraints(raw: Optional[Mapping]) -> Tuple[Tuple[str, Expr], ...]:
    return tuple((k, _expr(v)) for k, v in (raw or {}).items())


@lru_cache(maxsize=None)
def _catalog():
    raw = _load_raw()
    worked = {}
    for r in raw["worked_odes"]:
        worked[r["id"]] = OdeEntry(
            id=r["id"], H=_expr(r["H"]), U=_expr(r["U"]), parameters=tuple(r["parameters"]),
            generators=tuple((k, _expr(v)) for k, v in r["generators"].items()),
            ansatz_m=r.get("ansatz_m"))
    appendix = [
        OdeEntry(id=r["id"], H=_expr(r["H"]), U=_expr(r["U"]),
                 parameters=tuple(r.get("parameters") or ()),
                 side_condition=r.get("side_condition", ""), H_form=r.get("H_form", ""))
        for r in raw["appendix"]
    ]
    families: Dict[str, SolutionFamily] = {}
    for r in raw["families"]:
        d = r.get("defaults", {})
        fam = SolutionFamily(
            id=r["id"], case=r["case"], constants=tuple(r["constants"]),
            phi=tuple((p, _expr(r[p])) for p in PHI),
            constraints=_constraints(r.get("constraints")),
            positive=tuple(_expr(v) for v in r.get("positive", ())),
            nonzero=tuple(_expr(v) for v in r.get("nonzero", ())),
            condition=r.get("condition", ""), notes=r.get("notes", ""),
            default_params=tuple((k, str(v)) for k, v in d.get("params", {}).items()),
            default_constants=tuple((k, str(v)) for k, v in d.get("constants", {}).items()),
            x_window=tuple(float(v) for v in d.get("x", (1, 2))),
            t_window=tuple(float(v) for v in d.get("t", (0, 0.5))))
        families[fam.key] = fam
    cases = {}
    for r in raw["cases"]:
        gens = []
        for g in r["generators"]:
            pg = PointGenerator(_expr(g["xi"]), _expr(g["tau"]), _expr(g["eta"]), g["id"])
            gens.append(CaseGenerator(pg, g.get("condition", ""), _constraints(g.get("constraints")),
                                      g.get("source", "listed"), g.get("notes", ""),
                                      tuple(_expr(v) for v in g.get("nonzero", ()))))
        red = r["reduction"]
        expected = ReductionSystem({p: _expr(red[p]) for p in PHI}, r["id"], r["m"])
        cases[r["id"]] = PdeCase(
            id=r["id"], ode=r["ode"], m=r["m"], F=_expr(r["F"]), parameters=tuple(r["parameters"]),
            generators=tuple(gens), reduction_expected=expected,
            families=tuple(f.id for f in families.values() if f.case == r["id"]),
            side_condition=r.get("side_condition", ""), notes=r.get("notes", ""))
    return worked, appendix, cases, families


def list_entries() -> List[OdeEntry]:
    """The thirteen appendix ODEs, in catalog order."""
    return list(_catalog()[1])


def get_entry(entry_id: str) -> OdeEntry:
    """Appendix entry or one of the worked ODEs ``kappa_over_x`` or ``kappa_over_x2``."""
    worked, appendix, _, _ = _catalog()
    if entry_id in worked:
        return worked[entry_id]
    for e in appendix:
        if e.id == entry_id:
            return e
    raise UnknownIdError(f"unknown ODE entry {entry_id!r}")


def list_cases() -> List[PdeCase]:
    return list(_catalog()[2].values())


def get_case(case_id: str) -> PdeCase:
    try:
        return _catalog()[2][case_id]
    except KeyError:
        raise UnknownIdError(f"unknown PDE case {case_id!r}") from None


def list_families(case_id: Optional[str] = None) -> List[SolutionFamily]:
    fams = _catalog()[3].values()
    return [f for f in fams if case_id is None or f.case == case_id]


def get_family(case_id: str, family_id: str) -> SolutionFamily:
    try:
        return _catalog()[3][f"{case_id}/{family_id}"]
    except KeyError:
        raise UnknownIdError(f"case {case_id!r} has no family {family_id!r}") from None


def verify_entry(entry: OdeEntry, constraints: Optional[Mapping[str, object]] = None) -> SymmetryReport:
    """Check that (H/u)_xx d/du is a Lie-Baecklund symmetry of the entry."""
    return check_lb_symmetry(entry.operator, entry.U, constraints, entry.id)


def verify_generators(entry: OdeEntry) -> List[SymmetryReport]:
    return [check_lb_symmetry(EvolutionaryField(q), entry.U, None, name)
            for name, q in entry.generators]


def verify_case_generators(case: PdeCase) -> List[SymmetryReport]:
    """Each listed generator under its own side condition."""
    return [check_point_symmetry_pde(g.generator, case.K, g.constraint_map or None, g.id)
            for g in case.generators]


def _entry_json(e: OdeEntry) -> dict:
    d = {"id": e.id, "H": str(e.H), "U": str(e.U), "parameters": list(e.parameters)}
    if e.side_condition:
        d["side_condition"] = e.side_condition
    if e.generators:
        d["generators"] = {k: str(v) for k, v in e.generators}
    return d


def dump_json() -> str:
    worked, appendix, cases, families = _catalog()
    obj = {
        "worked_odes": [_entry_json(e) for e in worked.values()],
        "appendix": [_entry_json(e) for e in appendix],
        "cases": [{
            "id": c.id, "m": c.m, "H": str(c.H), "F": str(c.F), "parameters": list(c.parameters),
            "generators": [{"id": g.id, "xi": str(g.generator.xi), "tau": str(g.generator.tau),
                            "eta": str(g.generator.eta), "condition": g.condition,
                            "constraints": {k: str(v) for k, v in g.constraints},
                            "source": g.source} for g in c.generators],
            "reduction": c.reduction_expected.to_json_obj()["odes"],
            "families": list(c.families),
            "notes": c.notes,
        } for c in cases.values()],
        "families": [{
            "id": f.id, "case": f.case, "constants": list(f.constants),
            "constraints": {k: str(v) for k, v in f.constraints},
            **{p: str(v) for p, v in f.phi},
            "positive": [str(v) for v in f.positive], "nonzero": [str(v) for v in f.nonzero],
        } for f in families.values()],
    }
    return json.dumps(obj, indent=2)
