"""Acceptance criteria 1-9.  Each test prints one ACCEPTANCE line with its verdict."""

import time

import numpy as np
import pytest

from symred import catalog
from symred.expr import symbol
from symred.invariance import INVARIANT, NON_INVARIANT, AnsatzSolution, invariance_test
from symred.jet import check_lb_symmetry, check_point_symmetry_pde
from symred.numerics import eval_family, family_defect, family_ic, integrate, resolve_params
from symred.pdecheck import Grid, convergence_ratio, mol_validate, residual
from symred.reduction import substitute_ansatz

from conftest import defaults, random_family_data


@pytest.fixture
def report(capsys):
    lines = []

    def emit(n, ok, detail):
        lines.append(f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    yield emit
    with capsys.disabled():
        for line in lines:
            print("\n" + line, end="")


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_1_worked_odes_admit_operator(report):
    details, ok = [], True
    for eid in ("kappa_over_x", "kappa_over_x2"):
        e = catalog.get_entry(eid)
        rep, dt = _timed(lambda: check_lb_symmetry(e.operator, e.U))
        ok &= rep.remainder.is_zero() and dt < 5.0
        details.append(f"{eid} remainder={rep.remainder} {dt:.2f}s")
    report(1, ok, "; ".join(details))


def test_criterion_2_generator_lists(report):
    failed, total = [], 0
    for eid in ("kappa_over_x", "kappa_over_x2"):
        for r in catalog.verify_generators(catalog.get_entry(eid)):
            total += 1
            if not r.passed:
                failed.append(f"{eid}/{r.entry_id}")
    report(2, total == 20 and not failed, f"{total - len(failed)}/{total} characteristics pass"
           + (f", failed: {failed}" if failed else ""))


def test_criterion_3_appendix(report):
    entries = catalog.list_entries()
    reports = {e.id: catalog.verify_entry(e) for e in entries}
    required = ("H_arbitrary", "H_exp", "H_power_n", "H_recip_quadratic")
    failing = {k: str(r.remainder) for k, r in reports.items() if not r.passed}
    ok = len(reports) == 13 and all(reports[k].passed for k in required)
    detail = f"{len(reports) - len(failing)}/13 entries pass"
    if failing:
        detail += "; failing: " + "; ".join(f"{k} remainder {v}" for k, v in failing.items())
    report(3, ok, detail)


def _remainder_proportional(rep, param):
    q = rep.remainder / symbol(param)
    return not rep.passed and param not in q.free_symbols() and not q.is_zero()


def test_criterion_4_classification_spot_checks(report):
    A, B, C, D = (catalog.get_case(c) for c in "ABCD")
    checks = {}
    checks["A:X2 unconditional"] = check_point_symmetry_pde(A.generator("X2").generator, A.K).passed
    X3 = A.generator("X3").generator
    checks["A:X3 with a4=0"] = check_point_symmetry_pde(X3, A.K, {"a4": 0}).passed
    checks["A:X3 generic fails ~ a4"] = _remainder_proportional(check_point_symmetry_pde(X3, A.K), "a4")
    for case in (B, C, D):
        for g in case.generators:
            checks[f"{case.id}:{g.id} under its condition"] = check_point_symmetry_pde(
                g.generator, case.K, g.constraint_map or None).passed
    for case, gid, param in [(B, "Y3", "a4"), (C, "Z2", "a4"), (C, "Z3", "a5"), (D, "W2", "a5")]:
        g = case.generator(gid)
        rest = {k: v for k, v in g.constraint_map.items() if k != param}
        rep = check_point_symmetry_pde(g.generator, case.K, rest or None)
        checks[f"{case.id}:{gid} fails with {param} free"] = not rep.passed and param in rep.remainder.free_symbols()
    bad = [k for k, v in checks.items() if not v]
    printed = check_point_symmetry_pde(A.generator("X3_critical").generator, A.K,
                                       A.generator("X3_critical").constraint_map).passed
    report(4, not bad, f"{len(checks) - len(bad)}/{len(checks)} checks pass"
           + (f", failed: {bad}" if bad else "")
           + f"; printed critical X3 {'passes' if printed else 'fails (derived form passes)'}")


def test_criterion_5_reduction_systems(report):
    res = {c.id: substitute_ansatz(c).equals(c.reduction_expected) for c in catalog.list_cases()}
    report(5, all(res.values()), ", ".join(f"{k}={'equal' if v else 'DIFFERENT'}" for k, v in res.items()))


def test_criterion_6_closed_forms_satisfy_systems(report):
    t0 = time.perf_counter()
    worst_defect, worst_rk, n = 0.0, 0.0, 0
    for seed in range(10):
        for fam in catalog.list_families():
            case = catalog.get_case(fam.case)
            p, c = random_family_data(fam, seed)
            times = np.linspace(*fam.t_window, 100)
            worst_defect = max(worst_defect, family_defect(fam, case.reduction_expected, c, p, times))
            tr = integrate(case.reduction_expected, resolve_params(fam, p), family_ic(fam, c, p), 0.0, 0.5)
            cf = np.array(eval_family(fam, c, p, 0.5))
            worst_rk = max(worst_rk, float(np.max(np.abs(tr.final - cf)) / np.max(np.abs(cf))))
            n += 1
    dt = time.perf_counter() - t0
    report(6, worst_defect <= 1e-9 and worst_rk <= 1e-6 and dt < 10.0,
           f"{n} random draws: max FD defect {worst_defect:.1e}, max RK45 rel diff at t=0.5 {worst_rk:.1e}, {dt:.2f}s")


def test_criterion_7_pde_residuals(report):
    worst_exact, ratios = 0.0, {}
    for fam in catalog.list_families():
        case = catalog.get_case(fam.case)
        p, c = defaults(fam)
        g = Grid(*fam.x_window, 65)
        times = np.linspace(*fam.t_window, 3)
        worst_exact = max(worst_exact, residual(case, fam, c, p, g, times, exact=True).max_abs_residual)
        ratios[fam.key] = convergence_ratio(case, fam, c, p, g, times)[2]
    ok = worst_exact <= 1e-9 and all(3.2 <= r <= 4.8 for r in ratios.values())
    report(7, ok, f"max exact residual {worst_exact:.1e}; FD ratios "
           f"{min(ratios.values()):.2f}..{max(ratios.values()):.2f}")


def test_criterion_8_method_of_lines(report):
    case = catalog.get_case("A")
    fam = catalog.get_family("A", "tanh-general")
    # kappa < 0: the diffusion coefficient -kappa/(x u^2) must be positive
    params = {"kappa": "-1/10", "a1": 1, "a2": 1}
    out, dt = _timed(lambda: mol_validate(case, fam, {"c0": 1, "c2": 1}, params, Grid(1.0, 2.0, 201), 0.25))
    err = out["rel_linf_error"]
    report(8, err <= 1e-3 and dt < 30.0, f"201 points, t=0.25, kappa=-1/10: rel Linf error {err:.2e}, {dt:.1f}s")


def _verdict(key, gids, params=None, constants=None):
    fam = catalog.get_family(*key.split("/"))
    case = catalog.get_case(fam.case)
    p, c = defaults(fam)
    p.update(params or {})
    c.update(constants or {})
    sol = AnsatzSolution.from_family(case, fam, c, p)
    return invariance_test(sol, [case.generator(g) for g in gids]).verdict


def test_criterion_9_non_invariance(report):
    NI, INV = NON_INVARIANT, INVARIANT
    cases = [
        ("A/tanh-general", ("X1", "X2", "X3"), {"a1": 1, "a2": 1}, None, NI),
        ("A/tanh-general", ("X1", "X2", "X3"), {"a1": "1/3", "a2": "-1/2"}, None, NI),
        ("A/tanh-critical", ("X1", "X2", "X3_critical_derived"), None, None, NI),
        ("A/tanh-a4", ("X1", "X2"), None, None, NI),
        ("B/general", ("Y1", "Y2_a4_zero", "Y3", "Y4"), {"a4": 0, "a5": 0}, None, INV),
        ("B/general", ("Y1", "Y2"), {"a4": "1/2", "a5": "1/4", "a7": 0}, None, NI),
        ("B/general", ("Y1", "Y2_a4_zero", "Y3"), {"a4": 0, "a5": "1/4"}, None, NI),
        ("B/phi0-zero", ("Y1", "Y2_a4_zero", "Y3"), {"a4": 0}, None, INV),
        ("C/gamma", ("Z1",), {"a4": "1/2", "a5": 0}, None, NI),
        ("C/gamma", ("Z1", "Z2"), {"a4": 0, "a5": "1/4"}, None, NI),
        ("C/gamma", ("Z1", "Z2", "Z3", "Z4"), {"a4": 0, "a5": 0}, None, INV),
        ("D/erf", ("W1",), None, None, NI),
        ("D/erf", ("W1",), {"a4": 0, "a5": "1/2"}, None, NI),
        ("D/erf", ("W1", "W2"), {"a4": 0, "a5": 0}, None, NI),
    ]
    wrong = []
    for key, gids, p, c, want in cases:
        got = _verdict(key, gids, p, c)
        if got != want:
            wrong.append(f"{key} {gids} {p}: {got}")
    report(9, not wrong, f"{len(cases) - len(wrong)}/{len(cases)} verdicts match"
           + (f", mismatched: {wrong}" if wrong else ""))
