import json

import numpy as np
import pytest

from symred import catalog
from symred.expr import ZERO, parse
from symred.invariance import (INVARIANT, NON_INVARIANT, AnsatzSolution, GeneratorConditionError,
                               conditions_hold, invariance_test)
from symred.jet import PointGenerator

from conftest import defaults


def solution(key, params=None, constants=None):
    fam = catalog.get_family(*key.split("/"))
    case = catalog.get_case(fam.case)
    p, c = defaults(fam)
    p.update(params or {})
    c.update(constants or {})
    return case, AnsatzSolution.from_family(case, fam, c, p)


def gens(case, *ids):
    return [case.generator(g) for g in ids]


def test_case_a_non_invariant():
    case, sol = solution("A/tanh-general", {"a1": 1, "a2": 1})
    rep = invariance_test(sol, gens(case, "X1", "X2", "X3"))
    assert rep.verdict == NON_INVARIANT
    assert rep.kernel.size == 0
    assert rep.singular_values[-1] > 1e-8 * rep.singular_values[0]


def test_case_b_invariant_when_a4_a5_vanish():
    case, sol = solution("B/general", {"a4": 0, "a5": 0, "a7": "1/2"})
    rep = invariance_test(sol, gens(case, "Y1", "Y2_a4_zero", "Y3", "Y4"))
    assert rep.verdict == INVARIANT
    assert rep.kernel.shape[0] >= 1


def test_case_b_non_invariant_generically():
    case, sol = solution("B/general", {"a4": "1/2", "a5": "1/4", "a7": 0})
    rep = invariance_test(sol, gens(case, "Y1", "Y2"))
    assert rep.verdict == NON_INVARIANT


def test_case_b_phi0_zero_subcase():
    case, sol = solution("B/phi0-zero", {"a4": 0, "a5": "-1/4", "a7": "1/2"})
    rep = invariance_test(sol, gens(case, "Y1", "Y2_a4_zero", "Y3"))
    assert rep.verdict == INVARIANT


def test_steady_solution_is_time_invariant():
    case = catalog.get_case("A")
    params = {"kappa": 1.0, "a1": 0.0, "a2": 0.0, "a4": 0.0}
    sol = AnsatzSolution(case, params, lambda t: (0.0, 0.0, 1.0))
    u, ux, ut = sol.fields(1.5, 0.2)
    assert u == pytest.approx(1.5 ** -2) and ut == 0.0
    rep = invariance_test(sol, [PointGenerator(ZERO, parse("1"), ZERO, "dt")])
    assert rep.verdict == INVARIANT
    np.testing.assert_allclose(rep.kernel, [[1.0]])


def test_case_d_translation():
    case, sol = solution("D/erf")
    assert invariance_test(sol, gens(case, "W1")).verdict == NON_INVARIANT


def test_side_conditions_are_enforced():
    case, sol = solution("A/tanh-general", {"a1": 1, "a2": 1})
    assert not conditions_hold(case.generator("X3_critical"), sol.params)
    with pytest.raises(GeneratorConditionError):
        invariance_test(sol, gens(case, "X3_critical"))
    case, sol = solution("B/general")
    with pytest.raises(GeneratorConditionError):
        invariance_test(sol, gens(case, "Y3"))


def test_empty_generator_list():
    case, sol = solution("D/erf")
    with pytest.raises(ValueError):
        invariance_test(sol, [])


@pytest.mark.parametrize("seed", [0, 1, 7, 12345])
def test_verdict_stable_under_seed_and_samples(seed):
    for key, params, ids in [("A/tanh-general", {}, ("X1", "X2", "X3")),
                             ("B/general", {"a4": 0, "a5": 0}, ("Y1", "Y2_a4_zero", "Y3", "Y4"))]:
        case, sol = solution(key, params)
        base = invariance_test(sol, gens(case, *ids), samples=50, seed=seed)
        doubled = invariance_test(sol, gens(case, *ids), samples=100, seed=seed)
        assert base.verdict == doubled.verdict
        assert base.kernel.shape == doubled.kernel.shape


def test_scaling_a_generator_keeps_kernel_dimension():
    case, sol = solution("B/general", {"a4": 0, "a5": 0})
    pgs = [g.generator for g in gens(case, "Y1", "Y2_a4_zero", "Y3", "Y4")]
    base = invariance_test(sol, pgs)
    for i in range(len(pgs)):
        scaled = list(pgs)
        scaled[i] = pgs[i].scaled(-7)
        assert invariance_test(sol, scaled).kernel.shape == base.kernel.shape


def test_report_json():
    case, sol = solution("D/erf")
    rep = invariance_test(sol, gens(case, "W1"), samples=20, seed=3)
    obj = json.loads(rep.to_json())
    assert obj["verdict"] == NON_INVARIANT
    assert obj["samples"] == 20 and len(obj["singular_values"]) == 1
    assert invariance_test(sol, gens(case, "W1"), samples=20, seed=3).to_json() == rep.to_json()
