import random
from fractions import Fraction

import pytest

from symred import catalog
from symred.numerics import ValidityViolation, check_validity


def defaults(fam):
    return dict(fam.default_params), dict(fam.default_constants)


# magnitude and sign ranges for random rational draws, per symbol
_RANGES = {
    "kappa": (Fraction(1, 2), Fraction(2)),
    "c0": (Fraction(1, 2), Fraction(2)),
    "c2": (Fraction(1, 2), Fraction(2)),
    "a3": (Fraction(1, 4), Fraction(1)),
}


def _draw(rng, name):
    lo, hi = _RANGES.get(name, (Fraction(-1), Fraction(1)))
    return lo + (hi - lo) * Fraction(rng.randint(0, 64), 64)


def random_family_data(fam, seed, tries=200):
    """Random exact-rational params and constants satisfying the family's predicates."""
    case = catalog.get_case(fam.case)
    rng = random.Random(seed)
    free = fam.free_parameters(case)
    for _ in range(tries):
        params = {p: _draw(rng, p) for p in free}
        consts = {c: _draw(rng, c) for c in fam.constants}
        if fam.key == "A/tanh-general" and abs(3 * params["a2"] - 2 * params["a1"]) < Fraction(1, 4):
            continue
        if fam.case == "C" and params["a1"] < Fraction(1, 4):
            continue
        try:
            check_validity(fam, consts, params)
        except ValidityViolation:
            continue
        return params, consts
    raise RuntimeError(f"no valid draw for {fam.key}")


@pytest.fixture(params=[f.key for f in catalog.list_families()])
def family(request):
    case_id, fam_id = request.param.split("/")
    return catalog.get_family(case_id, fam_id)
