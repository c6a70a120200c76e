"""Multivariate gcd cancellation, delegated to FLINT's fmpz_mpoly."""

from __future__ import annotations

import flint
import gmpy2
from gmpy2 import mpq


def _ctx(n: int):
    return flint.fmpz_mpoly_ctx.get(tuple(f"g{i}" for i in range(n)), "lex")


def cancel(num: dict, den: dict):
    """Return ``(num, den)`` divided by their polynomial gcd."""
    ids = sorted({g for p in (num, den) for m in p for g, _ in m})
    pos = {g: i for i, g in enumerate(ids)}
    n = max(len(ids), 1)
    ctx = _ctx(n)
    scale = 1
    for p in (num, den):
        for c in p.values():
            scale = gmpy2.lcm(scale, c.denominator)

    def to_flint(p):
        out = {}
        for m, c in p.items():
            vec = [0] * n
            for g, e in m:
                vec[pos[g]] = e
            out[tuple(vec)] = int(c * scale)
        return ctx.from_dict(out)

    a, b = to_flint(num), to_flint(den)
    g = a.gcd(b)
    if g.is_one():
        return num, den
    a, b = a / g, b / g

    def back(p):
        out = {}
        for vec, c in p.to_dict().items():
            out[tuple((ids[i], int(e)) for i, e in enumerate(vec) if e)] = mpq(int(c))
        return out

    return back(a), back(b)


def eval_poly(p: dict, images: dict, top: dict):
    """Substitute ``images`` (gid -> (num, den)) into ``p`` over FLINT.

    Returns ``(num, common_den)`` in the same dict representation, where the
    common denominator is the product of den_g^top[g].  Callers must not pass
    polynomials whose monomials need exp merging.
    """
    ids = set()
    for q in [p, *(x for pair in images.values() for x in pair)]:
        for m in q:
            ids.update(g for g, _ in m)
    ids = sorted(ids)
    pos = {g: i for i, g in enumerate(ids)}
    n = max(len(ids), 1)
    ctx = flint.fmpq_mpoly_ctx.get(tuple(f"g{i}" for i in range(n)), "lex")

    def to_flint(q):
        out = {}
        for m, c in q.items():
            vec = [0] * n
            for g, e in m:
                vec[pos[g]] = e
            out[tuple(vec)] = flint.fmpq(int(c.numerator), int(c.denominator))
        return ctx.from_dict(out)

    fimg = {g: (to_flint(a), to_flint(b)) for g, (a, b) in images.items()}
    npow = {g: [ctx.from_dict({(0,) * n: 1})] for g in top}
    dpow = {g: [ctx.from_dict({(0,) * n: 1})] for g in top}
    for g, k in top.items():
        for _ in range(k):
            npow[g].append(npow[g][-1] * fimg[g][0])
            dpow[g].append(dpow[g][-1] * fimg[g][1])
    total = ctx.from_dict({})
    for m, c in p.items():
        present = dict(m)
        vec = [0] * n
        for g, e in m:
            if g not in top:
                vec[pos[g]] = e
        term = ctx.from_dict({tuple(vec): flint.fmpq(int(c.numerator), int(c.denominator))})
        for g, k in top.items():
            e = present.get(g, 0)
            term = term * npow[g][e] * dpow[g][k - e]
        total += term
    common = ctx.from_dict({(0,) * n: 1})
    for g, k in top.items():
        common = common * dpow[g][k]

    def back(q):
        out = {}
        for vec, c in q.to_dict().items():
            out[tuple((ids[i], int(e)) for i, e in enumerate(vec) if e)] = mpq(int(c.p), int(c.q))
        return out

    return back(total), back(common)
