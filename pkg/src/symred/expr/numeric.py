"""Binary64 evaluation of canonical expressions (scalars or numpy arrays)."""

from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from .core import Expr, ExprError, gen

POLE_THRESHOLD = 1e-300
CONSTANTS = {"pi": math.pi}


class UnboundSymbolError(ExprError, KeyError):
    pass


class PoleError(ExprError, ZeroDivisionError):
    pass


class DomainError(ExprError, ValueError):
    pass


def _gen_value(gid: int, env: Mapping[str, object], cache: dict):
    if gid in cache:
        return cache[gid]
    from ..numerics.special import special_array

    g = gen(gid)
    if g.kind == "sym":
        if g.name in env:
            val = env[g.name]
        elif g.name in CONSTANTS:
            val = CONSTANTS[g.name]
        else:
            raise UnboundSymbolError(f"unbound symbol {g.name!r}")
    elif g.kind == "sqrt":
        v = evaluate(g.args[0], env, cache)
        if np.any(np.asarray(v) < 0):
            raise DomainError(f"negative radicand in sqrt({g.args[0]})")
        val = np.sqrt(v) if isinstance(v, np.ndarray) else math.sqrt(v)
    elif g.kind == "pow":
        b = evaluate(g.args[0], env, cache)
        n = evaluate(g.args[1], env, cache)
        if np.any(np.asarray(b) <= 0):
            raise DomainError(f"non-positive base in pow({g.args[0]}, {g.args[1]})")
        val = np.power(b, n)
    else:
        val = special_array(g.kind, evaluate(g.args[0], env, cache))
    cache[gid] = val
    return val


def _poly_value(p: dict, env, cache):
    terms = []
    for m, c in p.items():
        t = float(c)
        for g, e in m:
            v = _gen_value(g, env, cache)
            t = t * (v if e == 1 else v ** e)
        terms.append(t)
    if not terms:
        return 0.0
    if all(isinstance(t, float) for t in terms):
        return math.fsum(terms)
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    return total


def evaluate(e: Expr, env: Mapping[str, object], cache: dict | None = None):
    if cache is None:
        cache = {}
    num = _poly_value(e.num, env, cache)
    if len(e.den) == 1 and () in e.den:
        return num / float(e.den[()])
    den = _poly_value(e.den, env, cache)
    if np.any(np.abs(np.asarray(den)) < POLE_THRESHOLD):
        raise PoleError(f"pole: denominator {e.denominator()} vanishes")
    return num / den


def lambdify(e: Expr, names):
    """Compile ``e`` into f(*values) over numpy for repeated evaluation.

    Arguments follow ``names``; remaining symbols must be in CONSTANTS.  No
    pole or domain checks are made: callers get inf/nan instead of errors.
    """
    from scipy import special as sp

    names = list(names)
    order: list = []
    seen: dict = {}

    def visit_poly(p):
        for m in p:
            for g, _ in m:
                visit(g)

    def visit(gid):
        if gid in seen:
            return
        g = gen(gid)
        for a in g.args:
            visit_poly(a.num)
            visit_poly(a.den)
        seen[gid] = f"g{len(seen)}"
        order.append(gid)

    visit_poly(e.num)
    visit_poly(e.den)

    def poly_src(p):
        if not p:
            return "0.0"
        terms = []
        for m, c in p.items():
            factors = [repr(float(c))]
            for g, k in m:
                factors.append(seen[g] if k == 1 else f"{seen[g]}**{k}")
            terms.append("*".join(factors))
        return " + ".join(terms)

    def expr_src(x):
        return f"(({poly_src(x.num)})/({poly_src(x.den)}))"

    lines = [f"def _f({', '.join(f'_a{i}' for i in range(len(names)))}):"]
    fns = {"exp": "_np.exp", "tanh": "_np.tanh", "erf": "_sp.erf", "E1": "_sp.exp1", "sqrt": "_np.sqrt"}
    for gid in order:
        g = gen(gid)
        var = seen[gid]
        if g.kind == "sym":
            if g.name in names:
                src = f"_a{names.index(g.name)}"
            elif g.name in CONSTANTS:
                src = repr(CONSTANTS[g.name])
            else:
                raise UnboundSymbolError(f"unbound symbol {g.name!r}")
        elif g.kind == "pow":
            src = f"_np.power({expr_src(g.args[0])}, {expr_src(g.args[1])})"
        else:
            src = f"{fns[g.kind]}({expr_src(g.args[0])})"
        lines.append(f"    {var} = {src}")
    lines.append(f"    return {expr_src(e)}")
    scope = {"_np": np, "_sp": sp}
    exec("\n".join(lines), scope)
    return scope["_f"]
