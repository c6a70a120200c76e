"""Canonical rational functions over Q in symbols and transcendental atoms.

An :class:`Expr` is stored as a reduced fraction ``num/den`` of sparse
polynomials whose variables ("generators") are either plain symbols or atoms
such as ``exp(g)``, ``tanh(g)`` or a tagged radical ``sqrt(v)``.  Every
constructor returns the canonical form, so structural equality decides
equality of rational functions and ``is_zero`` is exact.

Normalization rules, applied in this order:

* exp atoms inside one monomial are merged into a single ``exp(sum)`` and an
  exp factor shared by every denominator term is moved to the numerator;
* a radical ``r = sqrt(v)`` never appears squared (``r^2 -> v``) and never in
  a denominator (rationalized with the conjugate);
* numerator and denominator are made coprime (polynomial gcd);
* the denominator is an integer-primitive polynomial with a positive leading
  coefficient.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple, Union

import gmpy2
from gmpy2 import mpq

from . import gcd as _gcd

Mono = Tuple[Tuple[int, int], ...]
Poly = Dict[Mono, mpq]
Number = Union[int, Fraction, mpq]

ATOM_KINDS = ("exp", "tanh", "erf", "E1", "sqrt", "pow")


class ExprError(Exception):
    """Base class for expression-kernel errors."""


class DivisionByZeroError(ExprError, ZeroDivisionError):
    """A denominator is identically zero."""


class Gen:
    """A field generator: a named symbol or an atom with Expr arguments."""

    __slots__ = ("id", "kind", "name", "args", "sortkey")

    def __init__(self, id_: int, kind: str, name: str, args: tuple):
        self.id = id_
        self.kind = kind
        self.name = name
        self.args = args
        if kind == "sym":
            self.sortkey = ("0", name)
        else:
            self.sortkey = ("1", kind, ", ".join(str(a) for a in args))

    def __repr__(self) -> str:
        if self.kind == "sym":
            return self.name
        return f"{self.kind}({', '.join(str(a) for a in self.args)})"


_lock = threading.Lock()
_gens: list = []
_gen_ids: dict = {}


def _intern(kind: str, name: str = "", args: tuple = ()) -> int:
    key = (kind, name, args)
    gid = _gen_ids.get(key)
    if gid is not None:
        return gid
    with _lock:
        gid = _gen_ids.get(key)
        if gid is None:
            gid = len(_gens)
            _gens.append(Gen(gid, kind, name, args))
            _gen_ids[key] = gid
    return gid


def gen(gid: int) -> Gen:
    return _gens[gid]


# ---------------------------------------------------------------- polynomials

_ONE_POLY: Poly = {(): mpq(1)}


@lru_cache(maxsize=1 << 17)
def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for g, e in b:
        d[g] = d.get(g, 0) + e
    exps = [g for g in d if _gens[g].kind == "exp"]
    if len(exps) > 1 or (exps and d[exps[0]] > 1):
        arg = ZERO
        for g in exps:
            arg = arg + _gens[g].args[0] * d.pop(g)
        if arg.num:
            d[_intern("exp", "", (arg,))] = 1
    return tuple(sorted(d.items()))


def _padd(p: Poly, q: Poly, sign: int = 1) -> Poly:
    r = dict(p)
    for m, c in q.items():
        v = r.get(m, 0) + (c if sign > 0 else -c)
        if v:
            r[m] = v
        else:
            r.pop(m, None)
    return r


def _pmul(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    r: dict = {}
    for m2, c2 in q.items():
        for m1, c1 in p.items():
            m = _mono_mul(m1, m2)
            r[m] = r.get(m, 0) + c1 * c2
    return {m: c for m, c in r.items() if c}


def _pscale(p: Poly, c) -> Poly:
    if not c:
        return {}
    return {m: v * c for m, v in p.items()}


def _ppow(p: Poly, n: int) -> Poly:
    result = _ONE_POLY
    base = p
    while n:
        if n & 1:
            result = _pmul(result, base)
        n >>= 1
        if n:
            base = _pmul(base, base)
    return result


def _poly_gens(p: Poly) -> set:
    return {g for m in p for g, _ in m}


def _mono_without(m: Mono, gid: int) -> Tuple[Mono, int]:
    e = 0
    rest = []
    for g, k in m:
        if g == gid:
            e = k
        else:
            rest.append((g, k))
    return tuple(rest), e


def _mono_printkey(m: Mono):
    return tuple(sorted((_gens[g].sortkey, e) for g, e in m))


def _mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


# -------------------------------------------------------------- normalization

def _fix_exp_den(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    common = None
    for m in den:
        ex = [g for g, _ in m if _gens[g].kind == "exp"]
        if len(ex) != 1 or (common is not None and ex[0] != common):
            return num, den
        common = ex[0]
    arg = _gens[common].args[0]
    den = {_mono_without(m, common)[0]: c for m, c in den.items()}
    inv = _intern("exp", "", (-arg,))
    num = {_mono_mul(m, ((inv, 1),)): c for m, c in num.items()}
    return num, den


def _reduce_square(num: Poly, den: Poly, rid: int) -> Tuple[Poly, Poly]:
    top = 0
    for p in (num, den):
        for m in p:
            for g, e in m:
                if g == rid:
                    top = max(top, e // 2)
    if top == 0:
        return num, den
    v = _gens[rid].args[0]
    vn_pows = [_ONE_POLY]
    vd_pows = [_ONE_POLY]
    for _ in range(top):
        vn_pows.append(_pmul(vn_pows[-1], v.num))
        vd_pows.append(_pmul(vd_pows[-1], v.den))

    def reduce(p: Poly) -> Poly:
        out: Poly = {}
        for m, c in p.items():
            rest, e = _mono_without(m, rid)
            q, s = divmod(e, 2)
            if s:
                rest = _mono_mul(rest, ((rid, 1),))
            term = _pmul(_pmul(vn_pows[q], vd_pows[top - q]), {rest: c})
            out = _padd(out, term)
        return out

    return reduce(num), reduce(den)


def _fix_radicals(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    for _ in range(32):
        todo = set()
        for which, p in ((0, num), (1, den)):
            for m in p:
                for g, e in m:
                    if _gens[g].kind == "sqrt" and (e >= 2 or which == 1):
                        todo.add(g)
        if not todo:
            return num, den
        rid = min(todo, key=lambda g: _gens[g].sortkey)
        num, den = _reduce_square(num, den, rid)
        a: Poly = {}
        b: Poly = {}
        for m, c in den.items():
            rest, e = _mono_without(m, rid)
            if e:
                b[m] = c
            else:
                a[rest] = c
        if b:
            conj = _padd(a, b, -1)
            num = _pmul(num, conj)
            den = _pmul(den, conj)
            num, den = _reduce_square(num, den, rid)
    raise ExprError("radical normalization did not terminate")


def _cancel(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    content: Optional[dict] = None
    for p in (den, num):
        for m in p:
            d = dict(m)
            if content is None:
                content = d
            else:
                content = {g: min(e, d[g]) for g, e in content.items() if g in d}
            if not content:
                break
        if not content:
            break
    if content:
        def strip(p: Poly) -> Poly:
            out = {}
            for m, c in p.items():
                out[tuple((g, e - content.get(g, 0)) for g, e in m
                          if e - content.get(g, 0))] = c
            return out
        num, den = strip(num), strip(den)
    if len(den) == 1 or len(num) == 1:
        return num, den
    return _gcd.cancel(num, den)


def _normalize_coeffs(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    if len(den) == 1:
        (m, c), = den.items()
        if not m:
            if c == 1:
                return num, den
            return _pscale(num, 1 / c), _ONE_POLY
        return _pscale(num, 1 / c), {m: mpq(1)}
    lead = max(den, key=_mono_printkey)
    lcm = 1
    for c in den.values():
        lcm = gmpy2.lcm(lcm, c.denominator)
    g = 0
    for c in den.values():
        g = gmpy2.gcd(g, (c * lcm).numerator)
    factor = mpq(lcm, g)
    if den[lead] < 0:
        factor = -factor
    if factor == 1:
        return num, den
    return _pscale(num, factor), _pscale(den, factor)


def _has_kind(p: Poly, kinds: Tuple[str, ...]) -> bool:
    return any(_gens[g].kind in kinds for m in p for g, _ in m)


def _make(num: Poly, den: Poly) -> "Expr":
    if not den:
        raise DivisionByZeroError("division by an expression that is identically zero")
    if not num:
        return ZERO
    if len(den) == 1 and () in den and not _has_kind(num, ("sqrt",)):
        c = den[()]
        return Expr(num if c == 1 else _pscale(num, 1 / c), _ONE_POLY)
    if _has_kind(den, ("exp",)):
        num, den = _fix_exp_den(num, den)
    if _has_kind(num, ("sqrt",)) or _has_kind(den, ("sqrt",)):
        num, den = _fix_radicals(num, den)
        if not num:
            return ZERO
        if not den:
            raise DivisionByZeroError("denominator vanishes after radical reduction")
    num, den = _cancel(num, den)
    num, den = _normalize_coeffs(num, den)
    return Expr(num, den)


# --------------------------------------------------------------------- Expr

def _coerce(value) -> "Expr":
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)) or type(value) is type(mpq(0)):
        c = mpq(value)
        return Expr({(): c}, _ONE_POLY) if c else ZERO
    if isinstance(value, str):
        from .parser import parse
        return parse(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


class Expr:
    """Immutable canonical rational function.  Build with :func:`parse`,
    :func:`symbol`, :func:`const` or arithmetic on existing expressions."""

    __slots__ = ("num", "den", "_hash", "_text")

    def __init__(self, num: Poly, den: Poly):
        self.num = num
        self.den = den
        self._hash = None
        self._text = None

    # arithmetic
    def __add__(self, other) -> "Expr":
        o = _coerce(other)
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return _make(_padd(self.num, o.num), self.den)
        return _make(_padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
                     _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr({m: -c for m, c in self.num.items()}, self.den)

    def __sub__(self, other) -> "Expr":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Expr":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Expr":
        o = _coerce(other)
        if not o.num or not self.num:
            return ZERO
        return _make(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Expr":
        o = _coerce(other)
        if not o.num:
            raise DivisionByZeroError(f"division by zero: ({self}) / 0")
        return _make(_pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, other) -> "Expr":
        return _coerce(other) / self

    def __pow__(self, n: int) -> "Expr":
        if not isinstance(n, int):
            raise TypeError("Expr powers must be integers; use power() or sqrt()")
        if n == 0:
            return ONE
        if n < 0:
            return ONE / (self ** (-n))
        if len(self.num) == 1 and len(self.den) == 1 and not _has_kind(self.num, ("sqrt", "exp")):
            (m, c), = self.num.items()
            (dm, dc), = self.den.items()
            return Expr({tuple((g, e * n) for g, e in m): c ** n},
                        {tuple((g, e * n) for g, e in dm): dc ** n})
        return _make(_ppow(self.num, n), _ppow(self.den, n))

    # comparison
    def __eq__(self, other) -> bool:
        if not isinstance(other, Expr):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def __str__(self) -> str:
        if self._text is None:
            self._text = _format(self)
        return self._text

    def __repr__(self) -> str:
        return f"Expr('{self}')"

    # queries
    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return len(self.den) == 1 and () in self.den and all(not m for m in self.num)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ExprError(f"not a constant: {self}")
        c = self.num.get((), mpq(0))
        return Fraction(int(c.numerator), int(c.denominator))

    def numerator(self) -> "Expr":
        return Expr(self.num, _ONE_POLY)

    def denominator(self) -> "Expr":
        return Expr(self.den, _ONE_POLY)

    def gens(self) -> set:
        return _poly_gens(self.num) | _poly_gens(self.den)

    def free_symbols(self) -> set:
        out = set()
        for g in self.gens():
            gg = _gens[g]
            if gg.kind == "sym":
                out.add(gg.name)
            else:
                for a in gg.args:
                    out |= a.free_symbols()
        return out

    def atoms(self, kind: Optional[str] = None) -> set:
        """Atom generators (as Exprs) occurring anywhere, optionally by kind."""
        out = set()
        for g in self.gens():
            gg = _gens[g]
            if gg.kind != "sym":
                if kind is None or gg.kind == kind:
                    out.add(_gen_expr(g))
                for a in gg.args:
                    out |= a.atoms(kind)
        return out

    def as_gen(self) -> Gen:
        """The generator if this expression is a bare symbol or atom."""
        if len(self.num) == 1 and self.den == _ONE_POLY:
            (m, c), = self.num.items()
            if c == 1 and len(m) == 1 and m[0][1] == 1:
                return _gens[m[0][0]]
        raise ExprError(f"not a single generator: {self}")

    def n_terms(self) -> int:
        return len(self.num)


ZERO = Expr({}, _ONE_POLY)
ONE = Expr({(): mpq(1)}, _ONE_POLY)


def _gen_expr(gid: int) -> Expr:
    return Expr({((gid, 1),): mpq(1)}, _ONE_POLY)


def const(value: Number) -> Expr:
    return _coerce(value)


def symbol(name: str) -> Expr:
    if not name or not (name[0].isalpha() or name[0] == "_"):
        raise ExprError(f"invalid symbol name {name!r}")
    return _gen_expr(_intern("sym", name))


def symbols(names: str) -> Tuple[Expr, ...]:
    return tuple(symbol(n) for n in names.replace(",", " ").split())


# -------------------------------------------------------------------- atoms

def exp(arg) -> Expr:
    arg = _coerce(arg)
    if arg.is_zero():
        return ONE
    return _gen_expr(_intern("exp", "", (arg,)))


def tanh(arg) -> Expr:
    arg = _coerce(arg)
    if arg.is_zero():
        return ZERO
    return _gen_expr(_intern("tanh", "", (arg,)))


def erf(arg) -> Expr:
    arg = _coerce(arg)
    if arg.is_zero():
        return ZERO
    return _gen_expr(_intern("erf", "", (arg,)))


def E1(arg) -> Expr:
    arg = _coerce(arg)
    if arg.is_zero():
        raise ExprError("E1 has a logarithmic singularity at 0")
    return _gen_expr(_intern("E1", "", (arg,)))


def sqrt(radicand) -> Expr:
    """Tagged radical r with r^2 = radicand."""
    v = _coerce(radicand)
    if v.is_zero():
        return ZERO
    if v.is_constant():
        q = v.constant_value()
        if q > 0:
            rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
            if rn * rn == q.numerator and rd * rd == q.denominator:
                return const(Fraction(rn, rd))
    return _gen_expr(_intern("sqrt", "", (v,)))


def power(base, exponent) -> Expr:
    """base^exponent; a non-numeric exponent yields a symbolic power atom."""
    b = _coerce(base)
    n = _coerce(exponent)
    if n.is_constant():
        q = n.constant_value()
        if q.denominator == 1:
            return b ** int(q)
        if q.denominator == 2:
            return sqrt(b) ** int(q.numerator)
        raise ExprError(f"unsupported rational exponent {q}")
    if b.is_zero():
        return ZERO
    if b == ONE:
        return ONE
    return _gen_expr(_intern("pow", "", (b, n)))


_ATOM_BUILDERS: Dict[str, Callable[..., Expr]] = {
    "exp": exp, "tanh": tanh, "erf": erf, "E1": E1, "sqrt": sqrt, "pow": power,
}


# --------------------------------------------------------------- derivatives

Rule = Callable[[str], Optional[Expr]]


def derivation(e: Expr, rule: Rule, _memo: Optional[dict] = None) -> Expr:
    """Apply the derivation defined on symbols by ``rule`` (None means 0),
    extended to atoms by their chain rules."""
    memo = {} if _memo is None else _memo

    def dgen(gid: int) -> Expr:
        if gid in memo:
            return memo[gid]
        g = _gens[gid]
        if g.kind == "sym":
            d = rule(g.name)
            d = ZERO if d is None else _coerce(d)
        else:
            d = _atom_derivative(g, rule, memo)
        memo[gid] = d
        return d

    dnum = _dpoly(e.num, dgen)
    if e.den == _ONE_POLY:
        return dnum
    dden = _dpoly(e.den, dgen)
    if dden.is_zero():
        return dnum / Expr(e.den, _ONE_POLY)
    return (dnum - e * dden) / Expr(e.den, _ONE_POLY)


def _dpoly(p: Poly, dgen: Callable[[int], Expr]) -> Expr:
    total = ZERO
    for gid in sorted(_poly_gens(p)):
        dg = dgen(gid)
        if dg.is_zero():
            continue
        part: Poly = {}
        for m, c in p.items():
            rest, e = _mono_without(m, gid)
            if e:
                if e > 1:
                    rest = tuple(sorted(rest + ((gid, e - 1),)))
                part[rest] = part.get(rest, 0) + c * e
        part = {m: c for m, c in part.items() if c}
        if part:
            total = total + _make(part, _ONE_POLY) * dg
    return total


def _atom_derivative(g: Gen, rule: Rule, memo: dict) -> Expr:
    me = _gen_expr(g.id)
    if g.kind == "pow":
        base, n = g.args
        if not derivation(n, rule, {}).is_zero():
            raise ExprError("derivative of a symbolic power with respect to its exponent "
                            "is not supported")
        db = derivation(base, rule, {})
        return n * me * db / base if not db.is_zero() else ZERO
    arg = g.args[0]
    da = derivation(arg, rule, {})
    if da.is_zero():
        return ZERO
    if g.kind == "exp":
        return me * da
    if g.kind == "tanh":
        return (ONE - me * me) * da
    if g.kind == "erf":
        return 2 * exp(-arg * arg) * da / sqrt(symbol("pi"))
    if g.kind == "E1":
        return -exp(-arg) * da / arg
    if g.kind == "sqrt":
        return da / (2 * me)
    raise ExprError(f"no derivative rule for {g.kind}")


def differentiate(e, s: str) -> Expr:
    """Exact partial derivative with respect to symbol ``s``."""
    e = _coerce(e)
    return derivation(e, lambda name: ONE if name == s else None)


# -------------------------------------------------------------- substitution

Binding = Mapping[str, Expr]


def substitute(e, binding: Mapping[str, object]) -> Expr:
    """Simultaneous capture-free substitution of symbols, then canonicalize."""
    e = _coerce(e)
    if not binding:
        return e
    b = {k: _coerce(v) for k, v in binding.items()}
    images: Dict[int, Optional[Expr]] = {}
    for gid in e.gens():
        images[gid] = _gen_image(gid, b)
    if all(img is None for img in images.values()):
        return e
    nn, nd = _eval_poly(e.num, images)
    dn, dd = _eval_poly(e.den, images)
    if not dn:
        raise DivisionByZeroError(
            f"substitution makes the denominator {Expr(e.den, _ONE_POLY)} vanish")
    return _make(_pmul(nn, dd), _pmul(nd, dn))


def _gen_image(gid: int, b: Dict[str, Expr]) -> Optional[Expr]:
    g = _gens[gid]
    if g.kind == "sym":
        return b.get(g.name)
    new_args = tuple(substitute(a, b) for a in g.args)
    if all(x == y for x, y in zip(new_args, g.args)):
        return None
    return _ATOM_BUILDERS[g.kind](*new_args)


def _needs_exp_merge(p: Poly, images, top) -> bool:
    polys = [p] + [q for g in top for q in (images[g].num, images[g].den)]
    return any(_gens[g].kind == "exp" for q in polys for m in q for g, _ in m)


def _eval_poly(p: Poly, images: Dict[int, Optional[Expr]]) -> Tuple[Poly, Poly]:
    top: Dict[int, int] = {}
    for m in p:
        for g, e in m:
            if images.get(g) is not None:
                top[g] = max(top.get(g, 0), e)
    if top and not _needs_exp_merge(p, images, top):
        from .gcd import eval_poly
        return eval_poly(p, {g: (images[g].num, images[g].den) for g in top}, top)
    num_pows: Dict[int, list] = {}
    den_pows: Dict[int, list] = {}
    for g, k in top.items():
        img = images[g]
        np_, dp_ = [_ONE_POLY], [_ONE_POLY]
        for _ in range(k):
            np_.append(_pmul(np_[-1], img.num))
            dp_.append(_pmul(dp_[-1], img.den))
        num_pows[g], den_pows[g] = np_, dp_
    out: Poly = {}
    for m, c in p.items():
        keep = []
        term: Poly = {(): c}
        present = dict(m)
        for g, k in top.items():
            e = present.get(g, 0)
            term = _pmul(term, _pmul(num_pows[g][e], den_pows[g][k - e]))
        for g, e in m:
            if g not in top:
                keep.append((g, e))
        if keep:
            term = _pmul(term, {tuple(keep): mpq(1)})
        out = _padd(out, term)
    common: Poly = _ONE_POLY
    for g, k in top.items():
        common = _pmul(common, den_pows[g][k])
    return out, common


def coefficients(e: Expr, wrt: Iterable[Expr]) -> Dict[Tuple[int, ...], Expr]:
    """Group the numerator of ``e`` by exponents of the given generators."""
    ids = [w.as_gen().id for w in wrt]
    out: Dict[Tuple[int, ...], Poly] = {}
    for m, c in e.num.items():
        rest = []
        key = [0] * len(ids)
        for g, k in m:
            if g in ids:
                key[ids.index(g)] = k
            else:
                rest.append((g, k))
        bucket = out.setdefault(tuple(key), {})
        bucket[tuple(rest)] = c
    return {k: _make(p, _ONE_POLY) for k, p in out.items()}


# ------------------------------------------------------------------ printing

def _format_gen(g: Gen) -> str:
    if g.kind == "sym":
        return g.name
    return f"{g.kind}({', '.join(str(a) for a in g.args)})"


def _format_poly(p: Poly) -> str:
    if not p:
        return "0"
    terms = sorted(p.items(), key=lambda mc: (-_mono_degree(mc[0]), _mono_printkey(mc[0])))
    parts = []
    for m, c in terms:
        factors = []
        for g, e in sorted(m, key=lambda ge: _gens[ge[0]].sortkey):
            s = _format_gen(_gens[g])
            factors.append(s if e == 1 else f"{s}^{e}")
        neg = c < 0
        a = -c if neg else c
        body = "*".join(factors)
        if not factors:
            text = str(a)
        elif a == 1:
            text = body
        else:
            text = f"{a}*{body}"
        if not parts:
            parts.append(("-" if neg else "") + text)
        else:
            parts.append((" - " if neg else " + ") + text)
    return "".join(parts)


def _is_single_factor(p: Poly) -> bool:
    if len(p) != 1:
        return False
    (m, c), = p.items()
    return c == 1 and len(m) == 1


def _format(e: Expr) -> str:
    num = _format_poly(e.num)
    if e.den == _ONE_POLY:
        return num
    if len(e.num) > 1 or (len(e.num) == 1 and next(iter(e.num.values())) < 0
                          and next(iter(e.num)) != ()):
        num = f"({num})"
    den = _format_poly(e.den)
    if not _is_single_factor(e.den):
        den = f"({den})"
    return f"{num}/{den}"


# ------------------------------------------------------------------ numerics

def eval_numeric(e, env: Mapping[str, object]):
    """Evaluate in binary64; ``env`` values may be floats or numpy arrays."""
    from .numeric import evaluate
    return evaluate(_coerce(e), env)


def is_zero(e) -> bool:
    return _coerce(e).is_zero()
