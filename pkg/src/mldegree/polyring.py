"""Sparse multivariate polynomials over a prime field, graded reverse lex order.

Monomials are exponent tuples. A polynomial keeps its terms as a tuple of
``(exponents, coefficient)`` pairs, strictly descending in grevlex, with
coefficients in ``[0, p)`` and never zero.

Text grammar (used by :meth:`PolyRing.parse` and ``str(poly)``)::

    poly   := ["-"] term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := INTEGER | NAME ["^" INTEGER]

Whitespace is ignored. Integers are reduced modulo p; printing uses the
representative in ``(-p/2, p/2]`` so small negative coefficients stay readable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .scalar import PrimeModulus

Monomial = tuple  # tuple[int, ...]

MAX_EXPONENT = 2**15 - 1


def grevlex_key(a: Monomial):
    """Sort key: larger key means larger monomial."""
    return (sum(a), tuple(-e for e in reversed(a)))


def grevlex_cmp(a: Monomial, b: Monomial) -> int:
    """Return 1, 0 or -1 as ``a`` is greater than, equal to or less than ``b``."""
    if len(a) != len(b):
        raise ValueError(f"monomials of different lengths: {len(a)} vs {len(b)}")
    da, db = sum(a), sum(b)
    if da != db:
        return 1 if da > db else -1
    for x, y in zip(reversed(a), reversed(b)):
        if x != y:
            # smaller exponent in the last differing variable wins
            return 1 if x < y else -1
    return 0


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class PolyRing:
    """``F_p[x_0, ..., x_{k-1}]`` with named variables."""

    names: tuple
    modulus: PrimeModulus

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        for name in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise ValueError(f"invalid variable name {name!r}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def p(self) -> int:
        return self.modulus.p

    def zero(self) -> Polynomial:
        return Polynomial(self, ())

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c: int) -> Polynomial:
        c %= self.p
        return Polynomial(self, ((((0,) * self.nvars), c),) if c else ())

    def var(self, i) -> Polynomial:
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, ((tuple(e), 1),))

    def gens(self) -> list:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], c: int = 1) -> Polynomial:
        return self.from_dict({tuple(exps): c})

    def from_dict(self, d: Mapping) -> Polynomial:
        p = self.p
        items = []
        for e, c in d.items():
            e = tuple(e)
            if len(e) != self.nvars:
                raise ValueError(f"exponent vector {e} has wrong length for {self.nvars} variables")
            if any(x < 0 or x > MAX_EXPONENT for x in e):
                raise ValueError(f"exponent out of range in {e}")
            c = int(c) % p
            if c:
                items.append((e, c))
        items.sort(key=lambda t: grevlex_key(t[0]), reverse=True)
        for (a, _), (b, _) in zip(items, items[1:]):
            if a == b:
                raise ValueError(f"duplicate monomial {a}")
        return Polynomial(self, tuple(items))

    def parse(self, text: str) -> Polynomial:
        return _parse(self, text)


class Polynomial:
    """Immutable polynomial in canonical (sorted, zero-free) form."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: tuple):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- basic structure ---------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.terms))
        return self._hash

    def as_dict(self) -> dict:
        return dict(self.terms)

    @property
    def lm(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self.terms[0][0]

    @property
    def lc(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.terms[0][1]

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e, _ in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e, _ in self.terms)

    def monic(self) -> Polynomial:
        if not self.terms:
            return self
        return self * self.ring.modulus.inv(self.lc)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other) -> Polynomial:
        if isinstance(other, int):
            return self.ring.const(other)
        if not isinstance(other, Polynomial):
            raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")
        if other.ring != self.ring:
            raise ValueError("polynomials belong to different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        return _merge(self.ring, self.terms, other.terms, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return _merge(self.ring, self.terms, other.terms, self.ring.p - 1)

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, tuple((e, p - c) for e, c in self.terms))

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.ring.p
            c = other % p
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, tuple((e, a * c % p) for e, a in self.terms))
        return poly_mul(self, self._check(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, mono: Monomial, c: int) -> Polynomial:
        """Multiply by ``c * x^mono``; grevlex is a monomial order so sorting is kept."""
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, tuple((mono_mul(e, mono), a * c % p) for e, a in self.terms))

    def evaluate(self, point: Sequence[int]) -> int:
        p = self.ring.p
        total = 0
        for e, c in self.terms:
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * pow(x, k, p) % p
            total += v
        return total % p

    # -- text ------------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        p = self.ring.p
        out = []
        for e, c in self.terms:
            neg = c > p // 2
            mag = p - c if neg else c
            factors = [n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k]
            if mag != 1 or not factors:
                factors.insert(0, str(mag))
            body = "*".join(factors)
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(out)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def _merge(ring: PolyRing, a: tuple, b: tuple, scale: int) -> Polynomial:
    """``a + scale*b`` by a sorted merge."""
    p = ring.p
    out = []
    i = j = 0
    ka = [grevlex_key(e) for e, _ in a]
    kb = [grevlex_key(e) for e, _ in b]
    while i < len(a) and j < len(b):
        if ka[i] > kb[j]:
            out.append(a[i])
            i += 1
        elif ka[i] < kb[j]:
            out.append((b[j][0], b[j][1] * scale % p))
            j += 1
        else:
            c = (a[i][1] + scale * b[j][1]) % p
            if c:
                out.append((a[i][0], c))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend((e, c * scale % p) for e, c in b[j:])
    return Polynomial(ring, tuple(out))


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.ring != g.ring:
        raise ValueError("polynomials belong to different rings")
    p = f.ring.p
    acc: dict = {}
    for ea, ca in f.terms:
        for eb, cb in g.terms:
            e = mono_mul(ea, eb)
            acc[e] = (acc.get(e, 0) + ca * cb) % p
    items = [(e, c) for e, c in acc.items() if c]
    items.sort(key=lambda t: grevlex_key(t[0]), reverse=True)
    return Polynomial(f.ring, tuple(items))


def normal_form(f: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    """Remainder of multivariate division of ``f`` by ``basis``.

    Each step reduces the largest remaining term by the first basis element
    (in input order) whose leading monomial divides it.
    """
    for g in basis:
        if g.ring != f.ring:
            raise ValueError("polynomials belong to different rings")
        if not g:
            raise ValueError("basis contains the zero polynomial")
    ring = f.ring
    inv = ring.modulus.inv
    leads = [(g.lm, inv(g.lc), g) for g in basis]
    remainder = []
    while f:
        e, c = f.terms[0]
        for lm, lc_inv, g in leads:
            if mono_divides(lm, e):
                f = f - g.mul_term(mono_div(e, lm), c * lc_inv)
                break
        else:
            remainder.append((e, c))
            f = Polynomial(ring, f.terms[1:])
    return Polynomial(ring, tuple(remainder))


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    """``(L/lt f)*f - (L/lt g)*g`` with ``L = lcm(lm f, lm g)``; leading terms cancel."""
    if not f or not g:
        raise ValueError("S-polynomial of the zero polynomial")
    if f.ring != g.ring:
        raise ValueError("polynomials belong to different rings")
    inv = f.ring.modulus.inv
    L = mono_lcm(f.lm, g.lm)
    return f.mul_term(mono_div(L, f.lm), inv(f.lc)) - g.mul_term(mono_div(L, g.lm), inv(g.lc))


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|([+-]))")


def _parse(ring: PolyRing, text: str) -> Polynomial:
    index = {name: i for i, name in enumerate(ring.names)}
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        num, name, caret, star, sign = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            if name not in index:
                raise ValueError(f"unknown variable {name!r}")
            tokens.append(("var", index[name]))
        elif caret:
            tokens.append(("^", None))
        elif star:
            tokens.append(("*", None))
        else:
            tokens.append(("sign", sign))
    if not tokens:
        raise ValueError("empty polynomial text")

    acc: dict = {}
    p = ring.p
    i = 0

    def term(sign):
        nonlocal i
        coeff = sign
        exps = [0] * ring.nvars
        while True:
            if i >= len(tokens):
                raise ValueError(f"truncated term in {text!r}")
            kind, val = tokens[i]
            i += 1
            if kind == "num":
                coeff *= val
            elif kind == "var":
                k = 1
                if i < len(tokens) and tokens[i][0] == "^":
                    if i + 1 >= len(tokens) or tokens[i + 1][0] != "num":
                        raise ValueError(f"expected exponent in {text!r}")
                    k = tokens[i + 1][1]
                    i += 2
                exps[val] += k
            else:
                raise ValueError(f"unexpected {kind!r} in {text!r}")
            if i < len(tokens) and tokens[i][0] == "*":
                i += 1
                continue
            return tuple(exps), coeff

    sign = 1
    if tokens[0] == ("sign", "-"):
        sign, i = -1, 1
    elif tokens[0] == ("sign", "+"):
        i = 1
    while True:
        e, c = term(sign)
        acc[e] = (acc.get(e, 0) + c) % p
        if i >= len(tokens):
            break
        kind, val = tokens[i]
        if kind != "sign":
            raise ValueError(f"expected + or - in {text!r}")
        sign = -1 if val == "-" else 1
        i += 1
    return ring.from_dict(acc)


def format_system(polys: Iterable[Polynomial]) -> str:
    return "".join(f"{f}\n" for f in polys)
