"""Buchberger's algorithm and solution counting for zero-dimensional ideals.

The inner loop works on monomials packed into Python integers so that the
grevlex comparison is integer comparison and monomial multiplication is one
addition. For ``v`` variables, slot ``j`` (bits ``16j .. 16j+15``) holds
``OFF - e_j`` and the slot above the variables holds the total degree::

    key = deg << 16v | sum_j (OFF - e_j) << 16j,   OFF = 2**15 - 1

Higher slots decide first, so keys compare as (degree, -e_{v-1}, ..., -e_0),
which is grevlex. ``key(a*b) = key(a) + key(b) - key(1)`` and divisibility is
a borrow-free subtraction test against the guard bit of every slot.
"""

from __future__ import annotations

import enum
import heapq
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .polyring import MAX_EXPONENT, Polynomial, PolyRing, normal_form, s_polynomial

_BITS = 16
_MASK = (1 << _BITS) - 1
_OFF = MAX_EXPONENT


class BudgetExceeded(RuntimeError):
    """Raised when Buchberger runs past its pair, term or time budget."""

    def __init__(self, message: str, pairs_reduced: int, basis_size: int, elapsed: float):
        super().__init__(message)
        self.pairs_reduced = pairs_reduced
        self.basis_size = basis_size
        self.elapsed = elapsed


@dataclass(frozen=True)
class Budget:
    max_pairs: int = 10**6
    # ~8 GiB at roughly 100 bytes per stored term across basis and workspace
    max_terms: int = 8 * 2**30 // 100
    max_seconds: Optional[float] = None


class _Packer:
    def __init__(self, nvars: int):
        self.nvars = nvars
        self.shifts = [_BITS * j for j in range(nvars)]
        self.deg_shift = _BITS * nvars
        self.one = sum(_OFF << s for s in self.shifts)
        self.guard = sum(1 << (s + _BITS - 1) for s in self.shifts)
        self.var_mask = (1 << self.deg_shift) - 1

    def encode(self, exps) -> int:
        key = sum(exps) << self.deg_shift
        for e, s in zip(exps, self.shifts):
            key |= (_OFF - e) << s
        return key

    def decode(self, key: int) -> tuple:
        return tuple(_OFF - ((key >> s) & _MASK) for s in self.shifts)

    def lcm(self, a: int, b: int) -> int:
        # per slot: smaller OFF - e means larger exponent
        g = self.guard
        ge = (((a | g) - b) & g) >> (_BITS - 1)  # 1 in slots where a_j >= b_j
        spread = ge * _MASK
        var = ((b & spread) | (a & ~spread)) & self.var_mask
        deg = self.nvars * _OFF - sum((var >> s) & _MASK for s in self.shifts)
        return (deg << self.deg_shift) | var


class _Engine:
    """One Buchberger run; holds all mutable state so runs never share any."""

    def __init__(self, ring: PolyRing, budget: Budget):
        self.ring = ring
        self.p = ring.p
        self.pk = _Packer(ring.nvars)
        self.budget = budget
        self.polys: list = []  # every basis element ever added; list of [(key, coeff), ...]
        self.leads: list = []
        self.active: list = []
        self.pairs: list = []  # heap of (lcm_key, i, j)
        self.pairs_reduced = 0
        self.terms_stored = 0
        self.start = time.perf_counter()
        self._reducer_cache: dict = {}

    # -- conversion ---------------------------------------------------------

    def pack(self, f: Polynomial) -> list:
        enc = self.pk.encode
        return [(enc(e), c) for e, c in f.terms]

    def unpack(self, f: list) -> Polynomial:
        dec = self.pk.decode
        return Polynomial(self.ring, tuple((dec(k), c) for k, c in f))

    # -- budget ---------------------------------------------------------------

    def _fail(self, why: str):
        raise BudgetExceeded(
            f"{why} after {self.pairs_reduced} pair reductions, basis size {len(self.polys)}",
            self.pairs_reduced,
            len(self.polys),
            time.perf_counter() - self.start,
        )

    def _check_budget(self, workspace: int = 0):
        b = self.budget
        if self.pairs_reduced > b.max_pairs:
            self._fail("pair budget exhausted")
        if self.terms_stored + workspace > b.max_terms:
            self._fail("term budget exhausted")
        if b.max_seconds is not None and time.perf_counter() - self.start > b.max_seconds:
            self._fail("time budget exhausted")

    # -- reduction --------------------------------------------------------------

    def _find_reducer(self, key: int) -> int:
        g = self.pk.guard
        leads = self.leads
        hit = self._reducer_cache.get(key)
        if hit is not None:
            idx, checked = hit
            if idx >= 0:
                return idx
            start = checked
        else:
            start = 0
        for i in range(start, len(leads)):
            if ((leads[i] | g) - key) & g == g:
                self._reducer_cache[key] = (i, 0)
                return i
        self._reducer_cache[key] = (-1, len(leads))
        return -1

    def reduce(self, acc: dict) -> list:
        """Fully reduce the polynomial held in ``acc`` (key -> coeff) by the basis."""
        p = self.p
        polys = self.polys
        heap = [-k for k in acc]
        heapq.heapify(heap)
        out = []
        steps = 0
        while heap:
            k = -heapq.heappop(heap)
            c = acc.pop(k, None)
            if c is None:
                continue
            i = self._find_reducer(k)
            if i < 0:
                out.append((k, c))
                continue
            g = polys[i]
            shift = k - g[0][0]
            for gk, gc in g[1:]:
                nk = gk + shift
                old = acc.get(nk)
                if old is None:
                    acc[nk] = -c * gc % p
                    heapq.heappush(heap, -nk)
                else:
                    v = (old - c * gc) % p
                    if v:
                        acc[nk] = v
                    else:
                        del acc[nk]
            steps += 1
            if steps & 1023 == 0:
                self._check_budget(len(acc))
        return out

    def spoly(self, i: int, j: int, lcm: int) -> dict:
        p = self.p
        f, g = self.polys[i], self.polys[j]
        acc: dict = {}
        sf = lcm - f[0][0]
        for k, c in f[1:]:
            acc[k + sf] = c
        sg = lcm - g[0][0]
        for k, c in g[1:]:
            nk = k + sg
            v = (acc.get(nk, 0) - c) % p
            if v:
                acc[nk] = v
            else:
                acc.pop(nk, None)
        return acc

    def monic(self, f: list) -> list:
        p = self.p
        inv = pow(f[0][1], p - 2, p)
        if inv == 1:
            return f
        return [(k, c * inv % p) for k, c in f]

    # -- Gebauer-Moeller update --------------------------------------------------

    def add(self, h: list):
        pk = self.pk
        lcm = pk.lcm
        g = pk.guard
        one = pk.one

        def divides(a, b):
            return ((a | g) - b) & g == g

        def coprime(a, b, l):
            return l == a + b - one

        t = h[0][0]
        hi = len(self.polys)
        self.polys.append(h)
        self.leads.append(t)
        self.terms_stored += len(h)

        # candidate pairs (h, g_i)
        cands = []
        for i in self.active:
            a = self.leads[i]
            cands.append((lcm(t, a), i, a))
        # chain criterion among new pairs: drop (h,i) if some other lcm properly divides
        keep = []
        for idx, (l, i, a) in enumerate(cands):
            if coprime(t, a, l):
                keep.append((l, i, a))
                continue
            dominated = False
            for jdx, (l2, j, _) in enumerate(cands):
                if jdx == idx:
                    continue
                if divides(l2, l) and (l2 != l or jdx < idx):
                    dominated = True
                    break
            if not dominated:
                keep.append((l, i, a))
        # drop duplicates by lcm already covered above; then product criterion
        new_pairs = [(l, i, hi) for l, i, a in keep if not coprime(t, a, l)]

        # old pairs (i, j) killed by t
        leads = self.leads
        old = []
        for item in self.pairs:
            l, i, j = item
            if divides(t, l) and lcm(leads[i], t) != l and lcm(leads[j], t) != l:
                continue
            old.append(item)
        old.extend(new_pairs)
        heapq.heapify(old)
        self.pairs = old

        self.active = [i for i in self.active if not divides(t, leads[i])]
        self.active.append(hi)

    # -- main loop --------------------------------------------------------------

    def run(self, gens: Sequence[Polynomial]) -> list:
        for f in gens:
            packed = self.pack(f)
            h = self.reduce(dict(packed)) if self.polys else packed
            if not h:
                continue
            h = self.monic(h)
            if h[0][0] == self.pk.one:
                return [[(self.pk.one, 1)]]
            self.add(h)
        while self.pairs:
            l, i, j = heapq.heappop(self.pairs)
            self.pairs_reduced += 1
            self._check_budget()
            h = self.reduce(self.spoly(i, j, l))
            if not h:
                continue
            h = self.monic(h)
            if h[0][0] == self.pk.one:
                return [[(self.pk.one, 1)]]
            self.add(h)
        return self.interreduce()

    def interreduce(self) -> list:
        """Reduced, monic basis from the minimal leading monomials."""
        minimal = sorted(self.active, key=lambda i: self.leads[i])
        # new engine state so the reducer list is exactly the minimal basis
        self.polys = [self.polys[i] for i in minimal]
        self.leads = [f[0][0] for f in self.polys]
        out = []
        for idx, f in enumerate(self.polys):
            lead = f[0]
            others_polys = self.polys[:idx] + self.polys[idx + 1:]
            saved = self.polys, self.leads, self._reducer_cache
            self.polys = others_polys
            self.leads = [g[0][0] for g in others_polys]
            self._reducer_cache = {}
            tail = self.reduce(dict(f[1:]))
            self.polys, self.leads, self._reducer_cache = saved
            out.append([lead] + tail)
        return out


@dataclass(frozen=True)
class GroebnerBasis:
    ring: PolyRing
    generators: tuple
    pairs_reduced: int = 0

    @property
    def staircase(self) -> tuple:
        return tuple(g.lm for g in self.generators)

    def __len__(self):
        return len(self.generators)

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.generators)

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.generators)

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce(f)


def buchberger(gens: Sequence[Polynomial], budget: Budget = Budget()) -> GroebnerBasis:
    """Reduced grevlex Groebner basis of the ideal generated by ``gens``.

    Pairs are processed by the normal strategy (smallest lcm first, ties by
    index), with the product and chain criteria applied through the
    Gebauer-Moeller update. Raises :class:`BudgetExceeded` rather than
    returning a partial basis.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("empty generator list")
    ring = gens[0].ring
    for f in gens:
        if f.ring != ring:
            raise ValueError("generators belong to different rings")
    eng = _Engine(ring, budget)
    basis = eng.run(gens)
    polys = tuple(sorted((eng.unpack(f) for f in basis), key=lambda f: eng.pk.encode(f.lm)))
    return GroebnerBasis(ring, polys, eng.pairs_reduced)


def is_zero_dimensional(gb: GroebnerBasis) -> bool:
    if gb.is_unit():
        return True
    pure = set()
    for lm in gb.staircase:
        support = [i for i, e in enumerate(lm) if e]
        if len(support) == 1:
            pure.add(support[0])
    return len(pure) == gb.ring.nvars


def standard_monomials(gb: GroebnerBasis) -> list:
    """All monomials divisible by no leading monomial, in increasing grevlex order."""
    if not is_zero_dimensional(gb):
        raise ValueError("ideal is not zero-dimensional; quotient is infinite")
    if gb.is_unit():
        return []
    leads = gb.staircase
    nv = gb.ring.nvars

    def blocked(e):
        return any(all(a <= b for a, b in zip(lm, e)) for lm in leads)

    out = []

    def walk(e: list, i: int):
        if i == nv:
            out.append(tuple(e))
            return
        while True:
            if blocked(e):
                break
            walk(e, i + 1)
            e[i] += 1
        e[i] = 0

    walk([0] * nv, 0)
    pk = _Packer(nv)
    out.sort(key=pk.encode)
    return out


def quotient_dimension(gb: GroebnerBasis) -> int:
    return len(standard_monomials(gb))


class Status(str, enum.Enum):
    OK = "OK"
    EMPTY = "EMPTY"
    POSITIVE_DIMENSIONAL = "POSITIVE_DIMENSIONAL"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


@dataclass
class CountReport:
    status: Status
    count: Optional[int]
    gb_size: int
    pair_count: int
    elapsed: float
    encoding: Optional[str] = None
    n: Optional[int] = None
    m: Optional[int] = None
    seed: Optional[int] = None
    prime: Optional[int] = None
    extra: dict = field(default_factory=dict)


def count_solutions(gens: Sequence[Polynomial], budget: Budget = Budget(), **meta) -> CountReport:
    """Number of solutions (with multiplicity) of a polynomial system over the algebraic closure.

    ``meta`` (encoding, n, m, seed, prime) is copied into the report.
    """
    start = time.perf_counter()
    gb = buchberger(gens, budget)
    elapsed = time.perf_counter() - start
    if gb.is_unit():
        status, count = Status.EMPTY, None
    elif not is_zero_dimensional(gb):
        status, count = Status.POSITIVE_DIMENSIONAL, None
    else:
        status, count = Status.OK, quotient_dimension(gb)
    return CountReport(status, count, len(gb), gb.pairs_reduced, elapsed, **meta)


def check_groebner(gb: GroebnerBasis, gens: Sequence[Polynomial] = ()) -> bool:
    """Independent post-hoc check with the plain division routine.

    True iff every S-polynomial of the basis reduces to zero and every
    generator in ``gens`` lies in the ideal.
    """
    G = list(gb.generators)
    for a in range(len(G)):
        for b in range(a + 1, len(G)):
            if normal_form(s_polynomial(G[a], G[b]), G):
                return False
    return all(not normal_form(f, G) for f in gens)
