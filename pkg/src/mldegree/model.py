"""Critical-equation systems of generic linear covariance models.

A model is a random ``m``-dimensional subspace ``L`` of symmetric ``n x n``
matrices, spanned by ``B_1, ..., B_m``. With ``Sigma = sum_i l_i B_i`` and a
symmetric matrix of unknowns ``K``, three encodings of the critical equations
are built:

PRIMAL
    ``K Sigma = I`` (all ``n^2`` entries) and ``<K S K - K, B_i> = 0``.
REDUCED
    ``K Sigma = I`` and ``<K^2 - K, B_i> = 0``; the data matrix drops out.
ELIMINATED
    ``K`` replaced by ``adj(Sigma) / det(Sigma)``: ``<A S A - det(Sigma) A, B_i> = 0``
    with ``A = adj(Sigma)``, plus ``t det(Sigma) - 1 = 0`` to discard singular ``Sigma``.

Here ``<A, B> = Tr(AB)``. The subspace ``L^perp`` is never formed; membership
in it is the list of pairings against the basis of ``L``.

Ring variables are ordered ``k{i}_{j}`` (upper triangle, row-major), then
``l1 .. lm``, then ``t``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Optional, Sequence

from .polyring import Polynomial, PolyRing, format_system
from .scalar import DEFAULT_PRIME, PrimeModulus

_MASK64 = (1 << 64) - 1


class Encoding(str, enum.Enum):
    PRIMAL = "PRIMAL"
    REDUCED = "REDUCED"
    ELIMINATED = "ELIMINATED"
    SLICE = "SLICE"


class SplitMix64:
    """The splitmix64 generator; fully determined by its 64-bit seed."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection sampling."""
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            x = self.next()
            if x < limit:
                return x % bound


def _stream(seed: int, prime: int, *tags: int) -> SplitMix64:
    # mix the tags into the seed so (n, m, prime) give unrelated streams
    rng = SplitMix64(seed)
    for tag in (prime, *tags):
        rng = SplitMix64(rng.next() ^ tag)
    return rng


def _random_symmetric(rng: SplitMix64, n: int, p: int) -> list:
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = rng.below(p)
    return M


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                f = rows[r][col] * inv % p
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _upper(M) -> list:
    n = len(M)
    return [M[i][j] for i in range(n) for j in range(i, n)]


@dataclass(frozen=True)
class ModelInstance:
    n: int
    m: int
    basis: tuple  # m symmetric matrices (tuples of tuples) spanning L
    S: tuple
    seed: int
    prime: PrimeModulus


def random_instance(n: int, m: int, seed: int, prime: PrimeModulus = PrimeModulus(DEFAULT_PRIME)) -> ModelInstance:
    """Seeded random generic model; dependent bases are redrawn from the same stream."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 1 <= m <= comb(n + 1, 2):
        raise ValueError(f"m must lie in [1, {comb(n + 1, 2)}] for n = {n}")
    p = prime.p
    rng = _stream(seed, p, n, m)
    while True:
        basis = [_random_symmetric(rng, n, p) for _ in range(m)]
        if rank_mod_p([_upper(B) for B in basis], p) == m:
            break
    S = _random_symmetric(rng, n, p)
    freeze = lambda M: tuple(tuple(r) for r in M)  # noqa: E731
    return ModelInstance(n, m, tuple(freeze(B) for B in basis), freeze(S), seed, prime)


def instance_from_matrices(basis, S, prime: PrimeModulus, seed: int = 0) -> ModelInstance:
    """Wrap explicit integer matrices (reduced mod p) as an instance."""
    p = prime.p
    freeze = lambda M: tuple(tuple(int(x) % p for x in r) for r in M)  # noqa: E731
    basis = tuple(freeze(B) for B in basis)
    S = freeze(S)
    n = len(S)
    for M in (*basis, S):
        if len(M) != n or any(len(r) != n for r in M):
            raise ValueError("matrices must be n x n")
        if any(M[i][j] != M[j][i] for i in range(n) for j in range(n)):
            raise ValueError("matrices must be symmetric")
    if rank_mod_p([_upper(B) for B in basis], p) != len(basis):
        raise ValueError("basis matrices are linearly dependent")
    return ModelInstance(n, len(basis), basis, S, seed, prime)


@dataclass(frozen=True)
class SymbolicSystem:
    ring: PolyRing
    equations: tuple
    encoding: Encoding
    instance: Optional[ModelInstance] = None

    @property
    def variables(self) -> tuple:
        return self.ring.names

    def to_text(self) -> str:
        head = [
            f"# encoding: {self.encoding.value}",
            f"# prime: {self.ring.p}",
            f"# variables: {' '.join(self.ring.names)}",
        ]
        if self.instance is not None:
            inst = self.instance
            head.append(f"# n: {inst.n} m: {inst.m} seed: {inst.seed}")
        return "\n".join(head) + "\n" + format_system(self.equations)


def read_system(text: str) -> SymbolicSystem:
    """Parse the plain-text format written by :meth:`SymbolicSystem.to_text`."""
    meta = {}
    lines = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        else:
            lines.append(line)
    try:
        ring = PolyRing(tuple(meta["variables"].split()), PrimeModulus(int(meta["prime"])))
        encoding = Encoding(meta["encoding"])
    except KeyError as exc:
        raise ValueError(f"missing header field {exc}") from None
    return SymbolicSystem(ring, tuple(ring.parse(s) for s in lines), encoding)


# -- symbolic matrices ---------------------------------------------------------


def matmul(A, B) -> list:
    """Product of matrices whose entries are polynomials or ints (at least one side polynomial)."""
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for r in range(k):
                a, b = A[i][r], B[r][j]
                if isinstance(a, int) and a == 0 or isinstance(b, int) and b == 0:
                    continue
                term = a * b if isinstance(a, Polynomial) else b * a
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def pairing(A, B):
    """``Tr(AB)``."""
    n = len(A)
    acc = None
    for i in range(n):
        for j in range(n):
            a, b = A[i][j], B[j][i]
            term = a * b if isinstance(a, Polynomial) else b * a
            acc = term if acc is None else acc + term
    return acc


def determinant(M) -> Polynomial:
    """Determinant by Laplace expansion along rows, memoized on column subsets."""
    n = len(M)
    ring = next(x.ring for row in M for x in row if isinstance(x, Polynomial))
    if n == 0:
        return ring.one()

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple) -> Polynomial:
        if row == n - 1:
            return ring.zero() + M[row][cols[0]]
        acc = ring.zero()
        for pos, c in enumerate(cols):
            entry = M[row][c]
            if isinstance(entry, int) and entry == 0 or not isinstance(entry, int) and not entry:
                continue
            rest = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = rest * entry
            acc = acc + term if pos % 2 == 0 else acc - term
        return acc

    return minor(0, tuple(range(n)))


def submatrix(M, rows, cols) -> list:
    return [[M[i][j] for j in cols] for i in rows]


def adjugate(M) -> list:
    """Transposed cofactor matrix; ``M adj(M) = det(M) I`` identically."""
    n = len(M)
    ring = next(x.ring for row in M for x in row if isinstance(x, Polynomial))
    if n == 1:
        return [[ring.one()]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows = [r for r in range(n) if r != i]
            cols = [c for c in range(n) if c != j]
            d = determinant(submatrix(M, rows, cols))
            adj[j][i] = d if (i + j) % 2 == 0 else -d
    return adj


def _k_names(n: int, prefix: str = "k") -> list:
    return [f"{prefix}{i + 1}_{j + 1}" for i in range(n) for j in range(i, n)]


def _symmetric_vars(ring: PolyRing, n: int, offset: int = 0) -> list:
    M = [[None] * n for _ in range(n)]
    idx = offset
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = ring.var(idx)
            idx += 1
    return M


def _sigma(ring: PolyRing, inst: ModelInstance, lam: list) -> list:
    n = inst.n
    return [[sum((l * B[i][j] for l, B in zip(lam, inst.basis)), ring.zero()) for j in range(n)] for i in range(n)]


def _k_sigma_minus_identity(K, Sigma) -> list:
    n = len(K)
    KS = matmul(K, Sigma)
    return [KS[i][j] - (1 if i == j else 0) for i in range(n) for j in range(n)]


def _k_system_ring(inst: ModelInstance):
    names = _k_names(inst.n) + [f"l{i + 1}" for i in range(inst.m)]
    ring = PolyRing(tuple(names), inst.prime)
    K = _symmetric_vars(ring, inst.n)
    nk = comb(inst.n + 1, 2)
    lam = [ring.var(nk + i) for i in range(inst.m)]
    return ring, K, lam


def build_primal(inst: ModelInstance) -> SymbolicSystem:
    ring, K, lam = _k_system_ring(inst)
    Sigma = _sigma(ring, inst, lam)
    eqs = _k_sigma_minus_identity(K, Sigma)
    KSK = matmul(matmul(K, [list(r) for r in inst.S]), K)
    n = inst.n
    E = [[KSK[i][j] - K[i][j] for j in range(n)] for i in range(n)]
    eqs += [pairing(E, B) for B in inst.basis]
    return SymbolicSystem(ring, tuple(eqs), Encoding.PRIMAL, inst)


def build_reduced(inst: ModelInstance) -> SymbolicSystem:
    ring, K, lam = _k_system_ring(inst)
    Sigma = _sigma(ring, inst, lam)
    eqs = _k_sigma_minus_identity(K, Sigma)
    K2 = matmul(K, K)
    n = inst.n
    E = [[K2[i][j] - K[i][j] for j in range(n)] for i in range(n)]
    eqs += [pairing(E, B) for B in inst.basis]
    return SymbolicSystem(ring, tuple(eqs), Encoding.REDUCED, inst)


def build_eliminated(inst: ModelInstance, use_S: bool = True) -> SymbolicSystem:
    names = [f"l{i + 1}" for i in range(inst.m)] + ["t"]
    ring = PolyRing(tuple(names), inst.prime)
    lam = [ring.var(i) for i in range(inst.m)]
    n = inst.n
    Sigma = _sigma(ring, inst, lam)
    A = adjugate(Sigma)
    det = sum((Sigma[0][j] * A[j][0] for j in range(n)), ring.zero())
    S = [list(r) for r in inst.S] if use_S else [[int(i == j) for j in range(n)] for i in range(n)]
    ASA = matmul(matmul(A, S), A)
    E = [[ASA[i][j] - det * A[i][j] for j in range(n)] for i in range(n)]
    eqs = [pairing(E, B) for B in inst.basis]
    eqs.append(ring.var("t") * det - 1)
    return SymbolicSystem(ring, tuple(eqs), Encoding.ELIMINATED, inst)


BUILDERS = {
    Encoding.PRIMAL: build_primal,
    Encoding.REDUCED: build_reduced,
    Encoding.ELIMINATED: build_eliminated,
}


def build_system(inst: ModelInstance, encoding) -> SymbolicSystem:
    return BUILDERS[Encoding(encoding)](inst)


def build_corank2_slice(n: int, seed: int, prime: PrimeModulus = PrimeModulus(DEFAULT_PRIME)) -> SymbolicSystem:
    """Symmetric matrices of corank >= 2 on a random projective 3-space.

    The equations are the distinct ``(n-1)``-minors of a symmetric matrix of
    unknowns (``minor(R, C)`` and ``minor(C, R)`` coincide, so only ``R <= C``
    is emitted), ``C(n+1, 2) - 4`` random linear forms cutting the cone down
    to a 4-dimensional linear space, and one random affine form ``l(X) = 1``.
    The corank-2 locus has codimension 3, so the solution count is its degree.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    p = prime.p
    names = _k_names(n, "x")
    ring = PolyRing(tuple(names), prime)
    X = _symmetric_vars(ring, n)
    subsets = list(combinations(range(n), n - 1))
    eqs = []
    for a, R in enumerate(subsets):
        for C in subsets[a:]:
            eqs.append(determinant(submatrix(X, R, C)))
    rng = _stream(seed, p, n, 0x51C)
    gens = ring.gens()
    for rhs in [0] * (len(gens) - 4) + [1]:
        form = sum((g * rng.below(p) for g in gens), ring.zero())
        eqs.append(form - rhs)
    return SymbolicSystem(ring, tuple(eqs), Encoding.SLICE)
