"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples holding Python ints (or ``Fraction`` where
noted).  Nothing in here ever touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import NotSublattice

Matrix = tuple  # tuple[tuple[int, ...], ...]


def as_matrix(rows) -> Matrix:
    rows = tuple(tuple(r) for r in rows)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix")
    return rows


def shape(M):
    return (len(M), len(M[0]) if M else 0)


def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(M):
    if not M:
        return ()
    return tuple(zip(*M))


def matmul(A, B):
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(M, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def columns(M, idx=None):
    """Columns of ``M`` (optionally only those in ``idx``) as tuples."""
    cols = transpose(M)
    if idx is None:
        return list(cols)
    return [cols[j] for j in idx]


def from_columns(cols, nrows):
    if not cols:
        return tuple(() for _ in range(nrows))
    return transpose(cols)


# --- rational elimination -------------------------------------------------


def rref(M):
    """Reduced row echelon form over Q.  Returns ``(R, pivot_columns)``."""
    R = [[Fraction(x) for x in row] for row in M]
    nrows, ncols = shape(M)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(nrows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def nullspace(M):
    """Basis of ``{x in Q^cols : M x = 0}`` as Fraction tuples."""
    ncols = len(M[0]) if M else 0
    if not M:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    R, piv = rref(M)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, piv):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def det(M):
    """Exact determinant (Bareiss fraction-free elimination)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = num / prev if isinstance(num, Fraction) else _exact_div(num, prev)
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
    return Fraction(a) / b


@dataclass(frozen=True)
class AffineSolution:
    """``{particular + sum t_i kernel[i]}`` over Q."""

    particular: tuple
    kernel: tuple

    def contains(self, x) -> bool:
        diff = [Fraction(a) - b for a, b in zip(x, self.particular)]
        if not self.kernel:
            return all(d == 0 for d in diff)
        return solve_rational(transpose(self.kernel), diff) is not None


def solve_rational(M, b) -> Optional[AffineSolution]:
    """Solve ``M v = b`` exactly over Q; ``None`` when inconsistent."""
    nrows, ncols = shape(M)
    b = [Fraction(x) for x in b]
    if nrows == 0:
        return AffineSolution((Fraction(0),) * ncols, tuple(nullspace(M)))
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, piv = rref(aug)
    if ncols in piv:
        return None
    v = [Fraction(0)] * ncols
    for row, p in zip(R, piv):
        v[p] = row[ncols]
    return AffineSolution(tuple(v), tuple(nullspace(M)))


# --- integer normal forms -------------------------------------------------


def hermite_normal_form(M):
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``H = U M``, ``U`` unimodular, ``H`` in echelon
    form with positive pivots, entries above each pivot reduced into
    ``[0, pivot)`` and zero rows at the bottom.  This form is unique, so it
    serves as the canonical representation of the row lattice.
    """
    H = [list(r) for r in M]
    m, n = shape(M)
    U = [list(r) for r in identity(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            H[r], H[p] = H[p], H[r]
            U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if all(H[i][c] == 0 for i in range(r, m)):
            continue
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return as_matrix(H), as_matrix(U)


def smith_normal_form(M):
    """Smith normal form ``S = U M V`` with ``d_1 | d_2 | ...`` on the diagonal."""
    m, n = shape(M)
    S = [list(r) for r in M]
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q row_src
        S[dst] = [a - q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q col_src
        for row in S:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, S[i][t] // S[t][t])
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, S[t][j] // S[t][t])
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if S[i][j] % S[t][t]), None)
            if bad is None:
                break
            # fold the offending row in and reduce again to restore divisibility
            add_row(t, bad[0], -1)
        if t < m and t < n and S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
    return as_matrix(S), as_matrix(U), as_matrix(V)


# --- lattices ---------------------------------------------------------------


@dataclass(frozen=True)
class Lattice:
    """A sublattice of Z^dim stored by its canonical Hermite basis."""

    dim: int
    basis: tuple

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence[int]], dim: int) -> "Lattice":
        gens = [tuple(int(x) for x in g) for g in gens]
        for g in gens:
            if len(g) != dim:
                raise ValueError(f"generator {g} not in Z^{dim}")
        if not gens:
            return cls(dim, ())
        H, _ = hermite_normal_form(gens)
        return cls(dim, tuple(r for r in H if any(r)))

    @classmethod
    def full(cls, dim):
        return cls(dim, identity(dim))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v):
        """Integer coordinates of ``v`` in the basis, or ``None`` if ``v`` is not in the lattice."""
        if not self.basis:
            return () if not any(v) else None
        sol = solve_rational(transpose(self.basis), v)
        if sol is None:
            return None
        if any(x.denominator != 1 for x in sol.particular):
            return None
        return tuple(int(x) for x in sol.particular)

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def is_saturated(self) -> bool:
        return saturate(self) == self


def kernel_lattice(M) -> Lattice:
    """``{u in Z^cols : M u = 0}``; the result is saturated by construction."""
    m, n = shape(M)
    if m == 0:
        return Lattice.full(n)
    H, U = hermite_normal_form(transpose(M))
    gens = [U[i] for i in range(n) if not any(H[i])]
    return Lattice.from_generators(gens, n)


def saturate(L: Lattice) -> Lattice:
    """``QL ∩ Z^n``."""
    if L.rank == 0:
        return L
    if L.rank == L.dim:
        return Lattice.full(L.dim)
    orth = kernel_lattice(L.basis)
    return kernel_lattice(orth.basis)


def lattice_index(sub: Lattice, sup: Lattice):
    """Index ``[sup : sub]``; ``math.inf`` when the ranks differ."""
    if sub.dim != sup.dim:
        raise NotSublattice("ambient dimensions differ")
    coords = []
    for v in sub.basis:
        c = sup.coordinates(v)
        if c is None:
            raise NotSublattice(f"{v} is not in the larger lattice", vector=v)
        coords.append(c)
    if sub.rank != sup.rank:
        return math.inf
    if sub.rank == 0:
        return 1
    return abs(det(coords))


def column_lattice(cols):
    """Lattice spanned by integer column vectors, with integer coordinates of each column.

    Returns ``(L, coords)`` where ``L = Z{cols}`` and ``coords[j]`` expresses
    ``cols[j]`` in the canonical basis of ``L``.  These are the intrinsic
    coordinates used for umbrellas and normalized volumes.
    """
    cols = [tuple(c) for c in cols]
    if not cols:
        raise ValueError("no columns")
    L = Lattice.from_generators(cols, len(cols[0]))
    return L, [L.coordinates(c) for c in cols]


def fraction_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError("boolean is not a rational")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise ValueError(f"not an exact rational: {s!r}")
