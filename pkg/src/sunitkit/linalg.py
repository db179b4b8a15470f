"""Exact integer matrix algebra (HNF, SNF, determinants) and precision-tracked
real matrices (principal logarithm, Frobenius norm, LLL reduction).

Conventions used throughout the package:

* HNF is column-style and lower-triangular: ``m * transform == hnf`` with a
  unimodular ``transform``, positive pivots, and every entry left of a pivot
  reduced into ``[0, pivot)``.  This form is canonical for the column span.
* SNF divisors are stored in descending divisibility order (``d[i+1] | d[i]``);
  ``ascending_divisors`` exposes the more common ascending chain.
* All integer arithmetic is exact (Python ints); no floats enter this module
  except through :class:`RealMatrix`, which carries an explicit precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
from mpmath import mp


class RankError(ValueError):
    """Raised when an operation requires full rank and the input lacks it."""


class PrincipalLogError(ValueError):
    """Raised when a matrix has no principal logarithm (singular, or an
    eigenvalue on the closed negative real axis), or precision is inadequate."""


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, s, t) with g = s*a + t*b and g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class IntMatrix:
    """Immutable dense matrix over arbitrary-precision integers, row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in data)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "_data", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self._data))

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = list(zip(*other._data))
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self._data]
        )

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix([[c * x for x in row] for row in self._data])

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self._data]})"

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._data for x in row)

    def diagonal_entries(self) -> tuple[int, ...]:
        return tuple(self._data[i][i] for i in range(min(self.rows, self.cols)))


def det(m: IntMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant requires a square matrix")
    n = m.rows
    a = m.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class HNFResult:
    hnf: IntMatrix
    transform: IntMatrix  # unimodular; input * transform == hnf


@dataclass(frozen=True)
class SNFResult:
    divisors: tuple[int, ...]  # descending divisibility: divisors[i+1] | divisors[i]
    left: IntMatrix
    right: IntMatrix  # left * input * right == diag(divisors)


def column_hnf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, tuple[int, ...]]:
    """Column-style Hermite reduction of an arbitrary matrix.

    Returns (h, u, pivot_rows) with m*u == h, u unimodular (cols x cols), the
    nonzero columns of h first in staircase form, and zero columns trailing.
    Rank-deficient and wide inputs are allowed; ``hnf`` wraps this with the
    full-column-rank contract.
    """
    r, c = m.rows, m.cols
    cols = [[m[i, j] for i in range(r)] for j in range(c)]
    u = [[1 if i == j else 0 for i in range(c)] for j in range(c)]
    pc = 0
    pivot_rows: list[int] = []
    for i in range(r):
        if pc >= c:
            break
        # Bring a nonzero entry into the pivot column for this row.
        sel = next((j for j in range(pc, c) if cols[j][i] != 0), None)
        if sel is None:
            continue
        if sel != pc:
            cols[pc], cols[sel] = cols[sel], cols[pc]
            u[pc], u[sel] = u[sel], u[pc]
        for j in range(pc + 1, c):
            if cols[j][i] == 0:
                continue
            a, b = cols[pc][i], cols[j][i]
            g, s, t = _xgcd(a, b)
            ua, ub = a // g, b // g
            cp, cj = cols[pc], cols[j]
            cols[pc] = [s * x + t * y for x, y in zip(cp, cj)]
            cols[j] = [-ub * x + ua * y for x, y in zip(cp, cj)]
            up, uj = u[pc], u[j]
            u[pc] = [s * x + t * y for x, y in zip(up, uj)]
            u[j] = [-ub * x + ua * y for x, y in zip(up, uj)]
        if cols[pc][i] < 0:
            cols[pc] = [-x for x in cols[pc]]
            u[pc] = [-x for x in u[pc]]
        piv = cols[pc][i]
        for j in range(pc):
            q = cols[j][i] // piv
            if q:
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[pc])]
                u[j] = [x - q * y for x, y in zip(u[j], u[pc])]
        pivot_rows.append(i)
        pc += 1
    h = IntMatrix(zip(*cols))
    ut = IntMatrix(zip(*u))
    return h, ut, tuple(pivot_rows)


def hnf(m: IntMatrix) -> HNFResult:
    """Canonical column-style lower-triangular HNF of a full-column-rank matrix."""
    h, u, pivot_rows = column_hnf(m)
    if len(pivot_rows) < m.cols:
        raise RankError(
            f"rank-deficient input: rank {len(pivot_rows)} < {m.cols} columns"
        )
    return HNFResult(hnf=h, transform=u)


def _apply_row_pair(a, i, k, s, t, u, v):
    # rows (i,k) <- (s*row_i + t*row_k, u*row_i + v*row_k)
    ri, rk = a[i], a[k]
    a[i] = [s * x + t * y for x, y in zip(ri, rk)]
    a[k] = [u * x + v * y for x, y in zip(ri, rk)]


def _apply_col_pair(a, j, k, s, t, u, v):
    # cols (j,k) <- (s*col_j + t*col_k, u*col_j + v*col_k)
    for row in a:
        x, y = row[j], row[k]
        row[j] = s * x + t * y
        row[k] = u * x + v * y


def snf(m: IntMatrix) -> SNFResult:
    """Smith normal form with unimodular transforms on both sides.

    Divisors come back in descending divisibility order (the chain
    ``divisors[i+1] | divisors[i]`` holds); zeros, if the input is
    rank-deficient, sort first since everything divides 0.
    """
    if m.is_zero():
        raise ValueError("zero matrix has no Smith normal form here")
    r, c = m.rows, m.cols
    a = m.to_lists()
    left = IntMatrix.identity(r).to_lists()
    right = IntMatrix.identity(c).to_lists()
    k = min(r, c)

    for t in range(k):
        # Locate a pivot of smallest magnitude in the trailing block.
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        if bi != t:
            a[t], a[bi] = a[bi], a[t]
            left[t], left[bi] = left[bi], left[t]
        if bj != t:
            for row in a:
                row[t], row[bj] = row[bj], row[t]
            for row in right:
                row[t], row[bj] = row[bj], row[t]
        while True:
            for i in range(r):
                if i != t and a[i][t] != 0:
                    piv, b = a[t][t], a[i][t]
                    if b % piv == 0:
                        # plain shear keeps the pivot row untouched (no oscillation)
                        q = b // piv
                        a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                        left[i] = [x - q * y for x, y in zip(left[i], left[t])]
                    else:
                        g, s, tt = _xgcd(piv, b)
                        ua, ub = piv // g, b // g
                        _apply_row_pair(a, t, i, s, tt, -ub, ua)
                        _apply_row_pair(left, t, i, s, tt, -ub, ua)
            for j in range(c):
                if j != t and a[t][j] != 0:
                    piv, b = a[t][t], a[t][j]
                    if b % piv == 0:
                        q = b // piv
                        for row in a:
                            row[j] -= q * row[t]
                        for row in right:
                            row[j] -= q * row[t]
                    else:
                        g, s, tt = _xgcd(piv, b)
                        ua, ub = piv // g, b // g
                        _apply_col_pair(a, t, j, s, tt, -ub, ua)
                        _apply_col_pair(right, t, j, s, tt, -ub, ua)
            if all(a[i][t] == 0 for i in range(r) if i != t) and all(
                a[t][j] == 0 for j in range(c) if j != t
            ):
                break

    # Enforce the ascending divisibility chain on the diagonal.
    changed = True
    while changed:
        changed = False
        for i in range(k - 1):
            di, dj = a[i][i], a[i + 1][i + 1]
            if dj == 0 or di == 0:
                if di == 0 and dj != 0:
                    # zeros sort after nonzero divisors in the ascending chain
                    _apply_row_pair(a, i, i + 1, 0, 1, 1, 0)
                    _apply_row_pair(left, i, i + 1, 0, 1, 1, 0)
                    _apply_col_pair(a, i, i + 1, 0, 1, 1, 0)
                    _apply_col_pair(right, i, i + 1, 0, 1, 1, 0)
                    changed = True
                continue
            if dj % di != 0:
                # col_i += col_{i+1}, then re-eliminate the 2x2 block
                _apply_col_pair(a, i, i + 1, 1, 1, 0, 1)
                _apply_col_pair(right, i, i + 1, 1, 1, 0, 1)
                g, s, tt = _xgcd(a[i][i], a[i + 1][i])
                ua, ub = a[i][i] // g, a[i + 1][i] // g
                _apply_row_pair(a, i, i + 1, s, tt, -ub, ua)
                _apply_row_pair(left, i, i + 1, s, tt, -ub, ua)
                q = a[i][i + 1] // a[i][i]
                _apply_col_pair(a, i + 1, i, 1, -q, 0, 1)
                _apply_col_pair(right, i + 1, i, 1, -q, 0, 1)
                changed = True
    for i in range(k):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            left[i] = [-x for x in left[i]]

    # Flip the ascending chain into the descending storage convention.
    perm = list(range(k))[::-1] + list(range(k, r))
    a = [a[p] for p in perm]
    left = [left[p] for p in perm]
    colperm = list(range(k))[::-1] + list(range(k, c))
    a = [[row[p] for p in colperm] for row in a]
    right = [[row[p] for p in colperm] for row in right]

    divisors = tuple(a[i][i] for i in range(k))
    return SNFResult(divisors=divisors, left=IntMatrix(left), right=IntMatrix(right))


def ascending_divisors(result: SNFResult) -> tuple[int, ...]:
    """SNF divisors in the common ascending convention d1 | d2 | ..."""
    return tuple(reversed(result.divisors))


# ---------------------------------------------------------------------------
# Precision-tracked real matrices

_GUARD_BITS = 32


@dataclass(frozen=True)
class RealMatrix:
    """Dense real matrix with an explicit binary working precision.

    Entries are mpmath mpf values computed at ``precision_bits``; every
    derived result carries the minimum precision of its inputs.
    """

    entries: tuple[tuple, ...]
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        if not self.entries or not self.entries[0]:
            raise ValueError("empty matrix")

    @classmethod
    def from_rows(cls, rows, precision_bits: int) -> "RealMatrix":
        with mp.workprec(precision_bits):
            data = tuple(tuple(_to_mpf(x) for x in row) for row in rows)
        return cls(entries=data, precision_bits=precision_bits)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def to_mp(self) -> mpmath.matrix:
        return mpmath.matrix([list(r) for r in self.entries])

    def transpose(self) -> "RealMatrix":
        return RealMatrix(tuple(zip(*self.entries)), self.precision_bits)

    def __mul__(self, other: "RealMatrix") -> "RealMatrix":
        prec = min(self.precision_bits, other.precision_bits)
        with mp.workprec(prec + _GUARD_BITS):
            prod = self.to_mp() * other.to_mp()
        return _from_mp(prod, prec)

    def inverse(self) -> "RealMatrix":
        with mp.workprec(self.precision_bits + _GUARD_BITS):
            inv = self.to_mp() ** -1
        return _from_mp(inv, self.precision_bits)

    def determinant(self):
        with mp.workprec(self.precision_bits + _GUARD_BITS):
            return mp.det(self.to_mp())


def _to_mpf(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / mp.mpf(x.denominator)
    return mp.mpf(x)


def _from_mp(m: mpmath.matrix, precision_bits: int) -> RealMatrix:
    data = tuple(tuple(m[i, j] for j in range(m.cols)) for i in range(m.rows))
    return RealMatrix(entries=data, precision_bits=precision_bits)


def frobenius_norm(m: RealMatrix):
    """sqrt of the sum of squared entries, at the matrix's own precision."""
    with mp.workprec(m.precision_bits + _GUARD_BITS):
        return mp.sqrt(mp.fsum(abs(x) ** 2 for row in m.entries for x in row))


def principal_log(m: RealMatrix) -> RealMatrix:
    """Principal matrix logarithm A with exp(A) recovering m.

    Requires an invertible input with no eigenvalue on the closed negative
    real axis; anything else raises PrincipalLogError rather than returning
    NaNs.  The result is verified by exponentiating back, so a success is a
    certificate at roughly half the working precision.
    """
    if m.rows != m.cols:
        raise ValueError("principal_log requires a square matrix")
    prec = m.precision_bits
    with mp.workprec(prec + 2 * _GUARD_BITS):
        M = m.to_mp()
        scale = mpmath.mnorm(M, 1)
        if scale == 0:
            raise PrincipalLogError("zero matrix is singular")
        try:
            eigvals, _ = mp.eig(M)
        except Exception as exc:  # mpmath signals breakdowns with generic errors
            raise PrincipalLogError(f"eigendecomposition failed: {exc}") from exc
        tol_sing = mp.mpf(2) ** (-prec // 2) * scale
        tol_axis = mp.mpf(2) ** (-prec // 4)
        for lam in eigvals:
            if abs(lam) <= tol_sing:
                raise PrincipalLogError("matrix is singular at working precision")
            if mp.re(lam) < 0 and abs(mp.im(lam)) <= tol_axis * abs(lam):
                raise PrincipalLogError(
                    "eigenvalue on the closed negative real axis: no principal logarithm"
                )
        try:
            A = mpmath.logm(M)
        except Exception as exc:
            raise PrincipalLogError(f"matrix logarithm did not converge: {exc}") from exc
        resid = mpmath.expm(A) - M
        rnorm = mp.sqrt(mp.fsum(abs(resid[i, j]) ** 2 for i in range(A.rows) for j in range(A.cols)))
        mnorm = mp.sqrt(mp.fsum(abs(M[i, j]) ** 2 for i in range(M.rows) for j in range(M.cols)))
        if rnorm > mp.mpf(2) ** (-prec // 2) * max(mp.mpf(1), mnorm):
            raise PrincipalLogError("exp(log m) residual exceeds precision contract")
        # A real input off the negative axis has a real principal log; chop
        # the spurious imaginary dust the complex solver leaves behind.
        chop = mp.mpf(2) ** (-prec // 2) * max(mp.mpf(1), mnorm)
        data = []
        for i in range(A.rows):
            row = []
            for j in range(A.cols):
                v = A[i, j]
                if isinstance(v, mp.mpc):
                    if abs(v.imag) > chop:
                        raise PrincipalLogError("principal logarithm is not real")
                    v = v.real
                row.append(v)
            data.append(row)
    return RealMatrix.from_rows(data, prec)


def lll_reduce(m: RealMatrix, delta: float = 0.99) -> RealMatrix:
    """LLL-reduce the rows of a full-rank real basis matrix."""
    prec = m.precision_bits
    with mp.workprec(prec + _GUARD_BITS):
        basis = [[mp.mpf(x) for x in row] for row in m.entries]
        n = len(basis)

        def gram_schmidt(b):
            ortho = []
            mu = [[mp.mpf(0)] * n for _ in range(n)]
            for i in range(n):
                v = list(b[i])
                for j in range(len(ortho)):
                    denom = mp.fsum(x * x for x in ortho[j])
                    mu[i][j] = mp.fsum(x * y for x, y in zip(b[i], ortho[j])) / denom
                    v = [x - mu[i][j] * y for x, y in zip(v, ortho[j])]
                ortho.append(v)
            return ortho, mu

        ortho, mu = gram_schmidt(basis)
        k = 1
        while k < n:
            for j in range(k - 1, -1, -1):
                q = mp.nint(mu[k][j])
                if q:
                    basis[k] = [x - q * y for x, y in zip(basis[k], basis[j])]
                    ortho, mu = gram_schmidt(basis)
            bk = mp.fsum(x * x for x in ortho[k])
            bk1 = mp.fsum(x * x for x in ortho[k - 1])
            if bk >= (mp.mpf(delta) - mu[k][k - 1] ** 2) * bk1:
                k += 1
            else:
                basis[k], basis[k - 1] = basis[k - 1], basis[k]
                ortho, mu = gram_schmidt(basis)
                k = max(k - 1, 1)
    return RealMatrix.from_rows(basis, prec)
