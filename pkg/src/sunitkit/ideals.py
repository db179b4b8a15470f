"""Fractional ideals over the ring of integers: canonical HNF representation,
norms, exact multiplication and inversion, prime splitting above rational
primes, valuations, the six-step ideal factorization that reduces to integer
factoring, S-unit membership, and a brute-force class group for small
imaginary quadratic fields.

Ideal-spec grammar (a sub-document of the field spec, or its own JSON file):

    {"element": ["3", "1/2"]}            # principal ideal, integral-basis coords
    {"hnf": [[5,0],[2,1]], "denominator": 1}   # columns = Z-basis of d*I

Primes dividing the index [O : Z[theta]] are rejected (IndexDivisorError);
the splitting step assumes the power-basis order is p-maximal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import sympy

from .linalg import IntMatrix, column_hnf, hnf, snf
from .numberfield import FieldElement, NumberField, elem_mul, elem_norm

DEFAULT_FACTOR_EFFORT = 2**32


class IdealError(ValueError):
    pass


class IndexDivisorError(IdealError):
    """The requested prime divides [O : Z[theta]]; splitting is unsupported."""


class FactoringEffortError(RuntimeError):
    """Integer factoring exceeded the configured iteration budget."""


@dataclass(frozen=True)
class FractionalIdeal:
    """(1/denominator) times the integral ideal spanned by the columns of
    ``basis`` over the integral basis.  Canonical: basis in HNF, denominator
    minimal, so equality of ideals is equality of representations."""

    field: NumberField
    denominator: int
    basis: IntMatrix

    def __post_init__(self):
        if self.denominator <= 0:
            raise IdealError("denominator must be positive")

    @property
    def n(self) -> int:
        return self.field.n

    def norm(self) -> Fraction:
        return Fraction(math.prod(self.basis.diagonal_entries()), self.denominator**self.n)

    def basis_elements(self) -> tuple[FieldElement, ...]:
        """The Z-basis of the ideal itself (denominator folded in)."""
        inv = Fraction(1, self.denominator)
        return tuple(
            self.field.element([inv * c for c in self.basis.column(j)])
            for j in range(self.n)
        )

    def integral_part_elements(self) -> tuple[FieldElement, ...]:
        return tuple(
            self.field.element(self.basis.column(j)) for j in range(self.n)
        )

    def contains(self, x: FieldElement) -> bool:
        coords = [Fraction(c) * self.denominator for c in x.coords]
        if any(c.denominator != 1 for c in coords):
            return False
        return _in_hnf_span(self.basis, [int(c) for c in coords])

    def __repr__(self):
        return f"FractionalIdeal(den={self.denominator}, basis={self.basis.to_lists()})"


def _in_hnf_span(basis: IntMatrix, vec: list[int]) -> bool:
    """Exact membership of an integer vector in the column span of a
    lower-triangular HNF basis."""
    n = basis.rows
    rem = list(vec)
    for i in range(n):
        piv = basis[i, i]
        if rem[i] % piv != 0:
            return False
        c = rem[i] // piv
        if c:
            for k in range(n):
                rem[k] -= c * basis[k, i]
    return all(r == 0 for r in rem)


def _make_ideal(field: NumberField, denominator: int, columns: Sequence[Sequence[int]]) -> FractionalIdeal:
    """Canonicalize generator columns: HNF, full rank check, minimal denominator."""
    mat = IntMatrix(list(zip(*columns)))  # columns arrive as vectors
    h, _, pivots = column_hnf(mat)
    if len(pivots) != field.n:
        raise IdealError("generators do not span a full-rank lattice")
    cols = [h.column(j) for j in range(field.n)]
    content = 0
    for col in cols:
        for x in col:
            content = math.gcd(content, x)
    g = math.gcd(denominator, content)
    if g > 1:
        denominator //= g
        cols = [[x // g for x in col] for col in cols]
    return FractionalIdeal(field=field, denominator=denominator, basis=IntMatrix(list(zip(*cols))))


def ring_of_integers(field: NumberField) -> FractionalIdeal:
    return FractionalIdeal(field=field, denominator=1, basis=IntMatrix.identity(field.n))


def principal_ideal(field: NumberField, x: FieldElement) -> FractionalIdeal:
    """The fractional ideal generated by a nonzero element."""
    if x.is_zero():
        raise IdealError("zero element generates the zero ideal")
    gens = []
    den = 1
    products = []
    for j in range(field.n):
        omega = field.element([1 if i == j else 0 for i in range(field.n)])
        prod = elem_mul(field, x, omega)
        products.append(prod.coords)
        den = math.lcm(den, *(c.denominator for c in prod.coords))
    for coords in products:
        gens.append([int(c * den) for c in coords])
    return _make_ideal(field, den, gens)


def ideal_from_spec(field: NumberField, doc) -> FractionalIdeal:
    """Parse an ideal-spec sub-document (dict)."""
    if not isinstance(doc, dict):
        raise IdealError("ideal spec must be a mapping")
    if "element" in doc:
        coords = [Fraction(str(c)) for c in doc["element"]]
        if len(coords) != field.n:
            raise IdealError(f"element needs {field.n} coordinates")
        return principal_ideal(field, field.element(coords))
    if "hnf" in doc:
        den = doc.get("denominator", 1)
        if not isinstance(den, int) or den <= 0:
            raise IdealError('"denominator" must be a positive integer')
        rows = doc["hnf"]
        mat = IntMatrix(rows)
        if mat.rows != field.n or mat.cols != field.n:
            raise IdealError(f'"hnf" must be {field.n}x{field.n}')
        cols = [list(mat.column(j)) for j in range(field.n)]
        ideal = _make_ideal(field, den, cols)
        _check_module_closure(ideal)
        return ideal
    raise IdealError('ideal spec needs "element" or "hnf"')


def _check_module_closure(ideal: FractionalIdeal) -> None:
    """An ideal lattice must absorb multiplication by the integral basis."""
    field = ideal.field
    for i in range(field.n):
        omega = field.element([1 if k == i else 0 for k in range(field.n)])
        for b in ideal.integral_part_elements():
            prod = elem_mul(field, omega, b)
            coords = [Fraction(c) for c in prod.coords]
            if any(c.denominator != 1 for c in coords):
                raise IdealError("lattice is not closed under the ring action")
            if not _in_hnf_span(ideal.basis, [int(c) for c in coords]):
                raise IdealError("lattice is not closed under the ring action")


def ideal_mul(I: FractionalIdeal, J: FractionalIdeal) -> FractionalIdeal:
    if I.field != J.field:
        raise IdealError("ideals over different fields")
    field = I.field
    cols = []
    for a in I.integral_part_elements():
        for b in J.integral_part_elements():
            prod = elem_mul(field, a, b)
            cols.append([int(c) for c in prod.coords])
    return _make_ideal(field, I.denominator * J.denominator, cols)


def ideal_inv(I: FractionalIdeal) -> FractionalIdeal:
    """Exact inverse: (1/N(M)) {x in O : x M <= N(M) O} scaled back by the
    denominator, where M is the integral part of I."""
    field = I.field
    n = field.n
    ell = math.prod(I.basis.diagonal_entries())  # = N(M), lies in M
    if ell == 0:
        raise IdealError("zero ideal has no inverse")
    # stack multiplication-by-basis-element matrices
    rows = []
    for b in I.integral_part_elements():
        cols_of_tb = []
        for j in range(n):
            omega = field.element([1 if k == j else 0 for k in range(n)])
            prod = elem_mul(field, b, omega)
            cols_of_tb.append([int(c) for c in prod.coords])
        for i in range(n):
            rows.append([cols_of_tb[j][i] for j in range(n)])
    # kernel of (stack mod ell): columns x with T x in ell * Z^(n^2)
    aug_rows = []
    total_rows = len(rows)
    for i, row in enumerate(rows):
        aug_rows.append(list(row) + [ell if k == i else 0 for k in range(total_rows)])
    aug = IntMatrix(aug_rows)
    h, u, pivots = column_hnf(aug)
    rank = len(pivots)
    kern_cols = []
    for j in range(rank, aug.cols):
        col = u.column(j)
        kern_cols.append(list(col[:n]))
    if not kern_cols:
        raise IdealError("inverse computation found no kernel (bug)")
    inv_int = _make_ideal(field, 1, kern_cols)  # = ell * M^{-1}, integral
    # I^{-1} = den * M^{-1} = (den / ell) * inv_int
    cols = [[I.denominator * x for x in inv_int.basis.column(j)] for j in range(n)]
    return _make_ideal(field, ell * inv_int.denominator, cols)


def ideal_norm(I: FractionalIdeal) -> Fraction:
    return I.norm()


def ideal_pow(I: FractionalIdeal, k: int) -> FractionalIdeal:
    field = I.field
    if k == 0:
        return ring_of_integers(field)
    base = I if k > 0 else ideal_inv(I)
    out = base
    for _ in range(abs(k) - 1):
        out = ideal_mul(out, base)
    return out


# ---------------------------------------------------------------------------
# Prime ideals

@dataclass(frozen=True, order=True)
class PrimeIdeal:
    """Prime above p in two-element form (p, g(theta)); norm p^f."""

    p: int
    f: int  # residue degree: the norm exponent
    e: int  # ramification index
    generator_poly: tuple[int, ...]  # monic, irreducible mod p, coeffs in [0, p)

    @property
    def norm(self) -> int:
        return self.p**self.f


def primes_above(field: NumberField, p: int) -> tuple[PrimeIdeal, ...]:
    """Kummer-Dedekind splitting of p via factoring the defining polynomial
    mod p; requires p not to divide the index [O : Z[theta]]."""
    p = int(p)
    if not sympy.isprime(p):
        raise IdealError(f"{p} is not prime")
    if field.index % p == 0:
        raise IndexDivisorError(
            f"prime {p} divides the index [O:Z[theta]] = {field.index}; unsupported"
        )
    x = sympy.symbols("x")
    expr = sum(int(c) * x**i for i, c in enumerate(field.poly))
    _, factors = sympy.Poly(expr, x, modulus=p).factor_list()
    out = []
    for g, e in factors:
        coeffs = [int(c) % p for c in reversed(g.all_coeffs())]
        out.append(
            PrimeIdeal(p=p, f=g.degree(), e=int(e), generator_poly=tuple(coeffs))
        )
    out.sort()
    if sum(P.e * P.f for P in out) != field.n:
        raise IdealError("splitting degrees do not sum to the field degree (bug)")
    return tuple(out)


def prime_ideal_lattice(field: NumberField, P: PrimeIdeal) -> FractionalIdeal:
    """The HNF lattice of (p, g(theta)) on demand."""
    n = field.n
    gen_power = [Fraction(c) for c in P.generator_poly]
    g_elem = field.from_power_basis(gen_power)
    cols = []
    for j in range(n):
        omega = field.element([1 if k == j else 0 for k in range(n)])
        cols.append([int(c * P.p) for c in omega.coords])
        prod = elem_mul(field, g_elem, omega)
        if any(c.denominator != 1 for c in prod.coords):
            raise IndexDivisorError(
                f"two-element representation of ({P.p}, g) leaves the order; "
                "index divisor suspected"
            )
        cols.append([int(c) for c in prod.coords])
    return _make_ideal(field, 1, cols)


@lru_cache(maxsize=256)
def _anti_uniformizer(field: NumberField, P: PrimeIdeal) -> FieldElement:
    """tau with v_P(tau) = -1 and v_Q(tau) >= 0 elsewhere: a basis vector of
    p * P^{-1} = {x in O : x P <= p O} with a coordinate not divisible by p,
    divided by p."""
    n = field.n
    lat = prime_ideal_lattice(field, P)
    rows = []
    for b in lat.integral_part_elements():
        mat_cols = []
        for j in range(n):
            omega = field.element([1 if k == j else 0 for k in range(n)])
            prod = elem_mul(field, b, omega)
            mat_cols.append([int(c) for c in prod.coords])
        for i in range(n):
            rows.append([mat_cols[j][i] for j in range(n)])
    total = len(rows)
    aug_rows = [list(row) + [P.p if k == i else 0 for k in range(total)] for i, row in enumerate(rows)]
    h, u, pivots = column_hnf(IntMatrix(aug_rows))
    for j in range(len(pivots), len(aug_rows[0])):
        col = u.column(j)[:n]
        if any(c % P.p != 0 for c in col):
            return field.element([Fraction(c, P.p) for c in col])
    raise IdealError("no anti-uniformizer found (bug)")


def _integral_ideal_valuation(field: NumberField, elements, P: PrimeIdeal) -> int:
    """v_P of the ideal spanned by integral elements: iterate multiplication
    by the anti-uniformizer until some coordinate leaves the order."""
    tau = _anti_uniformizer(field, P)
    current = list(elements)
    v = 0
    bound = 64 + sum(
        int(abs(elem_norm(field, e)).numerator).bit_length() for e in current
    )
    while v <= bound:
        nxt = [elem_mul(field, tau, e) for e in current]
        if any(c.denominator != 1 for e in nxt for c in e.coords):
            return v
        current = nxt
        v += 1
    raise IdealError("valuation loop exceeded its bound (bug)")


def valuation(I: FractionalIdeal, P: PrimeIdeal) -> int:
    """Exact v_P of a fractional ideal (negative exponents allowed)."""
    field = I.field
    v_num = _integral_ideal_valuation(field, I.integral_part_elements(), P)
    if I.denominator == 1:
        return v_num
    d_elem = field.element([I.denominator] + [0] * (field.n - 1))
    v_den = _integral_ideal_valuation(field, (d_elem,), P)
    return v_num - v_den


# ---------------------------------------------------------------------------
# Integer factoring (classical stand-in with an explicit effort budget)

@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    return tuple(sympy.primerange(2, 10_000))


def _pollard_brent(n: int, budget: list[int]) -> int:
    """Brent-cycle Pollard rho; deterministic parameter schedule; decrements
    the shared iteration budget and fails loudly when it runs out."""
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        y, m = 2, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                steps = min(m, r - k)
                if budget[0] < steps:
                    raise FactoringEffortError(
                        f"factoring {n} exceeded the configured effort bound"
                    )
                budget[0] -= steps
                for _ in range(steps):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                if budget[0] <= 0:
                    raise FactoringEffortError(
                        f"factoring {n} exceeded the configured effort bound"
                    )
                budget[0] -= 1
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise FactoringEffortError(f"pollard rho parameter schedule exhausted for {n}")


def factor_integer(N: int, effort: int = DEFAULT_FACTOR_EFFORT) -> tuple[int, ...]:
    """Sorted prime multiset with product N (N >= 1), by trial division then
    Pollard-Brent rho under a total iteration budget."""
    N = int(N)
    if N < 1:
        raise ValueError("factor_integer needs a positive integer")
    out: list[int] = []
    for p in _small_primes():
        while N % p == 0:
            out.append(p)
            N //= p
        if p * p > N:
            break
    if N == 1:
        return tuple(sorted(out))
    budget = [int(effort)]
    stack = [N]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if sympy.isprime(m):
            out.append(m)
            continue
        d = _pollard_brent(m, budget)
        stack.append(d)
        stack.append(m // d)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# Ideal factorization (norm, factor, split, valuate, subtract)

@dataclass(frozen=True)
class Factorization:
    field: NumberField
    factors: tuple[tuple[PrimeIdeal, int], ...]

    def support(self) -> tuple[PrimeIdeal, ...]:
        return tuple(P for P, _ in self.factors)

    def norm(self) -> Fraction:
        out = Fraction(1)
        for P, e in self.factors:
            out *= Fraction(P.norm) ** e
        return out


def factor_ideal(
    field: NumberField, I: FractionalIdeal, effort: int = DEFAULT_FACTOR_EFFORT
) -> Factorization:
    """Factor a fractional ideal into prime ideals.

    Steps: norm of the integral part dI; factor that integer; split every
    prime dividing it; valuations of dI; the same for dO; subtract.  Raises
    IndexDivisorError when the support meets a prime dividing the index.
    """
    d = I.denominator
    norm_dI = int(math.prod(I.basis.diagonal_entries()))
    primes = set(factor_integer(norm_dI, effort))
    primes.update(factor_integer(d, effort))
    exponents: dict[PrimeIdeal, int] = {}
    d_elem = field.element([d] + [0] * (field.n - 1))
    for p in sorted(primes):
        for P in primes_above(field, p):
            v_dI = _integral_ideal_valuation(field, I.integral_part_elements(), P)
            v_dO = _integral_ideal_valuation(field, (d_elem,), P) if d > 1 else 0
            e = v_dI - v_dO
            if e:
                exponents[P] = e
    factors = tuple(sorted(exponents.items()))
    fact = Factorization(field=field, factors=factors)
    if fact.norm() != I.norm():
        raise IdealError("factorization does not reproduce the ideal norm (bug)")
    return fact


def reassemble(fact: Factorization) -> FractionalIdeal:
    """Multiply a factorization back together (identity check companion)."""
    out = ring_of_integers(fact.field)
    for P, e in fact.factors:
        out = ideal_mul(out, ideal_pow(prime_ideal_lattice(fact.field, P), e))
    return out


def is_s_unit(field: NumberField, x: FieldElement, S: Sequence[PrimeIdeal]):
    """Whether (x) is supported on S; on success also the exponent vector,
    verified by reassembling x*O*prod p^(-v) back to O."""
    if x.is_zero():
        raise IdealError("zero is not an S-unit")
    fact = factor_ideal(field, principal_ideal(field, x))
    s_list = list(S)
    exps = [0] * len(s_list)
    for P, e in fact.factors:
        if P not in s_list:
            return False, None
        exps[s_list.index(P)] = e
    check = principal_ideal(field, x)
    for P, v in zip(s_list, exps):
        if v:
            check = ideal_mul(check, ideal_pow(prime_ideal_lattice(field, P), -v))
    if check != ring_of_integers(field):
        raise IdealError("S-unit exponent verification failed (bug)")
    return True, tuple(exps)


def class_group_bruteforce(field: NumberField) -> tuple[int, ...]:
    """Elementary divisors of the class group of a small imaginary quadratic
    field, by composing reduced binary quadratic forms and taking the Smith
    normal form of the multiplication-table relation lattice."""
    from . import quadforms

    if field.n != 2 or field.field_disc >= 0:
        raise IdealError("brute-force class group needs an imaginary quadratic field")
    if abs(field.field_disc) > 10_000:
        raise IdealError("discriminant out of supported range (|disc| <= 10^4)")
    return quadforms.class_group_divisors(field.field_disc)
