"""Number fields: construction and invariants (signature, discriminant, unit
rank), exact element arithmetic over an integral basis, complex embeddings and
the Minkowski matrix, log-coordinate group points and the map to conjugate
vectors, and fundamental units of real quadratic fields.

Field-spec grammar (JSON text or an equivalent dict):

    {
      "poly": [c0, c1, ..., c_{n-1}],        # monic integer polynomial
                                             # x^n + c_{n-1} x^{n-1} + ... + c0
      "integral_basis": [["1","0"], ["1/2","1/2"]],   # optional, row-major,
                                             # rationals as ints or "p/q" strings
      "precision_bits": 128                  # optional, default 128
    }

An optional "ideal" key holds an ideal-spec sub-document (see ideals module).
When no integral basis is given the power basis is assumed, the discriminant
is the polynomial discriminant, and ``power_basis_assumed`` records that the
maximal order was not verified.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import mpmath
import sympy
from mpmath import mp

from .linalg import IntMatrix, RealMatrix, det

_EMBED_GUARD = 64


class FieldSpecError(ValueError):
    """Malformed or rejected field specification."""


class PrecisionError(ArithmeticError):
    """A numeric routine failed to reach the requested precision."""


# ---------------------------------------------------------------------------
# Exact polynomial helpers over Fraction (ascending coefficient tuples)

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _pneg(a):
    return tuple(-x for x in a)


def _psub(a, b):
    return _padd(a, _pneg(b))


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        coeff = Fraction(a[-1]) / lead
        q[shift] = coeff
        for i, x in enumerate(b):
            a[shift + i] -= coeff * x
        a.pop()
    return _trim(q), _trim(a)


def _pmod(a, b):
    return _pdivmod(a, b)[1]


def _pderiv(a):
    return _trim([i * x for i, x in enumerate(a)][1:])


def _peval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + (Fraction(c) if isinstance(x, Fraction) else c)
    return acc


def _peval_mp(a, x):
    acc = mp.mpf(0)
    for c in reversed(a):
        if isinstance(c, Fraction):
            c = mp.mpf(c.numerator) / mp.mpf(c.denominator)
        acc = acc * x + c
    return acc


def _pxgcd(a, b):
    """Extended gcd in Q[x]: returns (g, s, t), g monic, with s*a + t*b = g."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
        t0, t1 = t1, _psub(t0, _pmul(q, t1))
    if not r0:
        raise ZeroDivisionError("gcd of zero polynomials")
    lead = r0[-1]
    inv = Fraction(1) / Fraction(lead)
    scale = lambda p: tuple(Fraction(x) * inv for x in p)
    return scale(r0), scale(s0), scale(t0)


def sturm_real_root_count(poly: Sequence[int]) -> int:
    """Exact number of distinct real roots of a squarefree polynomial,
    via the sign-variation difference of its Sturm chain at -inf and +inf."""
    f = _trim([Fraction(c) for c in poly])
    chain = [f, _pderiv(f)]
    while chain[-1]:
        rem = _pmod(chain[-2], chain[-1])
        if not rem:
            break
        chain.append(_pneg(rem))

    def variations(signs):
        signs = [s for s in signs if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)

    at_pos = [1 if p[-1] > 0 else -1 for p in chain if p]
    at_neg = [
        (1 if p[-1] > 0 else -1) * (1 if (len(p) - 1) % 2 == 0 else -1)
        for p in chain
        if p
    ]
    return variations(at_neg) - variations(at_pos)


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Resultant of integer polynomials via the Sylvester matrix and exact
    Bareiss determinant; f must be nonconstant."""
    f = _trim(f)
    g = _trim(g)
    n, m = len(f) - 1, len(g) - 1
    if n < 1:
        raise ValueError("resultant base polynomial must be nonconstant")
    if m < 0:
        return 0
    if m == 0:
        return int(g[0]) ** n
    size = n + m
    rows = []
    fc = [int(c) for c in reversed(f)]
    gc = [int(c) for c in reversed(g)]
    for i in range(m):
        rows.append([0] * i + fc + [0] * (size - n - 1 - i))
    for i in range(n):
        rows.append([0] * i + gc + [0] * (size - m - 1 - i))
    return det(IntMatrix(rows))


def poly_discriminant(poly: Sequence[int]) -> int:
    """Discriminant of a monic integer polynomial, exactly."""
    f = _validated_monic(poly)
    n = len(f) - 1
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, _pderiv(f))


def _validated_monic(poly) -> tuple[int, ...]:
    f = _trim([int(c) for c in poly])
    if not f or f[-1] != 1:
        raise FieldSpecError("defining polynomial must be monic with integer coefficients")
    if len(f) - 1 < 2:
        raise FieldSpecError("defining polynomial must have degree at least 2")
    return f


def signature(poly: Sequence[int]) -> tuple[int, int]:
    """(real embeddings, complex-conjugate pairs) of a squarefree monic
    integer polynomial, counted exactly with Sturm sequences."""
    f = _trim([int(c) for c in poly])
    if len(f) < 3:
        raise FieldSpecError("degree must be at least 2")
    n = len(f) - 1
    if poly_discriminant(f) == 0:
        raise FieldSpecError("polynomial is not squarefree")
    n1 = sturm_real_root_count(f)
    if (n - n1) % 2 != 0:
        raise FieldSpecError("inconsistent real root count")
    return n1, (n - n1) // 2


_IRRED_TEST_PRIMES = (2, 3, 5, 7, 11)


def _irreducibility_certificate(f: tuple[int, ...]) -> str:
    """Best-effort irreducibility certificate; raises if reducible or no
    certificate can be produced."""
    n = len(f) - 1
    # rational root scan (definitive for a factor of degree 1)
    c0 = f[0]
    if c0 == 0:
        raise FieldSpecError("reducible: x divides the polynomial")
    for r in sympy.divisors(abs(c0)):
        for root in (r, -r):
            if _peval([Fraction(c) for c in f], Fraction(root)) == 0:
                raise FieldSpecError(f"reducible: rational root {root}")
    if n <= 3:
        return "degree<=3 with no rational root"
    x = sympy.symbols("x")
    expr = sum(int(c) * x**i for i, c in enumerate(f))
    for p in _IRRED_TEST_PRIMES:
        try:
            poly_p = sympy.Poly(expr, x, modulus=p)
        except sympy.polys.polyerrors.PolynomialError:
            continue
        if poly_p.degree() != n:
            continue
        _, factors = poly_p.factor_list()
        if len(factors) == 1 and factors[0][1] == 1:
            return f"irreducible mod {p}"
    # full rational factorization as the last certificate
    _, factors = sympy.Poly(expr, x).factor_list()
    if len(factors) == 1 and factors[0][1] == 1:
        return "irreducible over Q (rational factorization)"
    raise FieldSpecError("reducible polynomial (rational factorization found factors)")


def _parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise FieldSpecError(f"not a rational entry: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError as exc:
            raise FieldSpecError(f"bad rational literal {x!r}") from exc
    raise FieldSpecError(f"not a rational entry: {x!r}")


@dataclass(frozen=True)
class FieldElement:
    """Element of a number field, exact rational coordinates over the
    integral basis."""

    field: "NumberField"
    coords: tuple[Fraction, ...]

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            self._check(other)
            return elem_mul(self.field, self, other)
        return FieldElement(self.field, tuple(Fraction(other) * a for a in self.coords))

    __rmul__ = __mul__

    def inverse(self):
        return elem_inv(self.field, self)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("elements of different fields")


@dataclass(frozen=True)
class GroupPoint:
    """Point of the log-coordinate group: u (free part, length n1+n2-1),
    sign bits mu (length n1), torus angles theta in [0,1) (length n2), and an
    integer valuation vector (one entry per prime of the ambient S-context).

    The missing last u coordinate is reconstructed on demand; see
    ``completed_u`` for the two conventions.
    """

    u: tuple
    mu: tuple[int, ...]
    theta: tuple
    valuations: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "mu", tuple(int(b) & 1 for b in self.mu))
        object.__setattr__(self, "theta", tuple(t - math.floor(t) for t in self.theta))
        object.__setattr__(self, "valuations", tuple(int(v) for v in self.valuations))

    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        return GroupPoint(
            u=tuple(a + b for a, b in zip(self.u, other.u)),
            mu=tuple(a ^ b for a, b in zip(self.mu, other.mu)),
            theta=tuple(a + b for a, b in zip(self.theta, other.theta)),
            valuations=tuple(a + b for a, b in zip(self.valuations, other.valuations)),
        )

    def __sub__(self, other: "GroupPoint") -> "GroupPoint":
        return self + (-other)

    def __neg__(self) -> "GroupPoint":
        return GroupPoint(
            u=tuple(-a for a in self.u),
            mu=self.mu,
            theta=tuple(-t for t in self.theta),
            valuations=tuple(-v for v in self.valuations),
        )

    @classmethod
    def zero(cls, n1: int, n2: int, num_primes: int = 0) -> "GroupPoint":
        return cls(
            u=(0.0,) * (n1 + n2 - 1),
            mu=(0,) * n1,
            theta=(0.0,) * n2,
            valuations=(0,) * num_primes,
        )


@dataclass(frozen=True)
class EmbeddingData:
    """Embeddings of a field at a fixed working precision: the n1 real roots
    (ascending), one root per complex-conjugate pair (positive imaginary
    part, ordered by real then imaginary part), and the flattened Minkowski
    matrix whose row j embeds the j-th integral basis element (each complex
    place contributing sqrt(2)*Re and sqrt(2)*Im columns, so that
    |det| = sqrt(|disc|))."""

    real_roots: tuple
    complex_roots: tuple
    minkowski: RealMatrix
    precision_bits: int


class NumberField:
    """A number field presented by a monic integer polynomial and an exact
    integral basis over the power basis.  Immutable; all derived invariants
    are computed once."""

    def __init__(self, poly, integral_basis=None, power_basis_assumed=None):
        f = _validated_monic(poly)
        _irreducibility_certificate(f)
        self.poly = f
        self.n = len(f) - 1
        self.n1, self.n2 = signature(f)
        self.unit_rank = self.n1 + self.n2 - 1
        self.poly_disc = poly_discriminant(f)

        if integral_basis is None:
            basis = tuple(
                tuple(Fraction(1) if i == j else Fraction(0) for j in range(self.n))
                for i in range(self.n)
            )
            assumed = True
        else:
            basis = tuple(tuple(Fraction(x) for x in row) for row in integral_basis)
            if len(basis) != self.n or any(len(r) != self.n for r in basis):
                raise FieldSpecError("integral basis must be an n x n matrix")
            assumed = False
        if power_basis_assumed is not None:
            assumed = power_basis_assumed
        if basis[0] != tuple(Fraction(1) if j == 0 else Fraction(0) for j in range(self.n)):
            raise FieldSpecError("integral basis must start with the element 1")
        self.integral_basis = basis
        self.power_basis_assumed = assumed

        d = _fraction_matrix_det(basis)
        if d == 0:
            raise FieldSpecError("integral basis is singular")
        inv = Fraction(1) / abs(d)
        if inv.denominator != 1:
            raise FieldSpecError(
                "integral basis determinant must be +-1/index for an integer index"
            )
        self.index = int(inv)
        quotient, rem = divmod(self.poly_disc, self.index**2)
        if rem != 0:
            raise FieldSpecError("poly discriminant not divisible by index^2")
        self.field_disc = quotient
        self._embeddings_cache: dict[int, EmbeddingData] = {}

    # equality by presentation so elements/ideals can check field identity
    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.poly == other.poly
            and self.integral_basis == other.integral_basis
        )

    def __hash__(self):
        return hash((self.poly, self.integral_basis))

    def __repr__(self):
        return f"NumberField(poly={list(self.poly)}, n={self.n}, disc={self.field_disc})"

    @cached_property
    def basis_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        return self.integral_basis

    @cached_property
    def basis_matrix_inv(self) -> tuple[tuple[Fraction, ...], ...]:
        return _fraction_matrix_inv(self.integral_basis)

    def element(self, coords) -> FieldElement:
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != self.n:
            raise ValueError(f"need {self.n} coordinates")
        return FieldElement(self, coords)

    def zero(self) -> FieldElement:
        return self.element([0] * self.n)

    def one(self) -> FieldElement:
        return self.element([1] + [0] * (self.n - 1))

    def generator(self) -> FieldElement:
        """theta, the root of the defining polynomial, in integral-basis coords."""
        power = [Fraction(0)] * self.n
        power[1] = Fraction(1)
        return self.element(_vec_mat(power, self.basis_matrix_inv))

    def to_power_basis(self, x: FieldElement) -> tuple[Fraction, ...]:
        return _vec_mat(x.coords, self.basis_matrix)

    def from_power_basis(self, power_coords) -> FieldElement:
        coords = [Fraction(c) for c in power_coords]
        if len(coords) > self.n:
            coords = list(_pmod(tuple(coords), tuple(Fraction(c) for c in self.poly)))
        coords += [Fraction(0)] * (self.n - len(coords))
        return self.element(_vec_mat(coords, self.basis_matrix_inv))

    def embeddings(self, precision_bits: int = 128) -> EmbeddingData:
        if precision_bits not in self._embeddings_cache:
            self._embeddings_cache[precision_bits] = _compute_embeddings(self, precision_bits)
        return self._embeddings_cache[precision_bits]


def _vec_mat(vec, mat):
    n = len(mat[0])
    return tuple(
        sum((Fraction(vec[i]) * mat[i][j] for i in range(len(mat))), Fraction(0))
        for j in range(n)
    )


def _fraction_matrix_det(mat) -> Fraction:
    m = [list(row) for row in mat]
    n = len(m)
    detv = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            detv = -detv
        detv *= m[k][k]
        inv = Fraction(1) / m[k][k]
        for i in range(k + 1, n):
            factor = m[i][k] * inv
            if factor:
                m[i] = [a - factor * b for a, b in zip(m[i], m[k])]
    return detv


def _fraction_matrix_inv(mat):
    n = len(mat)
    aug = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i, row in enumerate(mat)]
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[k], aug[piv] = aug[piv], aug[k]
        inv = Fraction(1) / aug[k][k]
        aug[k] = [x * inv for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k]:
                factor = aug[i][k]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[k])]
    return tuple(tuple(row[n:]) for row in aug)


def parse_field(spec) -> NumberField:
    """Build a NumberField from a field-spec document (JSON text or dict)."""
    if isinstance(spec, (str, bytes)):
        try:
            doc = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise FieldSpecError(f"field spec is not valid JSON: {exc}") from exc
    elif isinstance(spec, dict):
        doc = spec
    else:
        raise FieldSpecError("field spec must be JSON text or a mapping")
    if "poly" not in doc:
        raise FieldSpecError('field spec needs a "poly" entry')
    coeffs = doc["poly"]
    if not isinstance(coeffs, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in coeffs):
        raise FieldSpecError('"poly" must be a list of integers c0..c_{n-1}')
    poly = list(coeffs) + [1]  # the leading 1 of the monic polynomial is implicit
    basis_doc = doc.get("integral_basis")
    basis = None
    if basis_doc is not None:
        if not isinstance(basis_doc, list):
            raise FieldSpecError('"integral_basis" must be a row-major matrix')
        basis = [[_parse_rational(x) for x in row] for row in basis_doc]
    precision = doc.get("precision_bits", 128)
    if not isinstance(precision, int) or precision < 64:
        raise FieldSpecError('"precision_bits" must be an integer >= 64')
    field = NumberField(poly, basis)
    field.default_precision = precision
    return field


def field_discriminant(field: NumberField) -> int:
    return field.field_disc


# ---------------------------------------------------------------------------
# Element arithmetic

def elem_mul(field: NumberField, x: FieldElement, y: FieldElement) -> FieldElement:
    px = field.to_power_basis(x)
    py = field.to_power_basis(y)
    f = tuple(Fraction(c) for c in field.poly)
    prod = _pmod(_pmul(px, py), f)
    return field.from_power_basis(prod)


def elem_inv(field: NumberField, x: FieldElement) -> FieldElement:
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero field element")
    px = _trim(field.to_power_basis(x))
    f = tuple(Fraction(c) for c in field.poly)
    g, _, t = _pxgcd(f, px)
    if len(g) != 1:
        raise ZeroDivisionError("element is a zero divisor (field polynomial reducible?)")
    inv = tuple(c / g[0] for c in t)
    return field.from_power_basis(_pmod(inv, f))


def elem_norm(field: NumberField, x: FieldElement) -> Fraction:
    """Absolute norm, exact: resultant(f, numerator)/den^n over the power basis."""
    px = _trim(field.to_power_basis(x))
    if not px:
        return Fraction(0)
    den = math.lcm(*(c.denominator for c in px))
    num = [int(c * den) for c in px]
    r = resultant(field.poly, num)
    return Fraction(r, den**field.n)


# ---------------------------------------------------------------------------
# Embeddings

def _compute_embeddings(field: NumberField, precision_bits: int) -> EmbeddingData:
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    n = field.n
    coeffs_desc = [mp.mpf(c) for c in reversed(field.poly)]
    with mp.workprec(precision_bits + _EMBED_GUARD):
        try:
            roots = mpmath.polyroots(
                coeffs_desc, maxsteps=200, extraprec=precision_bits // 2 + 60
            )
        except mpmath.libmp.NoConvergence as exc:
            raise PrecisionError(
                f"root finder did not converge at {precision_bits} bits"
            ) from exc
        # the n1 roots of smallest |Im| are the real ones (counts are exact)
        roots = sorted(roots, key=lambda r: abs(mp.im(r)))
        real_roots = sorted((mp.re(r) for r in roots[: field.n1]), key=lambda v: v)
        complex_roots = [r for r in roots[field.n1 :] if mp.im(r) > 0]
        complex_roots.sort(key=lambda r: (mp.re(r), mp.im(r)))
        if len(complex_roots) != field.n2:
            raise PrecisionError("could not separate conjugate root pairs")
        tol = mp.mpf(2) ** (-(precision_bits // 2))
        for r in list(real_roots) + complex_roots:
            if abs(_peval_mp(field.poly, r)) > tol * max(1, abs(r)) ** n:
                raise PrecisionError("root fails to reproduce the polynomial")

        sqrt2 = mp.sqrt(2)
        rows = []
        for omega in field.integral_basis:
            row = []
            for root in real_roots:
                row.append(_peval_mp(omega, root))
            for root in complex_roots:
                val = _peval_mp(omega, root)
                row.append(sqrt2 * mp.re(val))
                row.append(sqrt2 * mp.im(val))
            rows.append(row)
        mink = RealMatrix.from_rows(rows, precision_bits)
        dm = abs(mink.determinant())
        target = mp.sqrt(abs(mp.mpf(field.field_disc)))
        if abs(dm - target) > mp.mpf(2) ** (-(precision_bits // 4)) * max(1, target):
            raise PrecisionError(
                "Minkowski determinant does not match sqrt(|disc|) at this precision"
            )
    return EmbeddingData(
        real_roots=tuple(real_roots),
        complex_roots=tuple(complex_roots),
        minkowski=mink,
        precision_bits=precision_bits,
    )


def embed_element(field: NumberField, emb: EmbeddingData, x: FieldElement):
    """Values of x under the n1+n2 chosen embeddings (one per conjugate pair)."""
    px = field.to_power_basis(x)
    with mp.workprec(emb.precision_bits + _EMBED_GUARD):
        vals = [_peval_mp(px, r) for r in emb.real_roots]
        vals += [_peval_mp(px, r) for r in emb.complex_roots]
    return tuple(vals)


def completed_u(field: NumberField, point: GroupPoint, prime_norms=None):
    """The full length-(n1+n2) log-magnitude vector of a group point.

    Without ``prime_norms`` the last coordinate closes the unweighted trace,
    u_last = -sum(u_j), the hyperplane the log coordinates are quotiented by.
    With ``prime_norms`` (one ideal norm per valuation entry) the completion
    is weighted by the place degrees (1 real, 2 complex) and compensates the
    valuation part, sum_j d_j u_j = sum_k v_k ln N_k, which is exactly the
    product formula satisfied by S-units; the oracle-lattice construction
    needs this version to be periodic.
    """
    m = field.n1 + field.n2 - 1
    u = list(point.u)
    if len(u) != m:
        raise ValueError(f"point has {len(u)} free log coordinates, need {m}")
    degs = [1] * field.n1 + [2] * field.n2
    if prime_norms is None:
        last = -mp.fsum(u) if u else mp.mpf(0)
        return tuple(u) + (last,)
    if len(prime_norms) != len(point.valuations):
        raise ValueError("need one prime norm per valuation entry")
    target = mp.fsum(
        v * mp.log(mp.mpf(nrm)) for v, nrm in zip(point.valuations, prime_norms)
    )
    weighted = mp.fsum(mp.mpf(d) * mp.mpf(x) for d, x in zip(degs[:m], u))
    last = (target - weighted) / degs[-1]
    return tuple(u) + (last,)


def phi_map(field: NumberField, point: GroupPoint, emb: EmbeddingData, prime_norms=None):
    """Map a group point to its conjugate vector in E (length n1+n2).

    Component j is (-1)^{mu_j} e^{u_j} at real places and
    e^{2 pi i theta_j} e^{u_j} at complex places, with the last u coordinate
    completed per ``completed_u`` (pass prime_norms for the valuation-
    compensated convention used by oracle lattices).
    """
    with mp.workprec(emb.precision_bits + _EMBED_GUARD):
        u_full = completed_u(field, point, prime_norms)
        out = []
        for j in range(field.n1):
            val = mp.e ** mp.mpf(u_full[j])
            if point.mu[j]:
                val = -val
            out.append(val)
        for j in range(field.n2):
            ang = 2 * mp.pi * mp.mpf(point.theta[j])
            out.append(mp.e ** mp.mpc(mp.mpf(u_full[field.n1 + j]), ang))
    return tuple(out)


# ---------------------------------------------------------------------------
# Fundamental units of real quadratic fields

def real_quadratic_field(d: int) -> NumberField:
    """The canonical field Q(sqrt(d)) with its maximal-order basis: {1, theta}
    for d = 2,3 mod 4 and {1, (1+theta)/2} for d = 1 mod 4 (theta = sqrt(d))."""
    d = int(d)
    if d <= 1:
        raise ValueError("d must be a squarefree integer > 1")
    if any(e > 1 for e in sympy.factorint(d).values()):
        raise ValueError(f"{d} is not squarefree")
    if d % 4 == 1:
        basis = [[Fraction(1), Fraction(0)], [Fraction(1, 2), Fraction(1, 2)]]
        return NumberField([-d, 0, 1], basis, power_basis_assumed=False)
    return NumberField([-d, 0, 1], None, power_basis_assumed=False)


def fundamental_unit_real_quadratic(d: int) -> FieldElement:
    """Fundamental unit of Q(sqrt(d)) by the continued-fraction expansion of
    sqrt(d) (d = 2,3 mod 4) or (1+sqrt(d))/2 (d = 1 mod 4), over the field
    returned by :func:`real_quadratic_field`."""
    field = real_quadratic_field(d)
    s = math.isqrt(d)
    if s * s == d:
        raise ValueError("d must not be a perfect square")
    half = d % 4 == 1
    # quadratic irrational (P + sqrt(d))/Q
    P, Q = (1, 2) if half else (0, 1)
    a0 = (P + s) // Q
    stop = 2 * a0 - 1 if half else 2 * a0
    p_prev, p_cur = 1, a0
    q_prev, q_cur = 0, 1
    a = a0
    for _ in range(10 * d + 64):
        P = a * Q - P
        Q = (d - P * P) // Q
        a = (P + s) // Q
        if a == stop:
            break
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
    else:
        raise ArithmeticError("continued fraction period not found")
    p, q = p_cur, q_cur
    # unit = p - q * conj(omega); over {1, omega} that is (p - q, q) in the
    # half-integer case and (p, q) over {1, sqrt(d)}
    coords = (p - q, q) if half else (p, q)
    unit = field.element(coords)
    if abs(elem_norm(field, unit)) != 1:
        raise ArithmeticError("continued fraction did not land on a unit")
    return unit
