"""Reduced primitive binary quadratic forms of negative discriminant, Gaussian
composition, and the class group structure they generate.  Desk-scale oracle
machinery: everything is exact integer arithmetic."""
from __future__ import annotations

import math

from .linalg import IntMatrix, snf


def _xgcd(a: int, b: int):
    g, s, t = _ext(a, b)
    return g, s, t


def _ext(a, b):
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


def _solve_linmod(a: int, b: int, m: int) -> tuple[int, int]:
    """Solve a*x = b (mod m); returns (x0, step) parametrizing all solutions."""
    g, d, _ = _ext(a, m)
    q, r = divmod(b, g)
    if r != 0:
        raise ArithmeticError("no solution to linear congruence")
    return q * d % m, m // g


def discriminant(form: tuple[int, int, int]) -> int:
    a, b, c = form
    return b * b - 4 * a * c


def normalize(form: tuple[int, int, int]) -> tuple[int, int, int]:
    a, b, c = form
    r = (a - b) // (2 * a)
    return a, b + 2 * r * a, a * r * r + b * r + c


def reduce_form(form: tuple[int, int, int]) -> tuple[int, int, int]:
    a, b, c = normalize(form)
    while not (a < c or (a == c and b >= 0)):
        s = (c + b) // (2 * c)
        a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
    if a == abs(b) and b < 0:
        b = -b
    return a, b, c


def principal_form(disc: int) -> tuple[int, int, int]:
    k = disc % 2
    return (1, k, (k * k - disc) // 4)


def compose(f1, f2, disc) -> tuple[int, int, int]:
    """Gaussian composition of two forms of the same discriminant, reduced.

    The general path also covers squaring; the usual gcd(b,a)|c shortcut
    breaks on ambiguous forms like (2,2,11) at discriminant -84.
    """
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    g = (b1 + b2) // 2
    h = -(b1 - b2) // 2
    w = math.gcd(math.gcd(a1, a2), g)
    j = w
    s = a1 // w
    t = a2 // w
    u = g // w
    mu, nu = _solve_linmod(t * u, h * u + s * c1, s * t)
    lam = _solve_linmod(t * nu, h - t * mu, s)[0]
    k = mu + nu * lam
    l = (k * t - h) // s
    m = (t * u * k - h * u - c1 * s) // (s * t)
    A = s * t
    B = j * u - (k * t + l * s)
    C = k * l - j * m
    return reduce_form((A, B, C))


def reduced_forms(disc: int) -> tuple[tuple[int, int, int], ...]:
    """All primitive reduced forms of a negative discriminant = 0,1 mod 4."""
    if disc >= 0:
        raise ValueError("need a negative discriminant")
    if disc % 4 not in (0, 1):
        raise ValueError("discriminant must be 0 or 1 mod 4")
    out = []
    amax = math.isqrt(abs(disc) // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2 != 0:
                continue
            num = b * b - disc
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            if a == c and b < 0:
                continue
            out.append((a, b, c))
    return tuple(sorted(out))


def class_group_divisors(disc: int) -> tuple[int, ...]:
    """Elementary divisors (descending, trivial factors stripped) of the form
    class group, from the Smith normal form of the multiplication-table
    relation lattice over the non-identity forms."""
    forms = reduced_forms(disc)
    h = len(forms)
    if h == 1:
        return ()
    ident = reduce_form(principal_form(disc))
    gens = [f for f in forms if f != ident]
    index = {f: i for i, f in enumerate(gens)}
    rows = []
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            prod = compose(gens[i], gens[j], disc)
            row = [0] * len(gens)
            row[i] += 1
            row[j] += 1
            if prod != ident:
                row[index[prod]] -= 1
            rows.append(row)
    rel = snf(IntMatrix(rows))
    divisors = rel.divisors
    if any(d == 0 for d in divisors) or math.prod(divisors) != h:
        raise ArithmeticError("relation lattice does not present a group of order h (bug)")
    return tuple(d for d in divisors if d > 1)
