"""E-ideal lattices: the oracle map from log-coordinate group points to
Minkowski-embedded ideal lattices, three lattice/group distance surrogates,
periodicity checks against S-units, dual first-minimum bounds, and seeded
empirical reports for the two distance-comparison bounds.

Every "distance" here is a documented upper bound: the underlying
definitions are infima over infinite families (all basis pairs, the whole
S-unit group), so ratios of these surrogates are reported rather than
asserted against unknown constants.
"""
from __future__ import annotations

import cmath
import itertools
import math
import random
import statistics
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import mpmath
from mpmath import mp

from .linalg import (
    IntMatrix,
    PrincipalLogError,
    RealMatrix,
    det,
    frobenius_norm,
    lll_reduce,
    principal_log,
    snf,
)
from .numberfield import (
    EmbeddingData,
    FieldElement,
    GroupPoint,
    NumberField,
    completed_u,
    embed_element,
    phi_map,
)
from . import ideals
from .ideals import FractionalIdeal, PrimeIdeal


class LatticeError(ValueError):
    pass


class SContext:
    """A field, a finite set of prime ideals S, and embeddings at a working
    precision; caches the exact prime-power ideal products the oracle needs."""

    def __init__(self, field: NumberField, primes: Sequence[PrimeIdeal] = (), precision_bits: int = 128):
        primes = tuple(primes)
        if len(set(primes)) != len(primes):
            raise LatticeError("S must consist of pairwise distinct prime ideals")
        self.field = field
        self.primes = primes
        self.precision_bits = precision_bits
        self.emb = field.embeddings(precision_bits)
        self._power_cache: dict[tuple[int, int], FractionalIdeal] = {}
        self._lattice_cache: dict[tuple[int, ...], FractionalIdeal] = {}

    @property
    def norms(self) -> tuple[int, ...]:
        return tuple(P.norm for P in self.primes)

    def prime_power(self, j: int, v: int) -> FractionalIdeal:
        key = (j, v)
        if key not in self._power_cache:
            base = ideals.prime_ideal_lattice(self.field, self.primes[j])
            self._power_cache[key] = ideals.ideal_pow(base, v)
        return self._power_cache[key]

    def ideal_power_product(self, valuations: Sequence[int]) -> FractionalIdeal:
        """The exact fractional ideal prod_j p_j^{valuations[j]}."""
        key = tuple(int(v) for v in valuations)
        if len(key) != len(self.primes):
            raise LatticeError("one exponent per prime of S is required")
        if key not in self._lattice_cache:
            out = ideals.ring_of_integers(self.field)
            for j, v in enumerate(key):
                if v:
                    out = ideals.ideal_mul(out, self.prime_power(j, v))
            self._lattice_cache[key] = out
        return self._lattice_cache[key]

    def zero_point(self) -> GroupPoint:
        return GroupPoint.zero(self.field.n1, self.field.n2, len(self.primes))


@dataclass(frozen=True)
class ELattice:
    """A full-rank lattice in Minkowski coordinates (rows of ``basis`` are the
    generators), optionally remembering the group point that produced it."""

    basis: RealMatrix
    precision_bits: int
    provenance: Optional[tuple[GroupPoint, SContext]] = None

    @property
    def dimension(self) -> int:
        return self.basis.rows


def _flatten_embedding(field: NumberField, values) -> list:
    row = []
    sqrt2 = mp.sqrt(2)
    for j in range(field.n1):
        row.append(mp.re(values[j]))
    for j in range(field.n2):
        v = values[field.n1 + j]
        row.append(sqrt2 * mp.re(v))
        row.append(sqrt2 * mp.im(v))
    return row


def ideal_minkowski_basis(field: NumberField, emb: EmbeddingData, I: FractionalIdeal) -> RealMatrix:
    """Rows = flattened embeddings of the ideal's Z-basis."""
    with mp.workprec(emb.precision_bits + 32):
        rows = [
            _flatten_embedding(field, embed_element(field, emb, b))
            for b in I.basis_elements()
        ]
    return RealMatrix.from_rows(rows, emb.precision_bits)


def oracle_lattice(ctx: SContext, point: GroupPoint) -> ELattice:
    """The lattice assigned to a group point: the Minkowski basis of the exact
    ideal prod p^{-v_j}, scaled componentwise by the conjugate vector of the
    point (valuation-compensated completion, so covolume == sqrt|disc|)."""
    field = ctx.field
    if len(point.valuations) != len(ctx.primes):
        raise LatticeError("point valuation vector does not match S")
    J = ctx.ideal_power_product([-v for v in point.valuations])
    phi = phi_map(field, point, ctx.emb, prime_norms=ctx.norms)
    with mp.workprec(ctx.precision_bits + 32):
        rows = []
        for b in J.basis_elements():
            vals = embed_element(field, ctx.emb, b)
            scaled = [phi[j] * vals[j] for j in range(field.n1 + field.n2)]
            rows.append(_flatten_embedding(field, scaled))
    basis = RealMatrix.from_rows(rows, ctx.precision_bits)
    return ELattice(basis=basis, precision_bits=ctx.precision_bits, provenance=(point, ctx))


def lattices_equal(L1: ELattice, L2: ELattice, tol_exp: Optional[int] = None) -> bool:
    """Numeric lattice equality: solve B2 = T B1, round T to integers, accept
    iff the rounding is exactly unimodular and the residual is below
    2^(-tol_exp) relative to |B2|."""
    if L1.dimension != L2.dimension:
        return False
    prec = min(L1.precision_bits, L2.precision_bits)
    if tol_exp is None:
        tol_exp = prec // 4
    with mp.workprec(prec + 32):
        B1 = L1.basis.to_mp()
        B2 = L2.basis.to_mp()
        T = B2 * (B1**-1)
        n = L1.dimension
        T_int = [[int(mp.nint(T[i, j])) for j in range(n)] for i in range(n)]
        resid = mpmath.matrix(T_int) * B1 - B2
        rnorm = mp.sqrt(mp.fsum(abs(resid[i, j]) ** 2 for i in range(n) for j in range(n)))
        scale = mp.sqrt(mp.fsum(abs(B2[i, j]) ** 2 for i in range(n) for j in range(n)))
        if rnorm > mp.mpf(2) ** (-tol_exp) * max(mp.mpf(1), scale):
            return False
    return abs(det(IntMatrix(T_int))) == 1


def group_image(ctx: SContext, elem: FieldElement, valuations: Optional[Sequence[int]] = None) -> GroupPoint:
    """The group point of a verified S-unit: leading log magnitudes, sign
    bits, torus angles, and its valuation vector over S.  Raises when the
    element is not an S-unit (pass explicit ``valuations`` to bypass the
    check deliberately, e.g. to probe the periodicity contrapositive)."""
    field = ctx.field
    if valuations is None:
        ok, v = ideals.is_s_unit(field, elem, ctx.primes)
        if not ok:
            raise LatticeError("element is not an S-unit for this context")
        valuations = v
    with mp.workprec(ctx.precision_bits + 32):
        vals = embed_element(field, ctx.emb, elem)
        m = field.n1 + field.n2 - 1
        u = []
        for j in range(m):
            u.append(mp.log(abs(vals[j])))
        mu = tuple(1 if mp.re(vals[j]) < 0 else 0 for j in range(field.n1))
        theta = tuple(
            float(mp.arg(vals[field.n1 + j]) / (2 * mp.pi)) % 1.0
            for j in range(field.n2)
        )
    return GroupPoint(u=tuple(u), mu=mu, theta=theta, valuations=tuple(valuations))


def check_periodicity(
    ctx: SContext,
    point: GroupPoint,
    s_unit: FieldElement,
    valuations: Optional[Sequence[int]] = None,
    tol_exp: Optional[int] = None,
) -> bool:
    """Whether shifting a point by the image of an S-unit leaves the oracle
    lattice unchanged (it must, when the valuation vector is the true one)."""
    img = group_image(ctx, s_unit, valuations=valuations)
    L1 = oracle_lattice(ctx, point)
    L2 = oracle_lattice(ctx, point + img)
    return lattices_equal(L1, L2, tol_exp=tol_exp)


# ---------------------------------------------------------------------------
# Distances (documented upper bounds)

def group_metric_norm(field: NumberField, diff: GroupPoint) -> float:
    """Euclidean norm of a group difference: completed log vector (unweighted
    trace-zero convention), sign-bit distances, and wrapped torus distances."""
    with mp.workprec(64):
        u_full = completed_u(field, diff, prime_norms=None)
    parts = [float(x) ** 2 for x in u_full]
    parts += [float(b) ** 2 for b in diff.mu]
    for t in diff.theta:
        t = float(t) % 1.0
        parts.append(min(t, 1.0 - t) ** 2)
    return math.sqrt(math.fsum(parts))


def quotient_elementary_divisors(ctx: SContext, x: GroupPoint, y: GroupPoint):
    """Exact divisor data of the quotient ideal prod p^{-(v'_j - v_j)}:
    ``d_list`` = SNF divisors of its integral (numerator) part against the
    ring, ``d`` = the minimal integer denominator of the rest, and ``a`` =
    the completed log vector of the difference."""
    diff = y - x
    w = diff.valuations
    field = ctx.field
    num = ctx.ideal_power_product([max(-wj, 0) for wj in w])
    den_ideal = ctx.ideal_power_product([max(wj, 0) for wj in w])
    d_list = snf(num.basis).divisors
    d = ideals.ideal_inv(den_ideal).denominator
    with mp.workprec(64):
        a = completed_u(field, diff, prime_norms=None)
    return tuple(float(v) for v in a), d_list, d


def dist_ideal(ctx: SContext, x: GroupPoint, y: GroupPoint) -> float:
    """Upper bound on the ideal distance between the oracle lattices of two
    points: |a| + sum log d_j + n log d from the exhibited numerator/
    denominator decomposition (natural logs)."""
    _, d_list, d = quotient_elementary_divisors(ctx, x, y)
    base = group_metric_norm(ctx.field, y - x)
    return base + math.fsum(math.log(dj) for dj in d_list) + ctx.field.n * math.log(d)


def dist_quotient_group(
    ctx: SContext,
    x: GroupPoint,
    y: GroupPoint,
    unit_candidates: Sequence[FieldElement] = (),
) -> float:
    """Upper bound on the quotient-group distance: minimum over no shift and
    single +-applications of each verified S-unit candidate of
    |a| + sum |w_j| log N(p_j)."""
    images = [group_image(ctx, u) for u in unit_candidates]
    log_norms = [math.log(nrm) for nrm in ctx.norms]
    best = None
    shifts = [None] + [img for img in images] + [-img for img in images]
    for shift in shifts:
        diff = (y - x) if shift is None else (y - x) - shift
        val = group_metric_norm(ctx.field, diff)
        val += math.fsum(abs(wj) * ln for wj, ln in zip(diff.valuations, log_norms))
        if best is None or val < best:
            best = val
    return best


@lru_cache(maxsize=8)
def _unimodular_candidates(n: int):
    """Signed permutations plus single elementary shears with coefficient
    +-1: a bounded, inverse-closed search set for basis recombination."""
    out = []
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            mat = [[0] * n for _ in range(n)]
            for i, (p, s) in enumerate(zip(perm, signs)):
                mat[i][p] = s
            out.append(IntMatrix(mat))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for c in (1, -1):
                mat = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
                mat[i][j] = c
                out.append(IntMatrix(mat))
    return out


_AXIS_TOL = 1e-9


def _float_log_norm(M: list[list[float]]) -> Optional[float]:
    """Machine-precision Frobenius norm of the principal log, used only to
    rank candidates during the search; None when no principal log exists."""
    n = len(M)
    if n == 2:
        (a, b), (c, d) = M
        tr = a + d
        dt = a * d - b * c
        sq = cmath.sqrt(complex(tr * tr - 4 * dt))
        l1, l2 = (tr + sq) / 2, (tr - sq) / 2
        for lam in (l1, l2):
            if abs(lam) < 1e-12:
                return None
            if lam.real < 0 and abs(lam.imag) <= _AXIS_TOL * abs(lam):
                return None
        if abs(l1 - l2) > 1e-9 * max(abs(l1), abs(l2)):
            g1, g2 = cmath.log(l1), cmath.log(l2)
            den = l1 - l2
            A = (
                (g1 * (a - l2) - g2 * (a - l1)) / den,
                (g1 - g2) * b / den,
                (g1 - g2) * c / den,
                (g1 * (d - l2) - g2 * (d - l1)) / den,
            )
        else:
            lam = (l1 + l2) / 2
            g = cmath.log(lam)
            A = (g + (a - lam) / lam, b / lam, c / lam, g + (d - lam) / lam)
        return math.sqrt(math.fsum(abs(x) ** 2 for x in A))
    # small sizes beyond 2: a low-precision mpmath pass
    with mp.workprec(64):
        Mm = mpmath.matrix(M)
        try:
            evals, _ = mp.eig(Mm)
            for lam in evals:
                if abs(lam) < 1e-12:
                    return None
                if mp.re(lam) < 0 and abs(mp.im(lam)) <= _AXIS_TOL * abs(lam):
                    return None
            A = mpmath.logm(Mm)
        except Exception:
            return None
        return float(mp.sqrt(mp.fsum(abs(A[i, j]) ** 2 for i in range(n) for j in range(n))))


def dist_g_upper(L1: ELattice, L2: ELattice) -> float:
    """Upper bound on the geodesic distance between two lattices: LLL-reduce
    both bases, then minimize |log(C * B1 * B2^-1)|_F (and the right-handed
    variant) over the bounded unimodular candidate set.  The true infimum
    over all basis pairs is not computed.

    Candidates are ranked in machine precision; the winner is recomputed
    through the verified full-precision principal logarithm.
    """
    if L1.dimension != L2.dimension:
        raise LatticeError("lattices of different dimensions")
    n = L1.dimension
    prec = min(L1.precision_bits, L2.precision_bits)
    B1 = lll_reduce(L1.basis).to_mp()
    B2 = lll_reduce(L2.basis).to_mp()
    with mp.workprec(prec + 32):
        M0 = B1 * (B2**-1)
    candidates = _unimodular_candidates(n)

    def try_log(mat, prec_bits):
        rm = RealMatrix.from_rows(
            [[mat[i, j] for j in range(n)] for i in range(n)], max(prec_bits, 64)
        )
        try:
            return frobenius_norm(principal_log(rm))
        except PrincipalLogError:
            return None

    M0f = [[float(M0[i, j]) for j in range(n)] for i in range(n)]
    best = None
    for C in candidates:
        Cf = C.to_lists()
        left = [
            [math.fsum(Cf[i][k] * M0f[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        right = [
            [math.fsum(M0f[i][k] * Cf[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        for M, right_side in ((left, False), (right, True)):
            norm = _float_log_norm(M)
            if norm is not None and (best is None or norm < best[0]):
                best = (norm, C, right_side)
    if best is None:
        raise PrincipalLogError(
            "no candidate basis recombination admits a principal logarithm"
        )
    # recompute the winner at full precision
    _, C, right_side = best
    with mp.workprec(prec + 32):
        Cm = mpmath.matrix(C.to_lists())
        M = (M0 * Cm) if right_side else (Cm * M0)
    norm = try_log(M, prec)
    if norm is None:
        # precision promotion can reject a borderline candidate; fall back to
        # the best full-precision candidate overall
        for C in candidates:
            Cm = mpmath.matrix(C.to_lists())
            for M in (Cm * M0, M0 * Cm):
                v = try_log(M, prec)
                if v is not None and (norm is None or v < norm):
                    norm = v
        if norm is None:
            raise PrincipalLogError(
                "no candidate basis recombination admits a principal logarithm"
            )
    return float(norm)


def dual_lambda1_lower(L: ELattice) -> float:
    """Lower bound on the first minimum of the dual lattice: the shortest
    LLL-reduced dual vector divided by the LLL approximation factor."""
    n = L.dimension
    with mp.workprec(L.precision_bits + 32):
        dual = (L.basis.to_mp() ** -1).T
    dual_rm = RealMatrix.from_rows(
        [[dual[i, j] for j in range(n)] for i in range(n)], L.precision_bits
    )
    red = lll_reduce(dual_rm)
    with mp.workprec(L.precision_bits + 32):
        shortest = min(
            mp.sqrt(mp.fsum(mp.mpf(x) ** 2 for x in row)) for row in red.entries
        )
        bound = shortest / mp.mpf(2) ** (mp.mpf(n - 1) / 2)
    return float(bound)


# ---------------------------------------------------------------------------
# Seeded empirical reports for the two distance-comparison bounds

@dataclass(frozen=True)
class LemmaReport:
    """Outcome of a seeded ratio experiment between two distance surrogates.

    ``predicted_bound_shape`` is the asymptotic comparison shape instantiated
    with placeholder constants 1 (unnormalized: the underlying constants are
    never fixed), for display only; assertions cover finiteness and the
    closed-form special cases, never those constants."""

    lemma_id: str
    seed: int
    trials: int
    performed: int
    skipped: int
    ratios: tuple[float, ...]
    max_ratio: float
    median_ratio: float
    predicted_bound_shape: str
    predicted_bound_value: float
    assertions_passed: bool
    failures: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "lemma": self.lemma_id,
            "seed": self.seed,
            "trials": self.trials,
            "performed": self.performed,
            "skipped": self.skipped,
            "ratios": list(self.ratios),
            "max_ratio": self.max_ratio,
            "median_ratio": self.median_ratio,
            "predicted_bound_shape": self.predicted_bound_shape,
            "predicted_bound_value": self.predicted_bound_value,
            "predicted_bound_note": "unnormalized: placeholder constants c_j = 1",
            "assertions_passed": self.assertions_passed,
            "failures": list(self.failures),
        }


def random_point(rng: random.Random, ctx: SContext) -> GroupPoint:
    """Trial point: u uniform in [-1,1]^m, theta uniform, mu uniform bits,
    valuations uniform in {-2..2}.  Draw order is fixed so seeds reproduce."""
    field = ctx.field
    m = field.n1 + field.n2 - 1
    u = tuple(rng.uniform(-1.0, 1.0) for _ in range(m))
    mu = tuple(rng.getrandbits(1) for _ in range(field.n1))
    theta = tuple(rng.random() for _ in range(field.n2))
    vals = tuple(rng.randint(-2, 2) for _ in range(len(ctx.primes)))
    return GroupPoint(u=u, mu=mu, theta=theta, valuations=vals)


_RATIO_FLOOR = 1e-9


def _bound_shape_lemma1(ctx: SContext) -> tuple[str, float]:
    n = ctx.field.n
    shape = "n^(2n+2) + prod_j N(p_j)^(c_j*n)"
    value = float(n ** (2 * n + 2))
    if ctx.norms:
        value += float(math.prod(nrm**n for nrm in ctx.norms))
    return shape, value


def verify_lemma1(ctx: SContext, trials: int, seed: int) -> LemmaReport:
    """Seeded ratios dist_g_upper / dist_ideal over random point pairs."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    ratios = []
    failures = []
    skipped = 0
    for t in range(trials):
        x = random_point(rng, ctx)
        y = random_point(rng, ctx)
        di = dist_ideal(ctx, x, y)
        if di < _RATIO_FLOOR:
            skipped += 1
            continue
        dg = dist_g_upper(oracle_lattice(ctx, x), oracle_lattice(ctx, y))
        ratio = dg / di
        if not math.isfinite(ratio):
            failures.append(f"trial {t}: non-finite ratio {ratio}")
        ratios.append(ratio)
    shape, value = _bound_shape_lemma1(ctx)
    return LemmaReport(
        lemma_id="lattice-vs-ideal-distance",
        seed=seed,
        trials=trials,
        performed=len(ratios),
        skipped=skipped,
        ratios=tuple(ratios),
        max_ratio=max(ratios) if ratios else 0.0,
        median_ratio=statistics.median(ratios) if ratios else 0.0,
        predicted_bound_shape=shape,
        predicted_bound_value=value,
        assertions_passed=not failures,
        failures=tuple(failures),
    )


def verify_lemma2(ctx: SContext, trials: int, seed: int) -> LemmaReport:
    """Seeded ratios dist_ideal / dist_quotient_group, plus the exact
    decomposition inequality sum(log d_j) + n log d <= n * sum |w_j| log N_j
    checked on every trial."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    field = ctx.field
    n = field.n
    log_norms = [math.log(nrm) for nrm in ctx.norms]
    ratios = []
    failures = []
    skipped = 0
    for t in range(trials):
        x = random_point(rng, ctx)
        y = random_point(rng, ctx)
        _, d_list, d = quotient_elementary_divisors(ctx, x, y)
        w = (y - x).valuations
        lhs = math.fsum(math.log(dj) for dj in d_list) + n * math.log(d)
        rhs = n * math.fsum(abs(wj) * ln for wj, ln in zip(w, log_norms))
        if lhs > rhs + 2**-20:
            failures.append(f"trial {t}: divisor bound violated ({lhs} > {rhs})")
        dq = dist_quotient_group(ctx, x, y)
        if dq < _RATIO_FLOOR:
            skipped += 1
            continue
        di = dist_ideal(ctx, x, y)
        ratio = di / dq
        if not math.isfinite(ratio):
            failures.append(f"trial {t}: non-finite ratio {ratio}")
        ratios.append(ratio)
    shape = "O(n) relative to dist_{G/U(S)}"
    return LemmaReport(
        lemma_id="ideal-vs-quotient-distance",
        seed=seed,
        trials=trials,
        performed=len(ratios),
        skipped=skipped,
        ratios=tuple(ratios),
        max_ratio=max(ratios) if ratios else 0.0,
        median_ratio=statistics.median(ratios) if ratios else 0.0,
        predicted_bound_shape=shape,
        predicted_bound_value=float(n),
        assertions_passed=not failures,
        failures=tuple(failures),
    )
