"""Qubit-count upper-bound formulas for the S-unit, unit-group, class-group,
and principal-ideal quantum algorithms, the dual-lattice-sampler register
formula, Lipschitz-constant log bounds, the class-group prime set S_CGP, and
prime/prime-power counting.

Every output is an upper-bound surrogate with unit leading constants: the
underlying results are asymptotic, so all suppressed constants are surfaced
in an explicit CostModel (default 1) and never presented as exact qubit
counts.  Convention: log2 for anything measured in qubits, natural log for
the S_CGP norm bound (configurable) and the prime-counting ratios.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

import sympy

from .linalg import IntMatrix, snf
from .numberfield import NumberField
from . import ideals
from .ideals import FractionalIdeal, PrimeIdeal


class EstimatorError(ValueError):
    pass


@dataclass(frozen=True)
class CostModel:
    """Leading constants for each qubit term (the big-O constants are unknown;
    1 is the displayed surrogate) plus the oracle amplification constant."""

    c_m5: float = 1.0
    c_m4_disc: float = 1.0
    c_m4_snorm: float = 1.0
    c_precision: float = 1.0
    c_pip_factor: float = 1.0
    c_cgp: float = 1.0
    amplification_c: int = 2

    def __post_init__(self):
        for name in ("c_m5", "c_m4_disc", "c_m4_snorm", "c_precision", "c_pip_factor", "c_cgp"):
            if getattr(self, name) <= 0:
                raise EstimatorError(f"{name} must be positive")
        if not isinstance(self.amplification_c, int) or self.amplification_c < 1:
            raise EstimatorError("amplification_c must be a positive integer")


DEFAULT_MODEL = CostModel()


@dataclass(frozen=True)
class ResourceEstimate:
    """Labeled qubit-term breakdown; total is exactly the sum of the terms."""

    formula_id: str
    terms: tuple[tuple[str, float], ...]
    inputs_echo: dict
    variant: Optional["ResourceEstimate"] = None

    @property
    def total(self) -> float:
        return math.fsum(v for _, v in self.terms)

    def term(self, name: str) -> float:
        for k, v in self.terms:
            if k == name:
                return v
        raise KeyError(name)

    def to_json_dict(self) -> dict:
        out = {
            "formula": self.formula_id,
            "terms": {k: v for k, v in self.terms},
            "total_qubits_surrogate": self.total,
            "inputs": dict(self.inputs_echo),
            "note": "upper-bound surrogate (unit constants)",
        }
        if self.variant is not None:
            out["variant"] = self.variant.to_json_dict()
        return out


@dataclass(frozen=True)
class HSPOracleParams:
    """Oracle parameters for the dual-lattice-sampler register count: the
    Lipschitz constant (as log2), the distinguishing radius r, the overlap
    bound epsilon, sampler parameters eta and delta, and a positive lower
    bound on the first minimum of the dual lattice."""

    lip_log2: float
    r: float
    epsilon: float
    eta: float
    delta: float
    lambda1_star_lower: float

    def validate(self, model: CostModel = DEFAULT_MODEL) -> None:
        if not (0 < self.delta < 0.5):
            raise EstimatorError("delta must lie in (0, 1/2)")
        if self.eta <= 0:
            raise EstimatorError("eta must be positive")
        if not (0 < self.epsilon < 1):
            raise EstimatorError("epsilon must lie in (0, 1)")
        if self.epsilon**model.amplification_c >= 0.25:
            raise EstimatorError(
                "epsilon^c must fall below 1/4 after amplification; raise amplification_c"
            )
        if self.lambda1_star_lower <= 0:
            raise EstimatorError("lambda1_star_lower must be positive")
        if self.r < 0:
            raise EstimatorError("r must be nonnegative")


def _log2_abs_disc(field: NumberField) -> float:
    return math.log2(abs(field.field_disc))


def _sum_log2_norms(S: Sequence[PrimeIdeal]) -> float:
    return math.fsum(math.log2(P.norm) for P in S)


def lip_log_bound(field: NumberField, S: Sequence[PrimeIdeal] = (), model: CostModel = DEFAULT_MODEL) -> float:
    """log2 Lipschitz bound of the S-unit oracle: m^2 + m log2|disc| +
    m sum_j log2 N(p_j) with the model constants; the empty set recovers the
    unit-group oracle shape (and 0 at unit rank 0, every term carries m)."""
    m = field.unit_rank
    return (
        model.c_m5 * m**2
        + model.c_m4_disc * m * _log2_abs_disc(field)
        + model.c_m4_snorm * m * _sum_log2_norms(S)
    )


def estimate_Q(m: int, lip_log: float, params: HSPOracleParams, model: CostModel = DEFAULT_MODEL) -> float:
    """Per-dimension qubit count Q of the dual lattice sampler:
    m log2(m log2(1/eta)) + (lip_log + log2 amplification_c)
    + log2(1/(eta delta lambda1*)).  First register and oracle register each
    hold Q*m qubits (see ``register_counts``)."""
    params.validate(model)
    if m < 0:
        raise EstimatorError("m must be nonnegative")
    inner = m * math.log2(1 / params.eta) if m else 0.0
    first = m * math.log2(inner) if inner > 0 else 0.0
    amp = math.log2(model.amplification_c)
    return first + lip_log + amp + math.log2(
        1 / (params.eta * params.delta * params.lambda1_star_lower)
    )


def register_counts(m: int, Q: float) -> dict:
    """First register m*Q qubits; the oracle register stores values on the
    same m*Q budget."""
    return {"first_register_qubits": m * Q, "oracle_register_qubits": m * Q}


def estimate_sunit(
    field: NumberField,
    S: Sequence[PrimeIdeal] = (),
    tau: float = 1e-3,
    model: CostModel = DEFAULT_MODEL,
) -> ResourceEstimate:
    """Qubit upper bound for S-unit group computation, in the unit-rank form
    m^5 + m^4 log2|disc| + m^4 sum log2 N(p) + m log2(1/tau); the attached
    variant is the degree form with |S| max log2 N(p) instead of the sum."""
    if tau <= 0:
        raise EstimatorError("tau must be positive")
    S = tuple(S)
    m = field.unit_rank
    n = field.n
    logd = _log2_abs_disc(field)
    snorm = _sum_log2_norms(S)
    log_tau = math.log2(1 / tau)
    terms = (
        ("m^5", model.c_m5 * float(m**5)),
        ("m^4*log2|disc|", model.c_m4_disc * m**4 * logd),
        ("m^4*sum_log2_norms", model.c_m4_snorm * m**4 * snorm),
        ("m*log2(1/tau)", model.c_precision * m * log_tau),
    )
    max_norm = max((math.log2(P.norm) for P in S), default=0.0)
    n_terms = (
        ("n^5", model.c_m5 * float(n**5)),
        ("n^4*log2|disc|", model.c_m4_disc * n**4 * logd),
        ("n^4*|S|*max_log2_norm", model.c_m4_snorm * n**4 * len(S) * max_norm),
        ("n*log2(1/tau)", model.c_precision * n * log_tau),
    )
    echo = {
        "m": m,
        "n": n,
        "log2_abs_disc": logd,
        "sum_log2_norms": snorm,
        "num_primes": len(S),
        "max_log2_norm": max_norm,
        "log2_inv_tau": log_tau,
    }
    variant = ResourceEstimate(
        formula_id="sunit-qubits-degree-form", terms=n_terms, inputs_echo=echo
    )
    return ResourceEstimate(
        formula_id="sunit-qubits-rank-form", terms=terms, inputs_echo=echo, variant=variant
    )


def estimate_unit(field: NumberField, tau: float = 1e-3, model: CostModel = DEFAULT_MODEL) -> ResourceEstimate:
    """Unit-group qubit bound: exactly the S-unit bound with an empty S."""
    est = estimate_sunit(field, (), tau, model)
    return replace(est, formula_id="unit-group-qubits")


@dataclass(frozen=True)
class SCGPReport:
    """The class-group prime set: every prime ideal of norm at most
     48*(log|disc|)^2, the rational primes scanned, the prime-power count
    estimate at the bound, and any index-divisor primes skipped."""

    norm_bound: float
    log_base: str
    rational_primes: tuple[int, ...]
    prime_ideals: tuple[PrimeIdeal, ...]
    count: int
    prime_power_estimate: float
    skipped_index_divisors: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "norm_bound": self.norm_bound,
            "log_base": self.log_base,
            "rational_primes": list(self.rational_primes),
            "prime_ideals": [
                {"p": P.p, "f": P.f, "e": P.e, "norm": P.norm, "generator": list(P.generator_poly)}
                for P in self.prime_ideals
            ],
            "count": self.count,
            "prime_power_estimate": self.prime_power_estimate,
            "skipped_index_divisors": list(self.skipped_index_divisors),
        }


_LOG_BASES = {"e": math.e, "2": 2.0, "10": 10.0}


def build_scgp(field: NumberField, log_base: str = "e") -> SCGPReport:
    """Enumerate the prime ideals of norm <= 48*(log|disc|)^2.

    The log base of the bound is configurable (default natural log); primes
    dividing the index are recorded as skipped instead of failing the scan.
    """
    if log_base not in _LOG_BASES:
        raise EstimatorError("log_base must be one of e, 2, 10")
    absd = abs(field.field_disc)
    if absd < 2:
        raise EstimatorError("|disc| must be at least 2")
    logv = math.log(absd, _LOG_BASES[log_base])
    bound = 48.0 * logv * logv
    rational = tuple(sympy.primerange(2, int(bound) + 1))
    chosen = []
    skipped = []
    for p in rational:
        if field.index % p == 0:
            skipped.append(p)
            continue
        for P in ideals.primes_above(field, p):
            if P.norm <= bound:
                chosen.append(P)
    chosen.sort()
    estimate = bound / math.log(bound) if bound > 1 else 0.0
    return SCGPReport(
        norm_bound=bound,
        log_base=log_base,
        rational_primes=rational,
        prime_ideals=tuple(chosen),
        count=len(chosen),
        prime_power_estimate=estimate,
        skipped_index_divisors=tuple(skipped),
    )


def prime_power_count(x: int) -> tuple[int, float]:
    """Exact count of prime powers p^k <= x (k >= 1) by prime counting at
    integer roots, and the prime-number-theorem ratio count*ln(x)/x."""
    x = int(x)
    if x < 2:
        raise EstimatorError("x must be at least 2")
    count = 0
    k = 1
    while 2**k <= x:
        root = sympy.integer_nthroot(x, k)[0]
        count += int(sympy.primepi(root))
        k += 1
    ratio = count * math.log(x) / x
    return count, ratio


def estimate_cgp(field: NumberField, tau: float = 1e-3, model: CostModel = DEFAULT_MODEL) -> ResourceEstimate:
    """Class-group qubit bound n^5 + n^4 (log2|disc|)^4 / log2 log2|disc| +
    n log2(1/tau) (GRH shape), with the actually-enumerated S_CGP fed back
    through the S-unit formula as a side-by-side variant."""
    if tau <= 0:
        raise EstimatorError("tau must be positive")
    absd = abs(field.field_disc)
    if absd < 3:
        raise EstimatorError("|disc| must be at least 3 for the loglog term")
    n = field.n
    logd = math.log2(absd)
    loglog = math.log2(logd)
    if loglog <= 0:
        raise EstimatorError("|disc| too small for the loglog term")
    log_tau = math.log2(1 / tau)
    terms = (
        ("n^5", model.c_m5 * float(n**5)),
        ("n^4*(log2|disc|)^4/log2log2|disc|", model.c_cgp * n**4 * logd**4 / loglog),
        ("n*log2(1/tau)", model.c_precision * n * log_tau),
    )
    scgp = build_scgp(field)
    actual = estimate_sunit(field, scgp.prime_ideals, tau, model)
    actual = replace(actual, formula_id="cgp-actual-scgp-sunit", variant=None)
    echo = {
        "n": n,
        "log2_abs_disc": logd,
        "log2_log2_abs_disc": loglog,
        "log2_inv_tau": log_tau,
        "scgp_count": scgp.count,
        "scgp_norm_bound": scgp.norm_bound,
    }
    return ResourceEstimate(
        formula_id="class-group-qubits-grh", terms=terms, inputs_echo=echo, variant=actual
    )


def estimate_pip(
    field: NumberField,
    ideal: FractionalIdeal,
    tau: float = 1e-3,
    model: CostModel = DEFAULT_MODEL,
    effort: int = ideals.DEFAULT_FACTOR_EFFORT,
) -> ResourceEstimate:
    """Principal-ideal-problem qubit bound: the S-unit bound over the support
    of the input ideal plus the factoring register c*log2(N(dI)*N(dO))
    (equal to log2 N(a) for integral ideals)."""
    if tau <= 0:
        raise EstimatorError("tau must be positive")
    fact = ideals.factor_ideal(field, ideal, effort)
    support = fact.support()
    base = estimate_sunit(field, support, tau, model)
    d = ideal.denominator
    n = field.n
    norm_dI = math.prod(ideal.basis.diagonal_entries())
    norm_dO = d**n
    log_norm = math.log2(norm_dI * norm_dO) if norm_dI * norm_dO > 1 else 0.0
    factoring_term = model.c_pip_factor * log_norm
    sum_log2 = _sum_log2_norms(support)
    if sum_log2 > math.log2(norm_dI) + math.log2(norm_dO) + 1e-9:
        raise EstimatorError("support norms exceed the ideal norm budget (bug)")
    terms = base.terms + (("factoring*log2|N|", factoring_term),)
    echo = dict(base.inputs_echo)
    echo.update(
        {
            "log2_norm_dI": math.log2(norm_dI) if norm_dI else 0.0,
            "log2_norm_dO": math.log2(norm_dO),
            "support_size": len(support),
            "sum_log2_support_norms": sum_log2,
        }
    )
    return ResourceEstimate(
        formula_id="pip-qubits", terms=terms, inputs_echo=echo, variant=base.variant
    )


def class_group_structure(valuation_relations: IntMatrix) -> tuple[int, ...]:
    """Elementary divisors (descending, trivial ones stripped) of the abelian
    group presented by integer relation rows over the S_CGP exponents."""
    if valuation_relations.is_zero():
        raise EstimatorError("empty relation matrix presents an infinite group")
    result = snf(valuation_relations)
    cols = valuation_relations.cols
    nonzero = [d for d in result.divisors if d != 0]
    if len(nonzero) < cols:
        raise EstimatorError("relations do not present a finite group (rank deficit)")
    return tuple(d for d in nonzero if d > 1)
