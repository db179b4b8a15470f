"""Command-line front end: field/ideal ingestion, subcommand dispatch, and
deterministic JSON/table reports.

Subcommands:
    invariants                       field invariants and the embedding check
    factor-ideal                     prime factorization of an ideal
    estimate {unit,sunit,cgp,pip}    qubit-count upper-bound reports
    scgp                             the class-group prime set
    verify {lemma1,lemma2,periodicity}   seeded empirical verification runs

Exit codes: 0 success, 2 usage/parse error, 3 resource/effort exceeded,
4 verification failure.  Every report embeds the resolved configuration, and
identical seed+config produce byte-identical JSON.  Flags can be defaulted
from the environment with the SUNITKIT_ prefix (SUNITKIT_TAU, SUNITKIT_SEED,
SUNITKIT_TRIALS, SUNITKIT_PRECISION, SUNITKIT_FORMAT, SUNITKIT_NORM_LOG_BASE,
SUNITKIT_EFFORT).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import elattice, estimator, ideals
from .elattice import LatticeError, SContext
from .ideals import FactoringEffortError, IdealError, IndexDivisorError
from .linalg import PrincipalLogError
from .numberfield import (
    FieldSpecError,
    NumberField,
    PrecisionError,
    fundamental_unit_real_quadratic,
    parse_field,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_VERIFY = 4

_ENV_PREFIX = "SUNITKIT_"


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration, echoed into every report."""

    subcommand: str
    field_spec_path: Optional[str]
    ideal_path: Optional[str]
    element: Optional[str]
    s_primes: Optional[str]
    tau: float
    seed: int
    trials: int
    precision_bits: int
    output_format: str
    norm_log_base: str
    effort: int

    def validate(self) -> None:
        if self.tau <= 0:
            raise FieldSpecError("tau must be positive")
        if self.trials < 1:
            raise FieldSpecError("trials must be >= 1")
        if self.precision_bits < 64:
            raise FieldSpecError("precision must be >= 64 bits")
        if self.output_format not in ("json", "table"):
            raise FieldSpecError("format must be json or table")
        if self.norm_log_base not in ("e", "2", "10"):
            raise FieldSpecError("norm-log-base must be e, 2, or 10")
        if self.effort < 1:
            raise FieldSpecError("effort must be positive")


def _env_default(name: str, cast, fallback):
    raw = os.environ.get(_ENV_PREFIX + name)
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", required=True, help="path to a field-spec JSON document")
    common.add_argument("--ideal", help="path to an ideal-spec JSON document")
    common.add_argument(
        "--element",
        help='comma-separated rational coordinates over the integral basis, e.g. "3,1/2"',
    )
    common.add_argument("--s-primes", help="comma-separated rational primes whose prime ideals form S")
    common.add_argument("--tau", type=float, default=_env_default("TAU", float, 1e-3))
    common.add_argument("--seed", type=int, default=_env_default("SEED", int, 1))
    common.add_argument("--trials", type=int, default=_env_default("TRIALS", int, 100))
    common.add_argument(
        "--precision", type=int, default=_env_default("PRECISION", int, 128), dest="precision"
    )
    common.add_argument(
        "--format",
        choices=("json", "table"),
        default=_env_default("FORMAT", str, "json"),
        dest="output_format",
    )
    common.add_argument(
        "--norm-log-base",
        choices=("e", "2", "10"),
        default=_env_default("NORM_LOG_BASE", str, "e"),
    )
    common.add_argument(
        "--effort", type=int, default=_env_default("EFFORT", int, ideals.DEFAULT_FACTOR_EFFORT)
    )
    parser = argparse.ArgumentParser(
        prog="sunitkit",
        description="Exact number-field kernels and qubit-count upper bounds "
        "for S-unit, class-group, and principal-ideal quantum algorithms.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("invariants", parents=[common])
    sub.add_parser("factor-ideal", parents=[common])
    est = sub.add_parser("estimate", parents=[common])
    est.add_argument("target", choices=("unit", "sunit", "cgp", "pip"))
    sub.add_parser("scgp", parents=[common])
    ver = sub.add_parser("verify", parents=[common])
    ver.add_argument("check", choices=("lemma1", "lemma2", "periodicity"))
    return parser


def _load_field(config: RunConfig) -> NumberField:
    try:
        with open(config.field_spec_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FieldSpecError(f"cannot read field spec: {exc}") from exc
    return parse_field(text)


def _load_ideal(config: RunConfig, field: NumberField):
    if config.element:
        coords = [Fraction(tok.strip()) for tok in config.element.split(",")]
        return ideals.ideal_from_spec(field, {"element": [str(c) for c in coords]})
    doc = None
    if config.ideal_path:
        with open(config.ideal_path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        with open(config.field_spec_path, "r", encoding="utf-8") as fh:
            doc = json.load(fh).get("ideal")
    if doc is None:
        raise FieldSpecError("no ideal given: use --ideal, --element, or an 'ideal' key")
    return ideals.ideal_from_spec(field, doc)


def _resolve_s_primes(config: RunConfig, field: NumberField):
    if not config.s_primes:
        return ()
    out = []
    for tok in config.s_primes.split(","):
        p = int(tok.strip())
        out.extend(ideals.primes_above(field, p))
    return tuple(out)


# ---------------------------------------------------------------------------
# Subcommand bodies (each returns the result payload of the report)

def cmd_invariants(config: RunConfig, field: NumberField) -> dict:
    emb = field.embeddings(config.precision_bits)
    det_val = float(abs(emb.minkowski.determinant()))
    target = math.sqrt(abs(field.field_disc))
    return {
        "poly": list(field.poly),
        "n": field.n,
        "n1": field.n1,
        "n2": field.n2,
        "unit_rank": field.unit_rank,
        "poly_disc": field.poly_disc,
        "field_disc": field.field_disc,
        "index": field.index,
        "power_basis_assumed": field.power_basis_assumed,
        "minkowski_abs_det": det_val,
        "sqrt_abs_disc": target,
        "minkowski_det_rel_error": abs(det_val - target) / target,
    }


def cmd_factor_ideal(config: RunConfig, field: NumberField) -> dict:
    ideal = _load_ideal(config, field)
    fact = ideals.factor_ideal(field, ideal, config.effort)
    reassembled = ideals.reassemble(fact)
    return {
        "denominator": ideal.denominator,
        "ideal_norm": str(ideals.ideal_norm(ideal)),
        "factors": [
            {"p": P.p, "f": P.f, "e": P.e, "norm": P.norm, "generator": list(P.generator_poly), "exponent": e}
            for P, e in fact.factors
        ],
        "reassembly_ok": reassembled == ideal,
    }


def cmd_estimate(config: RunConfig, field: NumberField, target: str) -> dict:
    model = estimator.DEFAULT_MODEL
    if target == "unit":
        est = estimator.estimate_unit(field, config.tau, model)
    elif target == "sunit":
        S = _resolve_s_primes(config, field)
        est = estimator.estimate_sunit(field, S, config.tau, model)
    elif target == "cgp":
        est = estimator.estimate_cgp(field, config.tau, model)
    elif target == "pip":
        ideal = _load_ideal(config, field)
        est = estimator.estimate_pip(field, ideal, config.tau, model, config.effort)
    else:  # pragma: no cover - argparse restricts choices
        raise FieldSpecError(f"unknown estimate target {target}")
    return est.to_json_dict()


def cmd_scgp(config: RunConfig, field: NumberField) -> dict:
    return estimator.build_scgp(field, config.norm_log_base).to_json_dict()


def cmd_verify(config: RunConfig, field: NumberField, check: str) -> tuple[dict, bool]:
    ctx = SContext(field, _resolve_s_primes(config, field), config.precision_bits)
    if check == "lemma1":
        report = elattice.verify_lemma1(ctx, config.trials, config.seed)
        return report.to_json_dict(), report.assertions_passed
    if check == "lemma2":
        report = elattice.verify_lemma2(ctx, config.trials, config.seed)
        return report.to_json_dict(), report.assertions_passed
    # periodicity: a user element with its S-support, or the fundamental unit
    # of a real quadratic field with S empty
    if config.element:
        coords = [Fraction(tok.strip()) for tok in config.element.split(",")]
        unit = field.element(coords)
        fact = ideals.factor_ideal(field, ideals.principal_ideal(field, unit), config.effort)
        ctx = SContext(field, fact.support(), config.precision_bits)
    elif field.n == 2 and field.field_disc > 0:
        unit = fundamental_unit_real_quadratic(_squarefree_core(field))
    else:
        raise FieldSpecError(
            "periodicity needs --element, or a real quadratic field for the fundamental unit"
        )
    import random

    rng = random.Random(config.seed)
    results = []
    ok_all = True
    for t in range(config.trials):
        point = elattice.random_point(rng, ctx)
        ok = elattice.check_periodicity(ctx, point, unit)
        ok_all = ok_all and ok
        results.append(ok)
    return (
        {
            "check": "periodicity",
            "unit_coords": [str(c) for c in unit.coords],
            "s_primes": [{"p": P.p, "f": P.f, "e": P.e} for P in ctx.primes],
            "trials": config.trials,
            "all_periodic": ok_all,
            "results": results,
        },
        ok_all,
    )


def _squarefree_core(field: NumberField) -> int:
    # x^2 - d with the canonical bases used by real_quadratic_field
    d = -field.poly[0]
    if field.poly[1] != 0 or d <= 1:
        raise FieldSpecError("not a recognized real quadratic field spec (x^2 - d)")
    return d


def render_table(doc, indent: str = "") -> str:
    """Flatten the JSON report into aligned key/value lines (the table format
    is derived from the JSON document, never computed separately)."""
    lines = []
    if isinstance(doc, dict):
        width = max((len(str(k)) for k in doc), default=0)
        for k, v in doc.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{indent}{str(k):<{width}}:")
                lines.append(render_table(v, indent + "  "))
            else:
                lines.append(f"{indent}{str(k):<{width}}: {v}")
    elif isinstance(doc, list):
        for i, v in enumerate(doc):
            if isinstance(v, (dict, list)):
                lines.append(f"{indent}- [{i}]")
                lines.append(render_table(v, indent + "  "))
            else:
                lines.append(f"{indent}- {v}")
    else:
        lines.append(f"{indent}{doc}")
    return "\n".join(line for line in lines if line)


def emit(report: dict, output_format: str) -> str:
    text = json.dumps(report, sort_keys=True, indent=2)
    if output_format == "table":
        return render_table(json.loads(text))
    return text


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        subcommand=args.subcommand,
        field_spec_path=args.field,
        ideal_path=args.ideal,
        element=args.element,
        s_primes=args.s_primes,
        tau=args.tau,
        seed=args.seed,
        trials=args.trials,
        precision_bits=args.precision,
        output_format=args.output_format,
        norm_log_base=args.norm_log_base,
        effort=args.effort,
    )
    verified = True
    try:
        config.validate()
        field = _load_field(config)
        if config.subcommand == "invariants":
            result = cmd_invariants(config, field)
        elif config.subcommand == "factor-ideal":
            result = cmd_factor_ideal(config, field)
        elif config.subcommand == "estimate":
            result = cmd_estimate(config, field, args.target)
        elif config.subcommand == "scgp":
            result = cmd_scgp(config, field)
        elif config.subcommand == "verify":
            result, verified = cmd_verify(config, field, args.check)
        else:  # pragma: no cover
            raise FieldSpecError(f"unknown subcommand {config.subcommand}")
    except (IndexDivisorError, FactoringEffortError, PrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except PrincipalLogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (FieldSpecError, IdealError, LatticeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report = {"config": asdict(config), "result": result}
    print(emit(report, config.output_format))
    return EXIT_OK if verified else EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
