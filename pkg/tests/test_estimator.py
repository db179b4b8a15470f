import math
import random

import pytest

from sunitkit import (
    CostModel,
    EstimatorError,
    HSPOracleParams,
    IntMatrix,
    build_scgp,
    class_group_structure,
    estimate_Q,
    estimate_cgp,
    estimate_pip,
    estimate_sunit,
    estimate_unit,
    lip_log_bound,
    prime_power_count,
    primes_above,
    principal_ideal,
    register_counts,
    ring_of_integers,
)
from sunitkit import quadforms

from oracles import sieve_prime_power_count, sieve_primes


def params(**kw):
    base = dict(lip_log2=10.0, r=1.0, epsilon=0.4, eta=0.25, delta=0.25, lambda1_star_lower=0.5)
    base.update(kw)
    return HSPOracleParams(**base)


class TestLipLogBound:
    def test_rank_zero_vanishes(self, q_i):
        assert lip_log_bound(q_i, ()) == 0.0

    def test_empty_s_is_unit_group_shape(self, q_sqrt2):
        m = q_sqrt2.unit_rank
        expected = m**2 + m * math.log2(8)
        assert abs(lip_log_bound(q_sqrt2, ()) - expected) < 1e-12

    def test_split_primes_add_their_norms(self, q_sqrt2):
        S = primes_above(q_sqrt2, 7)
        expected = lip_log_bound(q_sqrt2, ()) + sum(math.log2(P.norm) for P in S)
        assert abs(lip_log_bound(q_sqrt2, S) - expected) < 1e-12


class TestEstimateQ:
    def test_direct_arithmetic_oracle(self):
        # m=2, eta=delta=1/4, lip=10, lambda>=1/2, amplification 2:
        # 2*log2(2*2) + 10 + 1 + log2(32) = 4 + 10 + 1 + 5
        assert abs(estimate_Q(2, 10.0, params()) - 20.0) < 1e-12

    def test_halving_delta_adds_one(self):
        q1 = estimate_Q(2, 10.0, params())
        q2 = estimate_Q(2, 10.0, params(delta=0.125))
        assert abs((q2 - q1) - 1.0) < 1e-12

    def test_doubling_lambda_subtracts_one(self):
        q1 = estimate_Q(2, 10.0, params())
        q2 = estimate_Q(2, 10.0, params(lambda1_star_lower=1.0))
        assert abs((q1 - q2) - 1.0) < 1e-12

    def test_registers(self):
        q = estimate_Q(2, 10.0, params())
        regs = register_counts(2, q)
        assert regs["first_register_qubits"] == 2 * q
        assert regs["oracle_register_qubits"] == 2 * q

    def test_invariants_enforced(self):
        with pytest.raises(EstimatorError):
            estimate_Q(2, 10.0, params(delta=0.7))
        with pytest.raises(EstimatorError):
            estimate_Q(2, 10.0, params(eta=0.0))
        with pytest.raises(EstimatorError):
            estimate_Q(2, 10.0, params(lambda1_star_lower=0.0))
        with pytest.raises(EstimatorError):
            # 0.9^2 = 0.81 >= 1/4 after default amplification
            estimate_Q(2, 10.0, params(epsilon=0.9))

    def test_amplification_raises_budget(self):
        # a larger amplification constant legalizes the epsilon and adds log2 c
        model = CostModel(amplification_c=16)
        q = estimate_Q(2, 10.0, params(epsilon=0.9), model)
        base = estimate_Q(2, 10.0, params(), CostModel(amplification_c=2))
        assert abs((q - base) - 3.0) < 1e-12


class TestEstimateSUnit:
    def test_empty_s_equals_unit_group(self, q_sqrt2):
        assert estimate_sunit(q_sqrt2, (), 1e-3).terms == estimate_unit(q_sqrt2, 1e-3).terms

    def test_terms_recomputed_independently(self, q_sqrt2):
        S = primes_above(q_sqrt2, 5)
        est = estimate_sunit(q_sqrt2, S, 1e-3)
        m = q_sqrt2.unit_rank
        assert est.term("m^5") == m**5
        assert abs(est.term("m^4*log2|disc|") - m**4 * math.log2(8)) < 1e-12
        assert abs(
            est.term("m^4*sum_log2_norms") - m**4 * sum(math.log2(P.norm) for P in S)
        ) < 1e-12
        assert abs(est.term("m*log2(1/tau)") - m * math.log2(1000)) < 1e-12
        assert est.total == math.fsum(v for _, v in est.terms)

    def test_adding_prime_strictly_increases(self, q_sqrt2):
        S5 = primes_above(q_sqrt2, 5)
        assert estimate_sunit(q_sqrt2, S5, 1e-3).total > estimate_sunit(q_sqrt2, (), 1e-3).total

    def test_variant_degree_form(self, q_sqrt2):
        S = primes_above(q_sqrt2, 7)
        est = estimate_sunit(q_sqrt2, S, 1e-3)
        v = est.variant
        n = q_sqrt2.n
        assert v.term("n^5") == n**5
        assert abs(
            v.term("n^4*|S|*max_log2_norm")
            - n**4 * len(S) * max(math.log2(P.norm) for P in S)
        ) < 1e-12

    def test_monotone_in_all_inputs(self):
        # sweep over synthetic fields and parameters
        from sunitkit import parse_field

        f_small = parse_field({"poly": [-2, 0]})  # disc 8
        f_large = parse_field({"poly": [-19, 0]})  # disc 76
        assert estimate_sunit(f_large, (), 1e-3).total > estimate_sunit(f_small, (), 1e-3).total
        assert (
            estimate_sunit(f_small, (), 1e-6).total > estimate_sunit(f_small, (), 1e-3).total
        )

    def test_tau_guard(self, q_sqrt2):
        with pytest.raises(EstimatorError):
            estimate_sunit(q_sqrt2, (), 0.0)

    def test_cost_model_scales_terms(self, q_sqrt2):
        model = CostModel(c_m5=3.0)
        est = estimate_sunit(q_sqrt2, (), 1e-3, model)
        assert est.term("m^5") == 3.0


class TestSCGP:
    def test_gaussian_bound_and_prime_count(self, q_i):
        rep = build_scgp(q_i)
        assert abs(rep.norm_bound - 48 * math.log(4) ** 2) < 1e-9
        assert len(rep.rational_primes) == len(sieve_primes(int(rep.norm_bound)))
        assert len(rep.rational_primes) == 24

    def test_every_entry_below_bound(self, quadratic_fields):
        for field in quadratic_fields.values():
            rep = build_scgp(field)
            assert all(P.norm <= rep.norm_bound for P in rep.prime_ideals)
            assert rep.count == len(rep.prime_ideals)

    def test_inert_primes_filtered_by_norm(self, q_i):
        rep = build_scgp(q_i)
        assert any(P.p == 3 and P.f == 2 for P in rep.prime_ideals)  # 9 <= 92.2
        assert not any(P.p == 11 for P in rep.prime_ideals)  # 121 > 92.2

    def test_brute_force_enumeration_agrees(self, quadratic_fields):
        for field in quadratic_fields.values():
            rep = build_scgp(field)
            expected = 0
            for p in sieve_primes(int(rep.norm_bound)):
                if field.index % p == 0:
                    assert p in rep.skipped_index_divisors
                    continue
                for P in primes_above(field, p):
                    if P.norm <= rep.norm_bound:
                        expected += 1
            assert rep.count == expected

    def test_index_divisors_skipped_not_fatal(self, q_sqrt5):
        rep = build_scgp(q_sqrt5)
        assert 2 in rep.skipped_index_divisors

    def test_log_base_configurable(self, q_i):
        rep2 = build_scgp(q_i, log_base="2")
        assert abs(rep2.norm_bound - 48 * 4.0) < 1e-12


class TestPrimePowerCount:
    def test_examples(self):
        assert prime_power_count(2)[0] == 1
        assert prime_power_count(10)[0] == 7
        assert prime_power_count(100)[0] == 35

    def test_sieve_oracle(self):
        rng = random.Random(71)
        for _ in range(10):
            x = rng.randint(2, 5000)
            assert prime_power_count(x)[0] == sieve_prime_power_count(x)

    def test_pnt_ratio_band(self):
        for x in (10**4, 10**5, 10**6):
            _, ratio = prime_power_count(x)
            assert 0.8 <= ratio <= 1.3


class TestEstimateCGP:
    def test_terms(self, q_i):
        est = estimate_cgp(q_i, 1e-3)
        n = q_i.n
        logd = math.log2(4)
        assert est.term("n^5") == n**5
        assert abs(
            est.term("n^4*(log2|disc|)^4/log2log2|disc|")
            - n**4 * logd**4 / math.log2(logd)
        ) < 1e-12

    def test_tau_one_removes_precision_term(self, q_i):
        assert estimate_cgp(q_i, 1.0).term("n*log2(1/tau)") == 0.0

    def test_dual_path_reported(self, q_i):
        est = estimate_cgp(q_i, 1e-3)
        assert est.variant.formula_id == "cgp-actual-scgp-sunit"
        assert math.isfinite(est.variant.total)

    def test_quartic_scaling_of_middle_term(self):
        from sunitkit import parse_field

        f1 = parse_field({"poly": [-5, 0]})  # disc 20
        f2 = parse_field({"poly": [-399, 0]})  # disc 1596: log roughly doubles
        t1 = estimate_cgp(f1, 1e-3).term("n^4*(log2|disc|)^4/log2log2|disc|")
        t2 = estimate_cgp(f2, 1e-3).term("n^4*(log2|disc|)^4/log2log2|disc|")
        l1, l2 = math.log2(20), math.log2(1596)
        expected = (l2 / l1) ** 4 * (math.log2(l1) / math.log2(l2))
        assert abs(t2 / t1 - expected) < 1e-9


class TestEstimatePIP:
    def test_full_ring_reduces_to_unit_estimate(self, q_i):
        est = estimate_pip(q_i, ring_of_integers(q_i), 1e-3)
        base = estimate_sunit(q_i, (), 1e-3)
        assert est.terms[:-1] == base.terms
        assert est.term("factoring*log2|N|") == 0.0

    def test_worked_thirty(self, q_i):
        I30 = principal_ideal(q_i, q_i.element([30, 0]))
        est = estimate_pip(q_i, I30, 1e-3)
        assert est.inputs_echo["support_size"] == 4
        assert abs(est.term("factoring*log2|N|") - math.log2(900)) < 1e-12

    def test_scaling_by_rational_integer(self, q_i):
        I30 = principal_ideal(q_i, q_i.element([30, 0]))
        I90 = principal_ideal(q_i, q_i.element([90, 0]))
        t30 = estimate_pip(q_i, I30, 1e-3).term("factoring*log2|N|")
        t90 = estimate_pip(q_i, I90, 1e-3).term("factoring*log2|N|")
        assert abs((t90 - t30) - 2 * math.log2(3)) < 1e-12

    def test_support_norm_consistency(self, q_sqrt2):
        rng = random.Random(72)
        for _ in range(5):
            e = q_sqrt2.element([rng.randint(1, 20), rng.randint(1, 20)])
            if e.is_zero():
                continue
            I = principal_ideal(q_sqrt2, e)
            est = estimate_pip(q_sqrt2, I, 1e-3)
            assert est.inputs_echo["sum_log2_support_norms"] <= est.inputs_echo[
                "log2_norm_dI"
            ] + est.inputs_echo["log2_norm_dO"] + 1e-9


class TestClassGroupStructure:
    def test_identity_relations_trivial(self):
        assert class_group_structure(IntMatrix.identity(3)) == ()

    def test_single_cyclic_relation(self):
        assert class_group_structure(IntMatrix([[3]])) == (3,)

    def test_from_reduced_form_tables(self):
        # relations built from the composition table reproduce the known groups
        for disc, expected in [(-4, ()), (-20, (2,)), (-23, (3,)), (-84, (2, 2))]:
            forms = quadforms.reduced_forms(disc)
            ident = quadforms.reduce_form(quadforms.principal_form(disc))
            gens = [f for f in forms if f != ident]
            if not gens:
                assert expected == ()
                continue
            index = {f: i for i, f in enumerate(gens)}
            rows = []
            for i in range(len(gens)):
                for j in range(i, len(gens)):
                    row = [0] * len(gens)
                    row[i] += 1
                    row[j] += 1
                    prod = quadforms.compose(gens[i], gens[j], disc)
                    if prod != ident:
                        row[index[prod]] -= 1
                    rows.append(row)
            assert class_group_structure(IntMatrix(rows)) == expected

    def test_rank_deficit_rejected(self):
        with pytest.raises(EstimatorError):
            class_group_structure(IntMatrix([[2, 0]]))
