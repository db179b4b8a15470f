import math
import random
from fractions import Fraction

import pytest
import sympy

from sunitkit import (
    FactoringEffortError,
    IdealError,
    IndexDivisorError,
    class_group_bruteforce,
    elem_norm,
    factor_ideal,
    factor_integer,
    ideal_from_spec,
    ideal_inv,
    ideal_mul,
    ideal_norm,
    ideal_pow,
    is_s_unit,
    prime_ideal_lattice,
    primes_above,
    principal_ideal,
    reassemble,
    ring_of_integers,
    valuation,
)
from sunitkit import quadforms

from oracles import residue_count


def random_element(field, rng, lo=-9, hi=9):
    while True:
        e = field.element([rng.randint(lo, hi) for _ in range(field.n)])
        if not e.is_zero():
            return e


def random_fractional_ideal(field, rng, avoid_index_divisors=True):
    """Quotient of two random principal ideals; resamples when the support
    would hit an index-divisor prime (Q(sqrt5) ships with index 2)."""
    while True:
        a = random_element(field, rng)
        b = random_element(field, rng)
        if avoid_index_divisors and field.index > 1:
            na = abs(elem_norm(field, a).numerator)
            nb = abs(elem_norm(field, b).numerator)
            if math.gcd(na * nb, field.index) > 1:
                continue
        return ideal_mul(principal_ideal(field, a), ideal_inv(principal_ideal(field, b)))


class TestPrincipalIdeals:
    def test_one_gives_full_ring(self, q_i):
        assert principal_ideal(q_i, q_i.one()) == ring_of_integers(q_i)

    def test_norm_example(self, q_i):
        I = principal_ideal(q_i, q_i.element([2, 1]))
        assert ideal_norm(I) == 5

    def test_rational_scalar(self, q_i):
        I = principal_ideal(q_i, q_i.element([Fraction(1, 2), 0]))
        assert I.denominator == 2
        assert I.basis.to_lists() == [[1, 0], [0, 1]]

    def test_zero_rejected(self, q_i):
        with pytest.raises(IdealError):
            principal_ideal(q_i, q_i.zero())

    def test_norm_is_abs_elem_norm(self, quadratic_fields):
        rng = random.Random(51)
        for field in quadratic_fields.values():
            for _ in range(30):
                e = random_element(field, rng)
                assert ideal_norm(principal_ideal(field, e)) == abs(elem_norm(field, e))

    def test_residue_count_oracle(self, q_i):
        # |O/(2+i)| counted by brute force equals the HNF norm
        I = principal_ideal(q_i, q_i.element([2, 1]))
        assert residue_count(I.basis.to_lists()) == 5
        I3 = principal_ideal(q_i, q_i.element([3, 0]))
        assert residue_count(I3.basis.to_lists()) == 9 == int(ideal_norm(I3))


class TestIdealArithmetic:
    def test_mul_example(self, q_i):
        I = principal_ideal(q_i, q_i.element([2, 1]))
        J = principal_ideal(q_i, q_i.element([2, -1]))
        assert ideal_mul(I, J) == principal_ideal(q_i, q_i.element([5, 0]))

    def test_identity_element(self, q_sqrt2):
        rng = random.Random(52)
        O = ring_of_integers(q_sqrt2)
        for _ in range(10):
            I = random_fractional_ideal(q_sqrt2, rng)
            assert ideal_mul(I, O) == I

    def test_inverse_roundtrip(self, quadratic_fields):
        rng = random.Random(53)
        for field in quadratic_fields.values():
            O = ring_of_integers(field)
            for _ in range(15):
                I = principal_ideal(field, random_element(field, rng))
                assert ideal_mul(I, ideal_inv(I)) == O

    def test_norm_multiplicative(self, quadratic_fields):
        rng = random.Random(54)
        for field in quadratic_fields.values():
            for _ in range(20):
                I = random_fractional_ideal(field, rng, avoid_index_divisors=False)
                J = random_fractional_ideal(field, rng, avoid_index_divisors=False)
                assert ideal_norm(ideal_mul(I, J)) == ideal_norm(I) * ideal_norm(J)

    def test_module_closure(self, cubic_2):
        rng = random.Random(55)
        from sunitkit.ideals import _check_module_closure

        for _ in range(10):
            I = principal_ideal(cubic_2, random_element(cubic_2, rng))
            _check_module_closure(I)  # raises on failure

    def test_ideal_spec_roundtrip(self, q_i):
        I = ideal_from_spec(q_i, {"element": ["2", "1"]})
        assert ideal_norm(I) == 5
        J = ideal_from_spec(
            q_i, {"hnf": I.basis.to_lists(), "denominator": I.denominator}
        )
        assert I == J

    def test_ideal_spec_rejects_unclosed_lattice(self, q_i):
        with pytest.raises(IdealError):
            ideal_from_spec(q_i, {"hnf": [[1, 0], [0, 3]], "denominator": 1})


class TestPrimesAbove:
    def test_split_prime(self, q_i):
        ps = primes_above(q_i, 5)
        assert len(ps) == 2
        assert all(P.norm == 5 and P.e == 1 and P.f == 1 for P in ps)

    def test_ramified_prime(self, q_i):
        ps = primes_above(q_i, 2)
        assert len(ps) == 1 and ps[0].e == 2 and ps[0].norm == 2

    def test_inert_prime(self, q_i):
        ps = primes_above(q_i, 3)
        assert len(ps) == 1 and ps[0].f == 2 and ps[0].norm == 9

    def test_degree_sum(self, quadratic_fields, cubic_2):
        for field in list(quadratic_fields.values()) + [cubic_2]:
            for p in (2, 3, 5, 7, 11, 13):
                if field.index % p == 0:
                    continue
                ps = primes_above(field, p)
                assert sum(P.e * P.f for P in ps) == field.n

    def test_index_divisor_rejected(self, q_sqrt5):
        with pytest.raises(IndexDivisorError):
            primes_above(q_sqrt5, 2)

    def test_non_prime_rejected(self, q_i):
        with pytest.raises(IdealError):
            primes_above(q_i, 6)

    def test_lattice_norm_is_prime_norm(self, cubic_2):
        for p in (2, 3, 5, 7, 11):
            for P in primes_above(cubic_2, p):
                lat = prime_ideal_lattice(cubic_2, P)
                assert ideal_norm(lat) == P.norm
                assert residue_count(lat.basis.to_lists()) == P.norm


class TestValuations:
    def test_ring_is_zero_everywhere(self, q_i):
        O = ring_of_integers(q_i)
        for p in (2, 3, 5):
            for P in primes_above(q_i, p):
                assert valuation(O, P) == 0

    def test_five_splits(self, q_i):
        I5 = principal_ideal(q_i, q_i.element([5, 0]))
        for P in primes_above(q_i, 5):
            assert valuation(I5, P) == 1

    def test_power_valuations(self, q_i):
        ps = primes_above(q_i, 5)
        P, Q = ps
        for k in range(-2, 3):
            Pk = ideal_pow(prime_ideal_lattice(q_i, P), k)
            assert valuation(Pk, P) == k
            assert valuation(Pk, Q) == 0

    def test_ramified_power(self, q_i):
        P2 = primes_above(q_i, 2)[0]
        I2 = principal_ideal(q_i, q_i.element([2, 0]))
        assert valuation(I2, P2) == 2


class TestFactorInteger:
    def test_one(self):
        assert factor_integer(1) == ()

    def test_small(self):
        assert factor_integer(360) == (2, 2, 2, 3, 3, 5)

    def test_semiprimes_multiply_back(self):
        rng = random.Random(56)
        for _ in range(6):
            p = int(sympy.nextprime(rng.getrandbits(24)))
            q = int(sympy.nextprime(rng.getrandbits(24)))
            fs = factor_integer(p * q)
            assert fs == tuple(sorted((p, q)))
            assert math.prod(fs) == p * q

    def test_effort_bound_fails_loudly(self):
        n = int(sympy.nextprime(2**41)) * int(sympy.nextprime(2**42))
        with pytest.raises(FactoringEffortError):
            factor_integer(n, effort=8)


class TestFactorIdeal:
    def test_full_ring_empty(self, q_i):
        assert factor_ideal(q_i, ring_of_integers(q_i)).factors == ()

    def test_worked_thirty(self, q_i):
        I30 = principal_ideal(q_i, q_i.element([30, 0]))
        fact = factor_ideal(q_i, I30)
        assert sorted(e for _, e in fact.factors) == [1, 1, 1, 2]
        assert sorted(P.norm for P, _ in fact.factors) == [2, 5, 5, 9]
        assert reassemble(fact) == I30

    def test_mixed_signs(self, q_i):
        I = principal_ideal(q_i, q_i.element([2, 1]))
        J = principal_ideal(q_i, q_i.element([2, -1]))
        F = ideal_mul(I, ideal_inv(J))
        fact = factor_ideal(q_i, F)
        assert sorted(e for _, e in fact.factors) == [-1, 1]
        assert reassemble(fact) == F

    def test_roundtrip_random(self, quadratic_fields):
        rng = random.Random(57)
        for field in quadratic_fields.values():
            for _ in range(15):
                I = random_fractional_ideal(field, rng)
                fact = factor_ideal(field, I)
                assert reassemble(fact) == I

    def test_index_divisor_support_rejected(self, q_sqrt5):
        I2 = principal_ideal(q_sqrt5, q_sqrt5.element([2, 0]))
        with pytest.raises(IndexDivisorError):
            factor_ideal(q_sqrt5, I2)


class TestSUnits:
    def test_one_is_s_unit(self, q_i):
        ps = primes_above(q_i, 5)
        ok, v = is_s_unit(q_i, q_i.one(), ps)
        assert ok and v == (0, 0)

    def test_generator_membership(self, q_i):
        x = q_i.element([2, 1])
        I = principal_ideal(q_i, x)
        ps = primes_above(q_i, 5)
        P = ps[0] if valuation(I, ps[0]) == 1 else ps[1]
        ok, v = is_s_unit(q_i, x, (P,))
        assert ok and v == (1,)

    def test_inert_not_in_s(self, q_i):
        ps = primes_above(q_i, 5)
        ok, v = is_s_unit(q_i, q_i.element([3, 0]), (ps[0],))
        assert not ok and v is None

    def test_fundamental_unit_is_empty_s_unit(self, q_sqrt2):
        from sunitkit import fundamental_unit_real_quadratic

        u = fundamental_unit_real_quadratic(2)
        ok, v = is_s_unit(q_sqrt2, u, ())
        assert ok and v == ()


class TestClassGroup:
    def test_known_small_groups(self, q_i, q_sqrt_m5):
        assert class_group_bruteforce(q_i) == ()
        assert class_group_bruteforce(q_sqrt_m5) == (2,)

    def test_disc_minus_23(self):
        from sunitkit import parse_field

        # x^2 - x + 6 has discriminant -23
        f = parse_field({"poly": [6, -1]})
        assert f.field_disc == -23
        assert class_group_bruteforce(f) == (3,)

    def test_real_field_rejected(self, q_sqrt2):
        with pytest.raises(IdealError):
            class_group_bruteforce(q_sqrt2)

    def test_composition_table_is_a_group(self):
        for disc in (-4, -20, -23, -56, -84):
            forms = quadforms.reduced_forms(disc)
            ident = quadforms.reduce_form(quadforms.principal_form(disc))
            for f in forms:
                assert quadforms.compose(f, ident, disc) == f
                inv = quadforms.reduce_form((f[0], -f[1], f[2]))
                assert quadforms.compose(f, inv, disc) == ident
            for f in forms:
                for g in forms:
                    assert quadforms.compose(f, g, disc) in forms

    def test_divisors_multiply_to_class_number(self):
        for disc, h in [(-4, 1), (-20, 2), (-23, 3), (-47, 5), (-71, 7), (-84, 4)]:
            forms = quadforms.reduced_forms(disc)
            assert len(forms) == h
            divs = quadforms.class_group_divisors(disc)
            assert math.prod(divs) == h or (h == 1 and divs == ())
