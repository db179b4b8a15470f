import math
import random

import mpmath
import pytest
from mpmath import mp

from sunitkit import (
    IntMatrix,
    PrincipalLogError,
    RankError,
    RealMatrix,
    ascending_divisors,
    det,
    frobenius_norm,
    hnf,
    lll_reduce,
    principal_log,
    snf,
)

from oracles import (
    cofactor_det,
    minor_gcd_divisors,
    naive_column_hnf,
    random_unimodular,
    residue_count,
)


def rand_matrix(rng, rows, cols, lo=-9, hi=9):
    return IntMatrix([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)])


def rand_nonsingular(rng, n, lo=-6, hi=6):
    while True:
        m = rand_matrix(rng, n, n, lo, hi)
        if det(m) != 0:
            return m


class TestDet:
    def test_identity(self):
        assert det(IntMatrix.identity(4)) == 1

    def test_diag(self):
        assert det(IntMatrix.diagonal([2, 3])) == 6

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            det(IntMatrix([[1, 2, 3], [4, 5, 6]]))

    def test_against_cofactor_oracle(self):
        rng = random.Random(42)
        for _ in range(120):
            n = rng.choice([2, 3, 4])
            m = rand_matrix(rng, n, n)
            assert det(m) == cofactor_det(m.to_lists())


class TestHNF:
    def test_identity_fixed(self):
        assert hnf(IntMatrix.identity(3)).hnf == IntMatrix.identity(3)

    def test_diag_already_hnf(self):
        d = IntMatrix.diagonal([2, 3])
        assert hnf(d).hnf == d

    def test_small_example_matches_naive_oracle(self):
        m = IntMatrix([[1, 2], [3, 4]])
        res = hnf(m)
        assert res.hnf.to_lists() == naive_column_hnf(m.to_lists())
        assert m * res.transform == res.hnf
        assert abs(det(res.transform)) == 1

    def test_rank_deficient_rejected(self):
        with pytest.raises(RankError):
            hnf(IntMatrix([[1, 2], [2, 4]]))

    def test_invariants_on_random_inputs(self):
        rng = random.Random(7)
        for _ in range(100):
            n = rng.choice([2, 3])
            m = rand_nonsingular(rng, n)
            res = hnf(m)
            h = res.hnf
            assert m * res.transform == h
            assert abs(det(res.transform)) == 1
            for i in range(n):
                assert h[i, i] > 0
                for j in range(i + 1, n):
                    assert h[i, j] == 0
                for j in range(i):
                    assert 0 <= h[i, j] < h[i, i]
            assert h.to_lists() == naive_column_hnf(m.to_lists())

    def test_canonical_under_unimodular_scrambling(self):
        rng = random.Random(8)
        for _ in range(60):
            n = rng.choice([2, 3])
            m = rand_nonsingular(rng, n)
            u = random_unimodular(n, rng)
            assert hnf(m * u).hnf == hnf(m).hnf

    def test_idempotent(self):
        rng = random.Random(9)
        for _ in range(40):
            h = hnf(rand_nonsingular(rng, 3)).hnf
            assert hnf(h).hnf == h

    def test_index_theorem_diag_product_counts_residues(self):
        rng = random.Random(10)
        for _ in range(40):
            n = rng.choice([2, 3])
            m = rand_nonsingular(rng, n)
            prod = math.prod(hnf(m).hnf.diagonal_entries())
            assert prod == residue_count(m.to_lists())


class TestSNF:
    def test_identity(self):
        assert snf(IntMatrix.identity(2)).divisors == (1, 1)

    def test_descending_convention(self):
        assert snf(IntMatrix.diagonal([2, 3])).divisors == (6, 1)
        assert snf(IntMatrix.diagonal([2, 6])).divisors == (6, 2)

    def test_ascending_helper(self):
        assert ascending_divisors(snf(IntMatrix.diagonal([2, 6]))) == (2, 6)

    def test_zero_matrix_rejected(self):
        with pytest.raises(ValueError):
            snf(IntMatrix([[0, 0], [0, 0]]))

    def test_transforms_and_divisibility(self):
        rng = random.Random(11)
        for _ in range(120):
            nr, nc = rng.choice([2, 3]), rng.choice([2, 3])
            m = rand_matrix(rng, nr, nc)
            if m.is_zero():
                continue
            res = snf(m)
            diag = IntMatrix(
                [[res.divisors[i] if i == j else 0 for j in range(nc)] for i in range(nr)]
            )
            assert res.left * m * res.right == diag
            assert abs(det(res.left)) == 1
            assert abs(det(res.right)) == 1
            for a, b in zip(res.divisors, res.divisors[1:]):
                if b != 0:
                    assert a % b == 0

    def test_matches_minor_gcd_oracle(self):
        rng = random.Random(12)
        for _ in range(80):
            nr, nc = rng.choice([2, 3]), rng.choice([2, 3])
            m = rand_matrix(rng, nr, nc, -7, 7)
            if m.is_zero():
                continue
            expected = minor_gcd_divisors(m.to_lists())
            assert list(ascending_divisors(snf(m))) == expected

    def test_invariant_under_scrambling(self):
        rng = random.Random(13)
        for _ in range(60):
            n = rng.choice([2, 3])
            m = rand_matrix(rng, n, n)
            if m.is_zero():
                continue
            u = random_unimodular(n, rng)
            v = random_unimodular(n, rng)
            assert snf(u * m * v).divisors == snf(m).divisors

    def test_full_rank_product_is_abs_det(self):
        rng = random.Random(14)
        for _ in range(40):
            m = rand_nonsingular(rng, 3)
            assert math.prod(snf(m).divisors) == abs(det(m))


class TestRealMatrix:
    def test_minimum_precision_enforced(self):
        with pytest.raises(ValueError):
            RealMatrix.from_rows([[1.0]], 32)

    def test_precision_propagates_min(self):
        a = RealMatrix.from_rows([[1, 0], [0, 1]], 128)
        b = RealMatrix.from_rows([[2, 0], [0, 2]], 96)
        assert (a * b).precision_bits == 96

    def test_frobenius_examples(self):
        assert float(frobenius_norm(RealMatrix.from_rows([[0, 0], [0, 0]], 64))) == 0.0
        n = 5
        eye = RealMatrix.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)], 64
        )
        assert abs(float(frobenius_norm(eye)) - math.sqrt(n)) < 1e-15
        assert abs(float(frobenius_norm(RealMatrix.from_rows([[3, 4], [0, 0]], 64))) - 5) < 1e-15


class TestPrincipalLog:
    def test_identity_gives_zero(self):
        z = principal_log(RealMatrix.from_rows([[1, 0], [0, 1]], 128))
        assert float(frobenius_norm(z)) < 1e-35

    def test_scalar_case(self):
        a = principal_log(RealMatrix.from_rows([[2.5, 0], [0, 2.5]], 128))
        assert abs(float(a.entries[0][0]) - math.log(2.5)) < 1e-35
        assert abs(float(a.entries[0][1])) < 1e-35

    def test_negative_axis_rejected(self):
        with pytest.raises(PrincipalLogError):
            principal_log(RealMatrix.from_rows([[-2, 0], [0, -2]], 128))

    def test_singular_rejected(self):
        with pytest.raises(PrincipalLogError):
            principal_log(RealMatrix.from_rows([[1, 1], [1, 1]], 128))

    def test_exponentiate_back_oracle(self):
        rng = random.Random(21)
        with mp.workprec(192):
            for _ in range(12):
                n = rng.choice([2, 3])
                A = mpmath.matrix(
                    [[rng.uniform(-0.45, 0.45) for _ in range(n)] for _ in range(n)]
                )
                M = mpmath.expm(A)
                rm = RealMatrix.from_rows(
                    [[M[i, j] for j in range(n)] for i in range(n)], 128
                )
                L = principal_log(rm)
                back = mpmath.expm(L.to_mp())
                resid = max(
                    abs(back[i, j] - M[i, j]) for i in range(n) for j in range(n)
                )
                assert resid < mp.mpf(2) ** -60

    def test_norm_recovered_for_small_logs(self):
        # |log(exp(A))|_F == |A|_F when |A|_F < 1
        rng = random.Random(22)
        with mp.workprec(192):
            for _ in range(10):
                A = mpmath.matrix([[rng.uniform(-0.3, 0.3) for _ in range(2)] for _ in range(2)])
                normA = mp.sqrt(mp.fsum(abs(A[i, j]) ** 2 for i in range(2) for j in range(2)))
                M = mpmath.expm(A)
                rm = RealMatrix.from_rows([[M[i, j] for j in range(2)] for i in range(2)], 128)
                got = frobenius_norm(principal_log(rm))
                assert abs(got - normA) < mp.mpf(2) ** -50


class TestLLL:
    def test_preserves_lattice_and_shortens(self):
        basis = RealMatrix.from_rows([[201, 37], [1648, 297]], 128)
        red = lll_reduce(basis)
        with mp.workprec(160):
            d0 = abs(mp.det(basis.to_mp()))
            d1 = abs(mp.det(red.to_mp()))
            assert abs(d0 - d1) < mp.mpf(2) ** -80
            T = red.to_mp() * (basis.to_mp() ** -1)
            Ti = [[int(mp.nint(T[i, j])) for j in range(2)] for i in range(2)]
            assert abs(det(IntMatrix(Ti))) == 1
        first = math.sqrt(sum(float(x) ** 2 for x in red.entries[0]))
        assert first <= math.sqrt(sum(float(x) ** 2 for x in basis.entries[0]))
