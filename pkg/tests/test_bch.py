import random
from fractions import Fraction

import pytest

from padiclie import PadicContext, PMatrix, mat_exp
from padiclie.bch import (
    bch_commutator,
    bch_mul,
    bch_neg,
    bch_pow,
    free_nilpotent_lattice,
    hausdorff_oracle,
    hausdorff_table,
    lie_basis_words,
    lie_from_matrix_group,
    poly_add,
    poly_scale,
)
from padiclie.catalog import make_example_dim_p
from padiclie.errors import ClassTooLarge
from padiclie.lattice import Lattice


def heisenberg(ctx):
    d = 3
    constants = [[[0] * d for _ in range(d)] for _ in range(d)]
    constants[0][1] = [0, 0, 1]
    constants[1][0] = [0, 0, -1 % ctx.modulus]
    return Lattice(ctx, constants, ("x", "y", "z"))


class TestTable:
    def test_weight_one(self):
        t = hausdorff_table(1)
        assert {w: c for c, w in t.terms} == {"X": 1, "Y": 1}

    def test_weight_three_display(self):
        t = hausdorff_table(3)
        coeffs = {w: c for c, w in t.terms}
        assert coeffs == {
            "X": 1,
            "Y": 1,
            "XY": Fraction(1, 2),
            "XYY": Fraction(1, 12),
            "XYX": Fraction(-1, 12),
        }

    def test_weight_two_invariant(self):
        t = hausdorff_table(2)
        assert t.coefficient("XY") == Fraction(1, 2)
        assert t.coefficient("X") == 1 and t.coefficient("Y") == 1

    def test_denominator_primes_bounded_by_weight(self):
        t = hausdorff_table(6)
        for c, w in t.terms:
            den = c.denominator
            f = 2
            while f * f <= den:
                while den % f == 0:
                    assert f <= len(w)
                    den //= f
                f += 1
            if den > 1:
                assert den <= len(w)

    def test_oracle_equivalence_weight_six(self):
        table = hausdorff_table(6)
        assert poly_add(table.as_assoc(), poly_scale(-1, hausdorff_oracle(6))) == {}

    def test_basis_dimensions_are_witt_numbers(self):
        assert [len(lie_basis_words(m)) for m in range(1, 7)] == [2, 1, 2, 3, 6, 9]

    def test_export(self):
        data = hausdorff_table(3).to_json()
        assert data["weight"] == 3
        assert {"num": 1, "den": 12, "word": "XYY"} in data["terms"]


class TestFreeNilpotentEvaluation:
    def test_identity_laws_weight_five(self):
        ctx = PadicContext(7, 4)
        L = free_nilpotent_lattice(ctx, 5)
        x = L.basis_vector(0)
        y = L.basis_vector(1)
        zero = (0,) * L.dim
        assert bch_mul(L, x, zero) == x
        assert bch_mul(L, zero, y) == y
        assert bch_mul(L, x, bch_neg(L, x)) == zero

    def test_symmetry(self):
        # the series satisfies F(X, Y) = -F(-Y, -X)
        ctx = PadicContext(7, 4)
        L = free_nilpotent_lattice(ctx, 4)
        rng = random.Random(20)
        for _ in range(20):
            u = tuple(rng.randrange(ctx.modulus) for _ in range(L.dim))
            v = tuple(rng.randrange(ctx.modulus) for _ in range(L.dim))
            lhs = bch_mul(L, u, v)
            rhs = bch_neg(L, bch_mul(L, bch_neg(L, v), bch_neg(L, u)))
            assert lhs == rhs

    def test_associativity_in_free_class_three(self):
        ctx = PadicContext(5, 4)
        L = free_nilpotent_lattice(ctx, 3)
        rng = random.Random(21)
        for _ in range(60):
            u, v, w = (
                tuple(rng.randrange(ctx.modulus) for _ in range(L.dim)) for _ in range(3)
            )
            assert bch_mul(L, u, bch_mul(L, v, w)) == bch_mul(L, bch_mul(L, u, v), w)


class TestLatticeGroupLaw:
    def test_abelian_is_addition(self):
        ctx = PadicContext(5, 4)
        L = Lattice(ctx, [[[0] * 2 for _ in range(2)] for _ in range(2)])
        assert bch_mul(L, (3, 4), (10, 20)) == (13, 24)

    def test_heisenberg_product_example(self):
        ctx = PadicContext(5, 2)
        L = heisenberg(ctx)
        assert bch_mul(L, L.basis_vector(0), L.basis_vector(1)) == (1, 1, 13)

    def test_inverse_law(self):
        ctx = PadicContext(5, 6)
        L = heisenberg(ctx)
        rng = random.Random(22)
        for _ in range(50):
            u = tuple(rng.randrange(ctx.modulus) for _ in range(3))
            assert bch_mul(L, u, bch_neg(L, u)) == (0, 0, 0)

    def test_pow(self):
        ctx = PadicContext(5, 4)
        L = heisenberg(ctx)
        rng = random.Random(23)
        assert bch_pow(L, (1, 2, 3), 0) == (0, 0, 0)
        for _ in range(10):
            u = tuple(rng.randrange(ctx.modulus) for _ in range(3))
            acc = (0, 0, 0)
            for n in range(20):
                assert bch_pow(L, u, n) == acc
                acc = bch_mul(L, acc, u)
            # taking p-th powers is multiplication by p
            assert bch_pow(L, u, ctx.p) == tuple(ctx.p * c % ctx.modulus for c in u)

    def test_commutator(self):
        ctx = PadicContext(5, 4)
        L = heisenberg(ctx)
        x, y = L.basis_vector(0), L.basis_vector(1)
        assert bch_commutator(L, x, y) == (0, 0, 1)
        assert bch_commutator(L, x, x) == (0, 0, 0)
        A = Lattice(ctx, [[[0] * 2 for _ in range(2)] for _ in range(2)])
        assert bch_commutator(A, (1, 2), (3, 4)) == (0, 0)

    def test_class_too_large(self):
        # the dimension-p lattice: the series has p-divisible denominators
        ctx = PadicContext(5, 4)
        _, L = make_example_dim_p(ctx)
        with pytest.raises(ClassTooLarge):
            bch_mul(L, L.basis_vector(0), L.basis_vector(1))


class TestMatrixGroupRecovery:
    def _pair(self, ctx, rng):
        base = PMatrix(ctx, [[0, 0, 0], [0, 0, 0], [rng.randrange(ctx.modulus), rng.randrange(ctx.modulus), 0]])
        g = mat_exp(base)
        h = mat_exp(
            PMatrix(
                ctx,
                [
                    [0, 0, 0],
                    [0, 0, 0],
                    [rng.randrange(ctx.modulus), rng.randrange(ctx.modulus), 0],
                ],
            )
        )
        return g, h

    def test_inverse_pair_sums_to_identity(self):
        ctx = PadicContext(5, 4)
        g = mat_exp(PMatrix(ctx, [[0, 0, 0], [0, 0, 0], [7, 3, 0]]))
        s, b = lie_from_matrix_group(g, g.inverse())
        assert s == PMatrix.identity(ctx, 3)
        assert b == PMatrix.identity(ctx, 3)

    def test_commuting_pair(self):
        ctx = PadicContext(5, 4)
        rng = random.Random(24)
        g, h = self._pair(ctx, rng)
        s, b = lie_from_matrix_group(g, h)
        assert s == g @ h
        assert b == PMatrix.identity(ctx, 3)

    def test_noncommuting_cross_check(self):
        # unipotent pair mixing the action block: both routes must agree
        ctx = PadicContext(5, 4)
        A = PMatrix(ctx, [[0, 0, 0], [5, 0, 0], [0, 1, 0]])
        B = PMatrix(ctx, [[0, 5, 0], [0, 0, 0], [1, 0, 0]])
        g, h = mat_exp(A), mat_exp(B)
        s, b = lie_from_matrix_group(g, h)
        assert s == mat_exp(A + B)
        assert b == mat_exp(A @ B - B @ A)
