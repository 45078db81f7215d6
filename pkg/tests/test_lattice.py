import random

import pytest

from padiclie import Lattice, PadicContext, PMatrix, Span, new_lattice
from padiclie.catalog import make_2dim, make_example_dim_p, make_insoluble
from padiclie.errors import AntisymmetryViolated, JacobiViolated, NotASublattice, PrecisionExhausted


def heisenberg(ctx):
    d = 3
    constants = [[[0] * d for _ in range(d)] for _ in range(d)]
    constants[0][1] = [0, 0, 1]
    constants[1][0] = [0, 0, -1 % ctx.modulus]
    return Lattice(ctx, constants, ("x", "y", "z"))


def abelian(ctx, d):
    return Lattice(ctx, [[[0] * d for _ in range(d)] for _ in range(d)])


def random_invertible(ctx, n, rng):
    while True:
        P = PMatrix(ctx, [[rng.randrange(ctx.modulus) for _ in range(n)] for _ in range(n)])
        if P.det() % ctx.p != 0:
            return P


class TestValidation:
    def test_abelian_and_heisenberg_valid(self):
        ctx = PadicContext(5, 4)
        abelian(ctx, 3)
        heisenberg(ctx)

    def test_jacobi_violation(self):
        # [x,y] = z, [x,z] = x, [y,z] = 0 breaks Jacobi on (x, y, z)
        ctx = PadicContext(5, 4)
        d = 3
        constants = [[[0] * d for _ in range(d)] for _ in range(d)]
        constants[0][1] = [0, 0, 1]
        constants[1][0] = [0, 0, -1]
        constants[0][2] = [1, 0, 0]
        constants[2][0] = [-1, 0, 0]
        with pytest.raises(JacobiViolated):
            new_lattice(ctx, constants)

    def test_antisymmetry_violation(self):
        ctx = PadicContext(5, 4)
        d = 2
        constants = [[[0] * d for _ in range(d)] for _ in range(d)]
        constants[0][1] = [0, 1]
        constants[1][0] = [0, 1]
        with pytest.raises(AntisymmetryViolated):
            new_lattice(ctx, constants)


class TestBracket:
    def test_alternating(self):
        ctx = PadicContext(5, 4)
        L = heisenberg(ctx)
        rng = random.Random(0)
        for _ in range(50):
            u = tuple(rng.randrange(ctx.modulus) for _ in range(3))
            assert not any(L.bracket(u, u))

    def test_heisenberg_bracket(self):
        ctx = PadicContext(5, 4)
        L = heisenberg(ctx)
        assert L.bracket(L.basis_vector(0), L.basis_vector(1)) == (0, 0, 1)

    def test_dim_p_wraparound_bracket(self):
        ctx = PadicContext(5, 4)
        _, L = make_example_dim_p(ctx)
        y_last = L.basis_vector(L.dim - 1)
        x = L.basis_vector(0)
        expected = tuple(5 if i == 1 else 0 for i in range(L.dim))
        assert L.bracket(y_last, x) == expected

    def test_bracket_span_examples(self):
        ctx = PadicContext(5, 4)
        L = heisenberg(ctx)
        full = L.full_span()
        assert L.bracket_span(full, L.zero_span()).is_zero()
        derived = L.bracket_span(full, full)
        assert derived == Span(ctx, 3, [(0, 0, 1)])
        twod, _ = make_2dim(ctx, 2)
        derived2 = twod.bracket_span(twod.full_span(), twod.full_span())
        assert derived2 == Span(ctx, 2, [(0, 25)])


class TestSeries:
    def test_lower_central(self):
        ctx = PadicContext(5, 4)
        assert abelian(ctx, 2).lower_central()[-1].is_zero()
        gammas = heisenberg(ctx).lower_central()
        assert gammas[1] == Span(ctx, 3, [(0, 0, 1)])
        assert gammas[2].is_zero()

    def test_lower_central_dim_p(self):
        ctx = PadicContext(5, 4)
        _, L = make_example_dim_p(ctx)
        gammas = L.lower_central()
        expected = Span(ctx, 5, [(0, 5, 0, 0, 0), (0, 0, 5, 0, 0), (0, 0, 0, 5, 0), (0, 0, 0, 0, 5)])
        assert gammas[4] == expected

    def test_lower_p_series(self):
        ctx = PadicContext(5, 4)
        A = abelian(ctx, 2)
        terms = A.lower_p_series().terms
        for i, t in enumerate(terms):
            assert t == A.full_span().scale(5**i)
        twod, _ = make_2dim(ctx, 1)
        assert twod.lower_p_series()[1] == twod.full_span().scale(5)
        H = heisenberg(ctx)
        assert H.lower_p_series()[1] == H.full_span().scale(5).sum(Span(ctx, 3, [(0, 0, 1)]))

    def test_derived_series_and_solubility(self):
        ctx = PadicContext(5, 6)
        assert abelian(ctx, 2).derived_series()[-1].is_zero()
        H = heisenberg(ctx)
        ds = H.derived_series()
        assert ds[1] == Span(ctx, 3, [(0, 0, 1)]) and ds[2].is_zero()
        assert H.is_soluble()
        assert not make_insoluble(ctx, "sl2tri").is_soluble()

    def test_nilpotency_class(self):
        ctx = PadicContext(5, 4)
        assert abelian(ctx, 3).nilpotency_class() == 1
        assert heisenberg(ctx).nilpotency_class() == 2


class TestPotency:
    def test_abelian_passes(self):
        ctx = PadicContext(5, 4)
        A = abelian(ctx, 2)
        assert A.verify_potent_filtration(A.lower_p_series()).passed

    def test_heisenberg_passes(self):
        ctx = PadicContext(5, 4)
        H = heisenberg(ctx)
        assert H.verify_potent_filtration(H.lower_p_series()).passed

    def test_dim_p_fails_at_step_one(self):
        ctx = PadicContext(5, 4)
        _, L = make_example_dim_p(ctx)
        report = L.verify_potent_filtration(L.lower_p_series())
        assert not report.passed
        assert report.first_failure() == 1

    def test_construction_invariant(self):
        # terms of the lower p-series satisfy the first potency inclusion
        ctx = PadicContext(5, 4)
        for L in (heisenberg(ctx), make_2dim(ctx, 1)[0]):
            terms = L.lower_p_series().terms
            for a, b in zip(terms, terms[1:]):
                assert b.contains(L.bracket_span(a, L.full_span()))


class TestSaturability:
    def test_abelian_true(self):
        ctx = PadicContext(5, 4)
        assert abelian(ctx, 3).saturable_sufficient()

    def test_insoluble_dim3_true(self):
        ctx = PadicContext(5, 6)
        for which in ("sl2tri", "sl1delta"):
            assert make_insoluble(ctx, which).saturable_sufficient()

    def test_dim_p_false(self):
        ctx = PadicContext(5, 4)
        _, L = make_example_dim_p(ctx)
        assert not L.saturable_sufficient()

    def test_sufficient_implies_potent(self):
        ctx = PadicContext(5, 6)
        pool = [abelian(ctx, 2), heisenberg(ctx), make_2dim(ctx, 1)[0], make_2dim(ctx, 2)[0]]
        for L in pool:
            if L.saturable_sufficient():
                assert L.verify_potent_filtration(L.lower_p_series()).passed


class TestCentralizer:
    def test_examples(self):
        ctx = PadicContext(5, 6)
        H = heisenberg(ctx)
        assert H.centralizer(H.zero_span()) == H.full_span()
        assert H.centralizer(Span(ctx, 3, [(0, 0, 1)])) == H.full_span()
        twod, _ = make_2dim(ctx, 2)
        derived = twod.bracket_span(twod.full_span(), twod.full_span())
        assert twod.centralizer(derived) == Span(ctx, 2, [(0, 1)])


class TestTwoDimInvariant:
    def test_values(self):
        ctx = PadicContext(5, 8)
        for s in (1, 2, 3):
            assert make_2dim(ctx, s)[0].two_dim_invariant() == s
        assert abelian(ctx, 2).two_dim_invariant() == "abelian"

    def test_zero_s_case(self):
        # [y,x] = y directly (not a catalog member: s = 0 is not residually nilpotent)
        ctx = PadicContext(5, 8)
        constants = [[[0, 0], [0, -1]], [[0, 1], [0, 0]]]
        assert Lattice(ctx, constants).two_dim_invariant() == 0

    def test_basis_change_invariance(self):
        ctx = PadicContext(5, 8)
        rng = random.Random(13)
        L = make_2dim(ctx, 2)[0]
        for _ in range(25):
            P = random_invertible(ctx, 2, rng)
            assert L.change_basis(P).two_dim_invariant() == 2

    def test_precision_guard(self):
        ctx = PadicContext(5, 4)
        constants = [[[0, 0], [0, -(5**3)]], [[0, 5**3], [0, 0]]]
        with pytest.raises(PrecisionExhausted):
            Lattice(ctx, constants).two_dim_invariant()


class TestIsolator:
    def test_examples(self):
        ctx = PadicContext(5, 4)
        H = heisenberg(ctx)
        assert H.isolator(H.full_span().scale(5)) == H.full_span()
        assert H.isolator(Span(ctx, 3, [(5, 0, 0), (0, 1, 0)])) == H.full_span()

    def test_strict_rejects_non_sublattice(self):
        ctx = PadicContext(5, 4)
        H = heisenberg(ctx)
        with pytest.raises(NotASublattice):
            H.isolator(Span(ctx, 3, [(5, 0, 0), (0, 1, 0)]), strict=True)

    def test_laws_on_random_sublattices(self):
        ctx = PadicContext(5, 4)
        rng = random.Random(14)
        H = heisenberg(ctx)
        for _ in range(60):
            gens = [tuple(rng.randrange(ctx.modulus) for _ in range(3)) for _ in range(rng.randrange(1, 3))]
            S = H.sublattice_closure(Span(ctx, 3, gens))
            iso = H.isolator(S)
            assert iso.contains(S)
            assert H.isolator(iso) == iso
            assert iso.index_exp(S) >= 0
            assert len(iso.pivots) == len(S.pivots)


class TestRadical:
    def test_soluble_is_everything(self):
        ctx = PadicContext(5, 6)
        for L in (abelian(ctx, 3), heisenberg(ctx), make_2dim(ctx, 1)[0]):
            assert L.soluble_radical() == L.full_span()

    def test_insoluble_is_zero(self):
        ctx = PadicContext(5, 6)
        assert make_insoluble(ctx, "sl2tri").soluble_radical().is_zero()

    def test_direct_sum_block(self):
        ctx = PadicContext(5, 6)
        mix = make_insoluble(ctx, "sl2tri").direct_sum(make_2dim(ctx, 1)[0])
        assert mix.soluble_radical() == Span(ctx, 5, [(0, 0, 0, 1, 0), (0, 0, 0, 0, 1)])


class TestBasisChange:
    def test_transport(self):
        ctx = PadicContext(5, 4)
        rng = random.Random(15)
        L = heisenberg(ctx)
        for _ in range(20):
            P = random_invertible(ctx, 3, rng)
            L2 = L.change_basis(P)
            Lattice(ctx, L2.constants, L2.labels)  # re-validates Jacobi
            u = tuple(rng.randrange(ctx.modulus) for _ in range(3))
            v = tuple(rng.randrange(ctx.modulus) for _ in range(3))
            lhs = L.bracket(P.apply_row(u), P.apply_row(v))
            rhs = P.apply_row(L2.bracket(u, v))
            assert lhs == rhs


def test_serialization_round_trip():
    ctx = PadicContext(5, 4)
    H = heisenberg(ctx)
    data = H.to_json()
    back = Lattice.from_json(data)
    assert back.constants == H.constants
    assert back.labels == H.labels
