import random

import pytest

from padiclie import PadicContext, PMatrix, mat_log
from padiclie.catalog import (
    CATALOG_MANIFEST,
    abelianization_torsion_exp,
    check_levi_example,
    iso_test_3dim,
    make_2dim,
    make_example_dim_p,
    make_insoluble,
    make_levi_example,
    make_p2_groups,
    make_p3_pair,
    make_thm73,
    thm73_fiber_matrix,
    thm73_grid,
)
from padiclie.classifier import classify, descriptors_equal
from padiclie.errors import BadParameter, NotDim3, NotSoluble, ResidualNilpotenceViolated


class TestTwoDim:
    def test_invariant_matches_parameter(self):
        ctx = PadicContext(5, 8)
        for s in (1, 2, 3):
            lat, _ = make_2dim(ctx, s)
            assert lat.two_dim_invariant() == s

    def test_group_relation(self):
        ctx = PadicContext(5, 6)
        for s in (1, 2):
            _, grp = make_2dim(ctx, s)
            x, y = grp.standard_generators()
            assert grp.comm(y, x) == grp.pow(y, 5**s)

    def test_rejects_zero_s(self):
        with pytest.raises(BadParameter):
            make_2dim(PadicContext(5, 6), 0)


class TestThm73:
    def test_parameter_validation(self):
        ctx = PadicContext(5, 8)
        with pytest.raises(BadParameter):
            make_thm73(ctx, "G1", {"s": 0})
        with pytest.raises(BadParameter):
            make_thm73(ctx, "G2", {"s": 1, "r": 0, "d": 1})
        with pytest.raises(BadParameter):
            make_thm73(ctx, "G3", {"s": 0, "r": 1, "d": 1})  # needs p | d when s = 0
        with pytest.raises(BadParameter):
            make_thm73(ctx, "G4", {"s": 0, "r": 0})
        make_thm73(ctx, "G3", {"s": 0, "r": 1, "d": 5})
        make_thm73(ctx, "G3", {"s": 1, "r": 0, "d": 1})

    def test_residual_nilpotence_enforced(self):
        # a hand-built non-residually-nilpotent matrix is rejected by the
        # shared constructor path
        ctx = PadicContext(5, 8)
        from padiclie.catalog import _require_residually_nilpotent

        with pytest.raises(ResidualNilpotenceViolated):
            _require_residually_nilpotent(PMatrix(ctx, [[1, 0], [0, 1]]))

    def test_g0_relations(self):
        ctx = PadicContext(5, 6)
        for s in (0, 1, 2):
            lat, grp = make_thm73(ctx, "G0", {"s": s})
            x, y, z = grp.standard_generators()
            assert grp.comm(x, y) == grp.pow(z, 5**s)
            assert grp.comm(x, z) == grp.identity_element()
            assert grp.comm(y, z) == grp.identity_element()

    def test_g0_series_group_relation(self):
        # the series group of the two-step nilpotent lattice satisfies the
        # same central relation
        from padiclie.bch import bch_commutator

        ctx = PadicContext(5, 6)
        for s in (0, 1):
            lat, _ = make_thm73(ctx, "G0", {"s": s})
            x, y, z = (lat.basis_vector(i) for i in range(3))
            expected = tuple(5**s * c % ctx.modulus for c in z)
            assert bch_commutator(lat, x, y) == expected

    def test_g1_descriptor(self):
        ctx = PadicContext(5, 8)
        for s in (1, 2):
            A = thm73_fiber_matrix(ctx, "G1", {"s": s})
            d = classify(A)
            assert (d.variant, d.s) == ("scalar", s)

    def test_g4_descriptor(self):
        ctx = PadicContext(5, 8)
        for s, r in ((0, 1), (1, 0), (1, 2)):
            d = classify(thm73_fiber_matrix(ctx, "G4", {"s": s, "r": r}))
            assert (d.variant, d.s, d.r, d.residue) == ("zerotrace", s, r, "square")
            d5 = classify(thm73_fiber_matrix(ctx, "G5", {"s": s, "r": r}))
            assert (d5.variant, d5.s, d5.r, d5.residue) == ("zerotrace", s, r, "nonsquare")

    def test_exp_action_variant(self):
        ctx = PadicContext(5, 6)
        lat, grp = make_thm73(ctx, "G4", {"s": 1, "r": 1}, exp_action=True)
        A = thm73_fiber_matrix(ctx, "G4", {"s": 1, "r": 1})
        assert descriptors_equal(classify(mat_log(grp.action)), classify(A), 5)

    def test_grid_members_all_validate(self):
        ctx = PadicContext(5, 8)
        grid = thm73_grid(ctx)
        assert len(grid) > 50
        for name, fam, params in grid:
            make_thm73(ctx, fam, params)

    def test_presentation_relations_hold_in_group_arithmetic(self):
        # with action 1 + A the fiber is abelian, so [y_i, x] equals the
        # product of y_j to the A_ij exactly
        ctx = PadicContext(5, 8)
        for name, fam, params in thm73_grid(ctx):
            lat, grp = make_thm73(ctx, fam, params)
            A = thm73_fiber_matrix(ctx, fam, params)
            x, y1, y2 = grp.standard_generators()
            assert grp.comm(y1, y2) == grp.identity_element()
            for i, yi in enumerate((y1, y2)):
                expected = grp.mul(
                    grp.pow(y1, A.entries[i][0]), grp.pow(y2, A.entries[i][1])
                )
                assert grp.comm(yi, x) == expected, name

    def test_group_serialization_round_trip(self):
        ctx = PadicContext(5, 6)
        _, grp = make_thm73(ctx, "G4", {"s": 0, "r": 1})
        from padiclie.propgroup import SemidirectGroup

        back = SemidirectGroup.from_json(grp.to_json())
        assert back.action.entries == grp.action.entries
        assert back.ctx.p == 5 and back.ctx.precision == 6


class TestP3Pair:
    def test_presentations_and_orders(self):
        for p in (5, 7):
            L1, L2 = make_p3_pair(p)
            x, y = L1.basis_vector(0), L1.basis_vector(1)
            found = any(
                L1.element_order(xs) == p
                and L1.element_order(ys) == p * p
                and L1.comm(xs, ys) == L1.scale(p, ys)
                for xs in (x, L1.neg(x))
                for ys in (y, L1.neg(y))
            )
            assert found
            z = L2.comm(L2.basis_vector(0), L2.basis_vector(1))
            assert all(L2.element_order(u) in (1, p) for u in L2.elements())
            assert all(L2.comm(z, L2.basis_vector(i)) == L2.zero() for i in range(3))
            assert L1.order_multiset() != L2.order_multiset()

    def test_group_axioms_sampled(self):
        L1, _ = make_p3_pair(5)
        rng = random.Random(40)
        els = [tuple(rng.randrange(m) for m in L1.moduli) for _ in range(8)]
        for a in els[:4]:
            for b in els[:4]:
                for c in els[:4]:
                    assert L1.mul(L1.mul(a, b), c) == L1.mul(a, L1.mul(b, c))
        for a in els:
            assert L1.mul(a, L1.neg(a)) == L1.zero()


class TestExampleDimP:
    def test_action_identity(self):
        ctx = PadicContext(5, 4)
        grp, lat = make_example_dim_p(ctx)
        E = grp.action - PMatrix.identity(ctx, 4)
        assert E.pow(4) == 5 * PMatrix.identity(ctx, 4)

    def test_counterexample_status(self):
        ctx = PadicContext(5, 4)
        grp, lat = make_example_dim_p(ctx)
        from padiclie.propgroup import check_gamma_p_in_phi_p

        assert not check_gamma_p_in_phi_p(grp).holds
        assert not lat.saturable_sufficient()


class TestInsoluble:
    def test_fixtures(self):
        ctx = PadicContext(5, 6)
        for which in ("sl2tri", "sl1delta"):
            lat = make_insoluble(ctx, which)  # validates Jacobi on construction
            assert not lat.is_soluble()
            assert lat.saturable_sufficient()

    def test_iso_test_rejects(self):
        ctx = PadicContext(5, 6)
        with pytest.raises(NotSoluble):
            iso_test_3dim(make_insoluble(ctx, "sl2tri"), make_thm73(ctx, "G1", {"s": 1})[0])


class TestLevi:
    def test_all_checks(self):
        ctx = PadicContext(5, 7)
        lat = make_levi_example(ctx, 2)
        rep = check_levi_example(lat, 2)
        assert rep.passed
        assert rep.lifts_checked == 5 ** 8

    def test_parameter_guards(self):
        with pytest.raises(BadParameter):
            make_levi_example(PadicContext(5, 7), 1)
        with pytest.raises(BadParameter):
            make_levi_example(PadicContext(5, 4), 2)


class TestP2Groups:
    def test_torsion(self):
        ctx = PadicContext(2, 8)
        for s in (2, 3, 4):
            assert abelianization_torsion_exp(make_p2_groups(ctx, "+", s)) == s
            assert abelianization_torsion_exp(make_p2_groups(ctx, "-", s)) == 1
        assert make_p2_groups(ctx, "+", None).action == PMatrix.identity(ctx, 1)

    def test_guards(self):
        ctx = PadicContext(2, 8)
        with pytest.raises(BadParameter):
            make_p2_groups(ctx, "+", 1)
        with pytest.raises(BadParameter):
            make_p2_groups(PadicContext(5, 8), "+", 2)


class TestIso:
    def test_reflexive(self):
        ctx = PadicContext(5, 10)
        lat, _ = make_thm73(ctx, "G4", {"s": 0, "r": 1})
        assert iso_test_3dim(lat, lat).isomorphic

    def test_g4_vs_g5(self):
        ctx = PadicContext(5, 10)
        a, _ = make_thm73(ctx, "G4", {"s": 0, "r": 1})
        b, _ = make_thm73(ctx, "G5", {"s": 0, "r": 1})
        assert not iso_test_3dim(a, b).isomorphic

    def test_basis_change_copies(self):
        ctx = PadicContext(5, 12)
        rng = random.Random(41)
        for fam, params in (("G0", {"s": 1}), ("G2", {"s": 1, "r": 1, "d": 2}), ("G3", {"s": 1, "r": 0, "d": 0})):
            lat, _ = make_thm73(ctx, fam, params)
            for _ in range(5):
                while True:
                    P = PMatrix(ctx, [[rng.randrange(ctx.modulus) for _ in range(3)] for _ in range(3)])
                    if P.det() % 5 != 0:
                        break
                assert iso_test_3dim(lat, lat.change_basis(P)).isomorphic

    def test_dim_guard(self):
        ctx = PadicContext(5, 6)
        with pytest.raises(NotDim3):
            iso_test_3dim(make_2dim(ctx, 1)[0], make_2dim(ctx, 1)[0])


def test_manifest_names_unique():
    names = [e.name for e in CATALOG_MANIFEST]
    assert len(names) == len(set(names))
    kinds = {e.kind for e in CATALOG_MANIFEST}
    assert kinds <= {"lattice", "group", "pair"}
