import itertools
from fractions import Fraction
from math import sqrt

import numpy as np
import pytest
from sympy import Rational
from sympy.physics.quantum.cg import CG

import oracles
from exchangeonly.coupling import (Couple, clebsch_gordan, compute_F, coupled_state, overlap,
                                   parse_tree, sector_projector, is_projector)
from exchangeonly.spin_core import PulseSequence, sequence_unitary

# F as computed by tests/oracles.py (projection + symmetrisation); equals 1/sqrt(3)
F_ORACLE = 0.5773502691896257

HALF = Fraction(1, 2)


def test_cg_highest_weight():
    assert clebsch_gordan(HALF, HALF, HALF, HALF, 1, 1) == 1.0


def test_cg_singlet_signs():
    assert clebsch_gordan(HALF, HALF, HALF, -HALF, 0, 0) == pytest.approx(1 / sqrt(2))
    assert clebsch_gordan(HALF, -HALF, HALF, HALF, 0, 0) == pytest.approx(-1 / sqrt(2))


def test_cg_row_normalised():
    j1, j2, J, M = 1, HALF, Fraction(3, 2), HALF
    total = sum(clebsch_gordan(j1, m1, j2, M - m1, J, M) ** 2 for m1 in (-1, 0, 1))
    assert total == pytest.approx(1, abs=1e-15)


def test_cg_forbidden_is_zero():
    assert clebsch_gordan(HALF, HALF, HALF, HALF, 0, 0) == 0
    assert clebsch_gordan(HALF, HALF, HALF, -HALF, 2, 0) == 0
    assert clebsch_gordan(1, 0, 1, 0, 1, 0) == 0


@pytest.mark.parametrize("j1,j2", [(HALF, HALF), (1, HALF), (Fraction(3, 2), 1), (2, Fraction(3, 2))])
def test_cg_against_sympy(j1, j2):
    j1, j2 = Fraction(j1), Fraction(j2)
    for J in np.arange(float(abs(j1 - j2)), float(j1 + j2) + 0.5, 1.0):
        J = Fraction(J)
        for m1 in np.arange(-float(j1), float(j1) + 0.5):
            for m2 in np.arange(-float(j2), float(j2) + 0.5):
                M = Fraction(m1) + Fraction(m2)
                if abs(M) > J:
                    continue
                ref = float(CG(*(Rational(str(Fraction(x))) for x in
                                 (j1, Fraction(m1), j2, Fraction(m2), J, M))).doit())
                assert clebsch_gordan(j1, m1, j2, m2, J, M) == pytest.approx(ref, abs=1e-14)


def test_parse_tree_round_trip():
    tree = parse_tree("(1 (2 3)_1)_1/2")
    assert tree == Couple((1, Couple((2, 3), 1)), HALF)
    assert parse_tree(str(tree)) == tree
    assert parse_tree("  ( 1(2 3)_1 )_1/2 ") == tree
    assert parse_tree("(1 (2 3)_{1})_{1/2}") == tree


@pytest.mark.parametrize("bad", ["(1 2)", "(1 2)_{1", "(1 2)_1}", "(1 2)_3", "(1 1)_1", "(1 2 3)_1/2", "(1 2)_1 3", "(1 x)_1"])
def test_parse_tree_rejects(bad):
    with pytest.raises(ValueError):
        parse_tree(bad)


def test_pair_triplet_top():
    np.testing.assert_allclose(coupled_state("(1 2)_1", 1).vector, [1, 0, 0, 0])


def test_three_spin_quartet_top():
    v = coupled_state("(1 2 3)_3/2", Fraction(3, 2)).vector
    np.testing.assert_allclose(v, np.eye(8)[0])


def test_encoded_zero_state():
    v = coupled_state("(1 (2 3)_0)_1/2", HALF).vector
    expected = np.zeros(8)
    expected[0b001], expected[0b010] = 1 / sqrt(2), -1 / sqrt(2)
    np.testing.assert_allclose(v, expected, atol=1e-15)


def test_sz_out_of_range():
    with pytest.raises(ValueError):
        coupled_state("(1 2)_1", 2)
    with pytest.raises(ValueError):
        coupled_state("(1 2)_1", HALF)


def test_symmetric_group_matches_binary_tree():
    for sz in (Fraction(3, 2), HALF, -HALF):
        a = coupled_state("(1 2 3)_3/2", sz).vector
        b = coupled_state("((1 2)_1 3)_3/2", sz).vector
        np.testing.assert_allclose(a, b, atol=1e-15)


def test_overlap_basics():
    x = coupled_state("((1 2)_1 (3 4)_1)_1", 0)
    assert overlap(x, x) == pytest.approx(1)
    y = coupled_state("((1 2)_1 (3 4)_1)_2", 0)
    assert abs(overlap(x, y)) < 1e-15
    with pytest.warns(UserWarning):
        assert overlap(x, coupled_state("((1 2)_1 (3 4)_1)_1", 1)) == 0


def test_oracle_states_agree_with_tree_construction():
    np.testing.assert_allclose(coupled_state("((1 2)_1 (3 4)_1)_1", 1).vector,
                               oracles.pair_pair_spin1(), atol=1e-13)
    np.testing.assert_allclose(coupled_state("(1 (2 3 4)_3/2)_1", 1).vector,
                               oracles.single_quartet_spin1(), atol=1e-13)


def test_F_against_oracle():
    assert oracles.F() == pytest.approx(F_ORACLE, abs=1e-15)
    assert compute_F() == pytest.approx(F_ORACLE, abs=1e-12)
    assert 0 < abs(compute_F()) <= 1


def test_F_independent_of_sz():
    values = [compute_F(sz) for sz in (-1, 0, 1)]
    assert max(values) - min(values) < 1e-12


def test_overlaps_independent_of_sz():
    left = "((1 2)_1 (3 4)_1)_1"
    right = "(1 (2 3 4)_3/2)_1"
    vals = [overlap(coupled_state(left, s), coupled_state(right, s)) for s in (-1, 0, 1)]
    assert np.ptp(np.real(vals)) < 1e-12 and np.max(np.abs(np.imag(vals))) < 1e-14


def _all_labelled_chain_trees(n):
    """Every label assignment of the left-folded tree (((1 2) 3) ... n)."""
    out = []

    def grow(tree, spin, k):
        if k > n:
            out.append(tree)
            return
        for s in (spin - HALF, spin + HALF):
            if s >= 0:
                grow(Couple((tree, k), s), s, k + 1)

    grow(1, HALF, 2)
    return out


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_coupled_basis_is_orthonormal(n):
    vecs = []
    for tree in _all_labelled_chain_trees(n):
        J = tree.spin
        sz = J
        while sz >= -J:
            vecs.append(coupled_state(tree, sz).vector)
            sz -= 1
    B = np.column_stack(vecs)
    assert B.shape == (2 ** n, 2 ** n)
    assert np.linalg.norm(B.conj().T @ B - np.eye(2 ** n)) < 1e-10


def test_sector_projector_quartet_rank():
    P = sector_projector((1, 2, 3), Fraction(3, 2), 3).matrix
    assert np.trace(P).real == pytest.approx(4)
    Q = sector_projector((1, 2, 3), HALF, 3).matrix
    np.testing.assert_allclose(P + Q, np.eye(8), atol=1e-12)
    assert is_projector(P) and is_projector(Q)


def test_sector_projector_unattainable():
    with pytest.warns(UserWarning):
        P = sector_projector((1, 2), HALF, 3).matrix
    assert not P.any()


@pytest.mark.parametrize("pulses", [
    [(2, 3, Fraction(1, 3)), (3, 4, Fraction(5, 4))],       # inside {2,3,4}
    [(1, 5, Fraction(1, 2)), (5, 6, Fraction(7, 8))],       # outside
])
def test_sector_projector_commutes_with_local_sequences(pulses):
    P = sector_projector((2, 3, 4), Fraction(3, 2), 6).matrix
    U = sequence_unitary(PulseSequence.from_tuples(6, pulses))
    assert np.linalg.norm(U @ P - P @ U) < 1e-12


def test_sector_projector_does_not_commute_across():
    P = sector_projector((2, 3, 4), Fraction(3, 2), 5).matrix
    U = sequence_unitary(PulseSequence.from_tuples(5, [(4, 5, Fraction(1, 2))]))
    assert np.linalg.norm(U @ P - P @ U) > 0.1


def test_product_basis_completeness_three_spins():
    states = [coupled_state(t, s) for t, szs in (
        ("(1 (2 3)_0)_1/2", (HALF, -HALF)),
        ("(1 (2 3)_1)_1/2", (HALF, -HALF)),
        ("(1 (2 3)_1)_3/2", (Fraction(3, 2), HALF, -HALF, Fraction(-3, 2)))) for s in szs]
    B = np.column_stack([s.vector for s in states])
    np.testing.assert_allclose(B @ B.conj().T, np.eye(8), atol=1e-12)
    # and each vector only carries its own total sz
    for s in states:
        for k, amp in enumerate(s.vector):
            if abs(amp) > 1e-14:
                downs = bin(k).count("1")
                assert Fraction(3 - 2 * downs, 2) == s.sz


def test_trees_over_later_spins():
    v = coupled_state("(4 (5 6)_0)_1/2", HALF)
    assert v.spins == (4, 5, 6)
    np.testing.assert_allclose(v.vector, coupled_state("(1 (2 3)_0)_1/2", HALF).vector)


@pytest.mark.parametrize("order", list(itertools.permutations((1, 2, 3))))
def test_leaf_order_in_tree_literal(order):
    # ((i j)_0 k)_1/2 is the singlet of i, j times spin k regardless of listing order
    i, j, k = order
    v = coupled_state(f"(({i} {j})_0 {k})_1/2", HALF).vector
    P = sector_projector((i, j), 0, 3).matrix
    np.testing.assert_allclose(P @ v, v, atol=1e-14)
