from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exchangeonly.rewrite import (CommuteSwapLeft, CommuteSwapRight, FuseSwapIntoPulse,
                                  InsertPair, RemovePair, RewriteError, SplitPulseIntoSwap,
                                  applicable_steps, apply_script, apply_step,
                                  check_rewrite_invariants, compare_sequences, format_step,
                                  merge_pulses, parse_script, random_script, sequence_stats)
from exchangeonly.spin_core import ExchangePulse, PulseSequence, random_sequence, sequence_unitary

HALF, THREE_HALVES = Fraction(1, 2), Fraction(3, 2)


def seq(n, *pulses):
    return PulseSequence.from_tuples(n, pulses)


def test_stats_counts():
    s = sequence_stats(seq(4, (1, 2, 1), (2, 3, HALF), (3, 4, THREE_HALVES), (1, 2, 0),
                           (2, 3, Fraction(1, 3))))
    assert (s.n_swap, s.n_sqrt, s.n_invsqrt, s.n_identity, s.n_other) == (1, 1, 1, 1, 1)
    assert s.n_nontrivial == 3 and s.parity == 0 and s.total == 5


def test_insert_remove_round_trip():
    base = seq(4, (1, 2, HALF), (3, 4, 1))
    ins = apply_step(base, InsertPair(2, 3, 1))
    assert ins == seq(4, (1, 2, HALF), (2, 3, 1), (2, 3, 1), (3, 4, 1))
    assert apply_step(ins, RemovePair(1)) == base


def test_remove_requires_matching_swaps():
    with pytest.raises(RewriteError):
        apply_step(seq(4, (1, 2, 1), (2, 3, 1)), RemovePair(0))
    with pytest.raises(RewriteError):
        apply_step(seq(4, (1, 2, 1), (1, 2, HALF)), RemovePair(0))


def test_insert_out_of_register():
    with pytest.raises(RewriteError):
        apply_step(seq(3), InsertPair(3, 4, 0))
    with pytest.raises(RewriteError):
        apply_step(seq(3), InsertPair(1, 2, 1))


def test_commute_right_example():
    before = seq(4, (2, 3, 1), (3, 4, HALF))
    after = apply_step(before, CommuteSwapRight(0))
    assert after == seq(4, (2, 4, HALF), (2, 3, 1))
    np.testing.assert_array_equal(sequence_unitary(after), sequence_unitary(before))


def test_commute_left_is_inverse_of_right():
    s = seq(5, (2, 3, 1), (1, 3, Fraction(1, 3)))
    there = apply_step(s, CommuteSwapRight(0))
    assert apply_step(there, CommuteSwapLeft(0)) == s


def test_commute_disjoint_and_same_pair():
    assert apply_step(seq(4, (1, 2, 1), (3, 4, HALF)), CommuteSwapRight(0)) == \
        seq(4, (3, 4, HALF), (1, 2, 1))
    assert apply_step(seq(4, (1, 2, 1), (1, 2, HALF)), CommuteSwapRight(0)) == \
        seq(4, (1, 2, HALF), (1, 2, 1))


def test_commute_needs_swap():
    with pytest.raises(RewriteError):
        apply_step(seq(3, (1, 2, HALF), (2, 3, 1)), CommuteSwapRight(0))
    with pytest.raises(RewriteError):
        apply_step(seq(3, (1, 2, 1), (2, 3, HALF)), CommuteSwapLeft(0))


@pytest.mark.parametrize("t,fused", [(HALF, THREE_HALVES), (THREE_HALVES, HALF)])
@pytest.mark.parametrize("swap_first", [True, False])
def test_fuse_and_split(t, fused, swap_first):
    pair = [(2, 3, 1), (2, 3, t)] if swap_first else [(2, 3, t), (2, 3, 1)]
    before = seq(3, *pair)
    after = apply_step(before, FuseSwapIntoPulse(0))
    assert after == seq(3, (2, 3, fused))
    np.testing.assert_array_equal(sequence_unitary(after), sequence_unitary(before))
    assert apply_step(after, SplitPulseIntoSwap(0, swap_first)) == before


def test_fuse_rejects_other_durations():
    for pulses in ([(1, 2, 1), (1, 2, Fraction(1, 3))], [(1, 2, 1), (2, 3, HALF)],
                   [(1, 2, HALF), (1, 2, HALF)], [(1, 2, 1), (1, 2, 1)]):
        with pytest.raises(RewriteError):
            apply_step(seq(3, *pulses), FuseSwapIntoPulse(0))
    with pytest.raises(RewriteError):
        apply_step(seq(3, (1, 2, Fraction(1, 4))), SplitPulseIntoSwap(0))


def test_bad_position():
    with pytest.raises(RewriteError):
        apply_step(seq(3, (1, 2, 1)), CommuteSwapRight(0))
    with pytest.raises(TypeError):
        apply_step(seq(3), "fuse")


def test_fuse_on_derived_sequence(full_sequence):
    s = sequence_stats(full_sequence)
    out, ph = apply_script(full_sequence, parse_script("commute_left at 1\nfuse at 0"))
    t = sequence_stats(out)
    assert (t.n_swap, t.n_sqrt, t.n_invsqrt) == (s.n_swap - 1, s.n_sqrt - 1, s.n_invsqrt + 1)
    assert ph == 1
    assert check_rewrite_invariants(full_sequence, out).ok


def test_random_scripts_preserve_invariants(full_sequence, rng):
    U0 = sequence_unitary(full_sequence)
    for _ in range(40):
        steps, out = random_script(full_sequence, rng, int(rng.integers(1, 30)))
        replay, ph = apply_script(full_sequence, steps)
        assert replay == out
        rep = check_rewrite_invariants(full_sequence, out)
        assert rep.ok, rep.failures
        assert np.linalg.norm(sequence_unitary(out) - ph * U0) < 1e-10


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(2, 5), length=st.integers(0, 10),
       steps=st.integers(1, 25))
def test_random_scripts_on_random_sequences(seed, n, length, steps):
    rng = np.random.default_rng(seed)
    durations = [Fraction(0), HALF, Fraction(1), THREE_HALVES, Fraction(1, 3)]
    start = random_sequence(rng, n, length, durations=durations)
    _, out = random_script(start, rng, steps)
    rep = check_rewrite_invariants(start, out)
    assert rep.ok, rep.failures
    assert abs(rep.phase - 1) < 1e-10


def test_manual_edit_is_caught(full_sequence):
    # replacing a sqrt-SWAP by its inverse is not a rewrite: the operator changes
    k = next(i for i, p in enumerate(full_sequence) if p.t == HALF)
    pulses = list(full_sequence.pulses)
    pulses[k] = ExchangePulse(pulses[k].i, pulses[k].j, THREE_HALVES)
    rep = check_rewrite_invariants(full_sequence, PulseSequence(6, tuple(pulses)))
    assert not rep.ok
    assert "unitary_up_to_phase" in rep.failures and "parity" in rep.failures


def test_merge_is_not_a_rewrite():
    s = seq(3, (1, 2, HALF), (1, 2, Fraction(1, 4)))
    merged = merge_pulses(s, 0)
    assert merged == seq(3, (1, 2, Fraction(3, 4)))
    np.testing.assert_allclose(sequence_unitary(merged), sequence_unitary(s), atol=1e-12)
    assert not check_rewrite_invariants(s, merged).ok


@pytest.mark.parametrize("pulses", [
    [(1, 2, 1), (1, 2, HALF)], [(1, 2, HALF), (1, 2, HALF)], [(1, 2, HALF), (1, 2, THREE_HALVES)],
    [(1, 2, HALF), (2, 3, HALF)]])
def test_merge_refusals(pulses):
    with pytest.raises(RewriteError):
        merge_pulses(seq(3, *pulses), 0)


def test_applicable_steps_all_apply(full_sequence):
    steps = applicable_steps(full_sequence)
    assert steps
    for step in steps:
        assert check_rewrite_invariants(full_sequence, apply_step(full_sequence, step)).ok


def test_compare_after_rewrites(full_sequence, rng):
    _, out = random_script(full_sequence, rng, 50)
    rep = compare_sequences(full_sequence, out)
    assert rep.phase_equal and not rep.parity_differs


def test_compare_odd_parity_variant(full_sequence, odd_parity_variant):
    st_odd = sequence_stats(odd_parity_variant)
    assert (st_odd.n_swap, st_odd.n_sqrt, st_odd.n_invsqrt) == (6, 3, 9)
    rep = compare_sequences(full_sequence, odd_parity_variant)
    assert not rep.phase_equal
    assert rep.locally_equivalent
    assert rep.parity_differs


def test_compare_not_locally_equivalent(full_sequence):
    other = PulseSequence.from_tuples(6, [(2, 3, HALF)])
    rep = compare_sequences(full_sequence, other)
    assert not rep.phase_equal and rep.locally_equivalent is False


def test_compare_size_mismatch():
    with pytest.raises(ValueError):
        compare_sequences(PulseSequence(3), PulseSequence(4))


def test_script_round_trip():
    steps = [InsertPair(1, 2, 0), RemovePair(3), CommuteSwapRight(1), CommuteSwapLeft(2),
             FuseSwapIntoPulse(4), SplitPulseIntoSwap(5), SplitPulseIntoSwap(6, False)]
    text = "\n".join(format_step(s) for s in steps)
    assert parse_script(text) == steps


def test_script_comments_and_errors():
    assert parse_script("# header\n\n  fuse   at 3  # trailing\n") == [FuseSwapIntoPulse(3)]
    with pytest.raises(RewriteError, match="line 2"):
        parse_script("fuse at 1\nswirl at 2\n")
