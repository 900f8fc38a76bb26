import numpy as np
import pytest

from exchangeonly.rewrite import apply_script, parse_script
from exchangeonly.spin_core import ExchangePulse, PulseSequence
from exchangeonly.synthesis import derive

# Fuse one sqrt-SWAP of each R copy into an inverse sqrt-SWAP (last copy first,
# so earlier positions do not shift), giving counts (5, 3, 9).
FUSE_SCRIPT = """\
commute_left at 15
fuse at 14
commute_left at 8
fuse at 7
commute_left at 1
fuse at 0
"""


@pytest.fixture(scope="session")
def derivation():
    return derive()


@pytest.fixture(scope="session")
def full_sequence(derivation):
    return derivation.full


@pytest.fixture(scope="session")
def odd_parity_variant(full_sequence):
    """Derived sequence rewritten to (5, 3, 9) counts plus one SWAP inside qubit A.

    A stand-in with the published counts and parity of the numerically found
    sequence; it is not that sequence.
    """
    seq, _ = apply_script(full_sequence, parse_script(FUSE_SCRIPT))
    return seq + PulseSequence(6, (ExchangePulse(2, 3, 1),))


@pytest.fixture
def rng():
    return np.random.default_rng(20141016)
