"""Shared helpers for building small frames and models in tests."""

import pytest

from doxatest.frames import Frame, Model, complete_selection


def frame_of(n, belief, selection=None, complete=False):
    """Frame with states s0..s{n-1}; belief and selection given as bitmasks."""
    f = Frame(
        tuple(f"s{i}" for i in range(n)),
        tuple(belief),
        dict(selection or {}),
    )
    return complete_selection(f) if complete else f


def random_frame(rng, n, pointed=False):
    """Random complete frame on n states respecting the base invariants."""
    full = (1 << n) - 1
    if pointed:
        belief = tuple(1 << rng.randrange(n) for _ in range(n))
    else:
        belief = tuple(rng.randrange(1, full + 1) for _ in range(n))
    selection = {}
    for s in range(n):
        for e in range(1, full + 1):
            t = e & rng.randrange(1, full + 1)
            if not t:
                t = e & -e
            if (1 << s) & e:
                t |= 1 << s
            selection[(s, e)] = t
    return frame_of(n, belief, selection)


def random_model(rng, n, atoms=("p", "q"), pointed=False):
    """Random complete frame with a random valuation over the given atoms."""
    frame = random_frame(rng, n, pointed=pointed)
    valuation = {a: rng.randrange(0, frame.full + 1) for a in atoms}
    return Model(frame, valuation)


def model_of(frame, **valuation):
    return Model(frame, valuation)


@pytest.fixture
def two_state_default():
    # two states believing each other, default-rule selection everywhere
    return frame_of(2, [0b10, 0b01], complete=True)
