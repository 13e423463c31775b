import numpy as np
import pytest

from pottslab.lattice import RngStream


def test_same_address_gives_same_draws(rng_stream):
    first = rng_stream(7, 3).generator().random(5)
    second = RngStream(7, 3).generator().random(5)

    assert np.array_equal(first, second)


def test_streams_and_seeds_are_independent():
    base = RngStream(7).generator().random(5)

    assert not np.array_equal(base, RngStream(7, 1).generator().random(5))
    assert not np.array_equal(base, RngStream(8).generator().random(5))


def test_draw_index_moves_into_the_stream():
    stream = RngStream(1)

    ahead = stream.generator(4).random(3)

    assert np.array_equal(ahead, stream.generator(4).random(3))
    assert not np.array_equal(ahead, stream.generator().random(3))


def test_children_are_distinct_and_deterministic():
    parent = RngStream(11, 2)

    children = parent.children(4)

    assert children == parent.children(4)
    assert len({child.stream for child in children}) == 4
    assert all(child.seed == 11 for child in children)
    assert children[0].child(0) != children[1].child(0)


@pytest.mark.parametrize(("seed", "stream"), [(-1, 0), (0, 1 << 64)])
def test_address_must_fit_64_bits(seed, stream):
    with pytest.raises(ValueError, match="64 bits"):
        RngStream(seed, stream)
