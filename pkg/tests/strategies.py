"""Hypothesis strategies: seeds drive numpy generators so cases stay reproducible."""
import numpy as np
from hypothesis import strategies as st

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=6)


@st.composite
def sym_matrices(draw, max_dim=6, kinds=("normal", "integer", "clustered")):
    from synaptic.generators import random_symmetric

    rng = np.random.default_rng(draw(seeds))
    dim = draw(st.integers(min_value=1, max_value=max_dim))
    return random_symmetric(rng, dim, kind=draw(st.sampled_from(kinds)))


@st.composite
def rng_and_dim(draw, max_dim=6):
    return np.random.default_rng(draw(seeds)), draw(st.integers(min_value=1, max_value=max_dim))


rationals = st.fractions(min_value=-6, max_value=6, max_denominator=8)
unit_rationals = st.fractions(min_value=0, max_value=1, max_denominator=8)


@st.composite
def fn_elements(draw, size=None, values=rationals):
    from synaptic.commutative_model import DiscreteSpace, FnElement

    n = size if size is not None else draw(st.integers(min_value=1, max_value=8))
    return FnElement(DiscreteSpace.of_size(n), tuple(draw(st.lists(values, min_size=n, max_size=n))))


@st.composite
def fn_tuples(draw, k, values=rationals):
    n = draw(st.integers(min_value=1, max_value=8))
    return tuple(draw(fn_elements(size=n, values=values)) for _ in range(k))
