"""Hypothesis strategies built on the seeded generators."""
import hypothesis.strategies as st
import numpy as np
from hypothesis.extra.numpy import arrays

from shkit.harness import gen_compatible, gen_metric


@st.composite
def dims(draw, max_dim=6):
    n = draw(st.integers(1, max_dim))
    r = draw(st.integers(1, n))
    return n, r


@st.composite
def spaces(draw, max_dim=6):
    n, r = draw(dims(max_dim))
    return gen_metric(n, r, draw(st.integers(0, 2 ** 32 - 1)))


@st.composite
def space_and_ops(draw, count=1, max_dim=6):
    space = draw(spaces(max_dim))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    return (space, *[gen_compatible(space, rng, 10.0 ** rng.uniform(-1, 1)) for _ in range(count)])


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def complex_matrices(draw, min_side=1, max_side=6, square=True):
    rows = draw(st.integers(min_side, max_side))
    cols = rows if square else draw(st.integers(min_side, max_side))
    re = draw(arrays(np.float64, (rows, cols), elements=finite))
    im = draw(arrays(np.float64, (rows, cols), elements=finite))
    return re + 1j * im


@st.composite
def hermitian_matrices(draw, max_side=8):
    M = draw(complex_matrices(1, max_side))
    return (M + M.conj().T) / 2
