from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from semirad import ensembles as en
from semirad import semihilbert as sh

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def contexts(draw, max_dim: int = 4, min_rank: int = 1):
    dim = draw(st.integers(min_value=max(1, min_rank), max_value=max_dim))
    rank = draw(st.integers(min_value=min_rank, max_value=dim))
    seed = draw(seeds)
    return sh.make_context(en.random_psd(dim, rank, seed)), seed


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
