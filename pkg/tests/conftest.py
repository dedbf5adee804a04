"""Shared strategies: norms drawn from the same generators the search uses,
seeded through hypothesis so failures shrink to a reproducible seed."""
import math

import numpy as np
from hypothesis import strategies as st

from spherearc import (LpNorm, random_ellipse_norm, random_lp_norm,
                       random_polygon_norm)

TWO_PI = 2.0 * math.pi


def _seeded(factory):
    return st.integers(min_value=0, max_value=100_000).map(
        lambda s: factory(np.random.default_rng(s)))


lp_specs = st.one_of(
    st.sampled_from([LpNorm(1.0), LpNorm(2.0), LpNorm(math.inf)]),
    st.floats(min_value=1.0, max_value=16.0).map(LpNorm),
)
polygon_specs = _seeded(random_polygon_norm)
ellipse_specs = _seeded(random_ellipse_norm)
random_lp_specs = _seeded(random_lp_norm)
any_specs = st.one_of(lp_specs, polygon_specs, ellipse_specs)

angles = st.floats(min_value=0.0, max_value=TWO_PI, exclude_max=True)
