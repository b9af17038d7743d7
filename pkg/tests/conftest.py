from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from curveinterp.dataset import load_dataset

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

POLY88 = "432*x^4+16*y^2-y^4-24*x^2*y^2+2*x^2*y^4-24*x^4*y^2-x^4*y^4+16*x^6*y^2"


def rationals(max_num=50, max_den=12):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def points(n_min, n_max, **kw):
    return st.lists(st.tuples(rationals(**kw), rationals(**kw)), min_size=n_min, max_size=n_max)


@pytest.fixture(scope="session")
def fixture():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_dataset(f"fixtures:{name}")
        return cache[name]
    return get
