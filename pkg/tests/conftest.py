import numpy as np
import pytest

from concavematch.core import make_rng, random_instance


@pytest.fixture
def rng():
    return make_rng(12345)


def random_instances(seed, count, n_range, alphas):
    """Seeded uniform instances with n drawn from ``n_range`` and alpha from ``alphas``."""
    out = []
    for k in range(count):
        r = make_rng(seed, k)
        n = int(r.integers(n_range[0], n_range[1] + 1))
        out.append(random_instance(r, n, float(r.choice(alphas))))
    return out
