from fractions import Fraction

import numpy as np
import pytest

from tplag import make_config

DENOMINATORS = (1, 2, 4, 5, 8, 10)


def _distinct_rationals(rng, count, lo, hi):
    seen = set()
    while len(seen) < count:
        q = int(rng.choice(DENOMINATORS))
        p = int(rng.integers(lo * q, hi * q + 1))
        seen.add(Fraction(p, q))
    return sorted(seen)


def random_ordered_config(rng, max_n=6, max_l=12):
    """Ordered config with small rational nodes: x in [-5, 2], t in (max x, max x + 8]."""
    n = int(rng.integers(0, max_n + 1))
    l = int(rng.integers(n, max_l + 1))
    x = _distinct_rationals(rng, n + 1, -5, 2)
    t = [x[-1] + v for v in _distinct_rationals(rng, l + 1, 0, 8) if v > 0]
    while len(t) < l + 1:
        t = [x[-1] + v for v in _distinct_rationals(rng, l + 1, 0, 8) if v > 0]
    return make_config([str(v) for v in x], [str(v) for v in reversed(t)])


def random_interleaved_config(rng, max_n=6, max_l=12):
    """Config whose nodes share the same interval, so a shift is needed."""
    n = int(rng.integers(1, max_n + 1))
    l = int(rng.integers(n + 1, max_l + 1))
    x = _distinct_rationals(rng, n + 1, -3, 3)
    t = _distinct_rationals(rng, l + 1, -3, 3)
    return make_config([str(v) for v in x], [str(v) for v in reversed(t)])


def corpus(seed, count, **kw):
    rng = np.random.default_rng(seed)
    return [random_ordered_config(rng, **kw) for _ in range(count)]


@pytest.fixture
def small_cfg():
    return make_config(["0", "1"], ["4", "3", "2"])


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.LINES:
        terminalreporter.write_line(line)
