import time
from fractions import Fraction

import numpy as np
import pytest

from homalg import Field
from homalg.generate import random_hom_algebra

GF5, GF7, Q = Field.gf(5), Field.gf(7), Field.rationals()

BATTERY_SIZE = 200

# acceptance results collected for the terminal summary
ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def central_battery_params():
    """(field, dim, seed) for the central-multiplication battery: dims 1-5, GF(5) and Q."""
    return [((GF5, Q)[s % 2], 1 + s % 5, s) for s in range(BATTERY_SIZE)]


def twist_battery_params():
    """(field, dim, recipe, seed) for the bijective twist battery: dims 1-4, GF(5), GF(7), Q."""
    return [((GF5, GF7, Q)[s % 3], 1 + s % 4, ("yau", "generalized-yau")[s % 2], 1000 + s) for s in range(BATTERY_SIZE)]


@pytest.fixture(scope="session")
def central_battery():
    t0 = time.perf_counter()
    algs = [random_hom_algebra(F, n, "central-multiplication", s) for F, n, s in central_battery_params()]
    return algs, time.perf_counter() - t0


@pytest.fixture(scope="session")
def twist_battery():
    t0 = time.perf_counter()
    algs = [
        (recipe, random_hom_algebra(F, n, recipe, s, bijective=True))
        for F, n, recipe, s in twist_battery_params()
    ]
    return algs, time.perf_counter() - t0


# -- independent oracles: plain Python loops over Fractions / ints -------------


def to_py(F, arr):
    """Nested Python lists of exact scalars (Fraction over Q, int mod p)."""
    arr = np.asarray(arr)
    if F.is_rational:
        return np.vectorize(Fraction, otypes=[object])(arr).tolist() if arr.size else arr.tolist()
    return (arr.astype(np.int64) % F.p).tolist()


class Oracle:
    """Product and twisting map evaluated by explicit summation, no numpy linear algebra."""

    def __init__(self, F, sc, alpha=None):
        self.F = F
        self.n = len(sc)
        self.sc = to_py(F, sc)
        self.A = None if alpha is None else to_py(F, alpha)

    def red(self, v):
        return v if self.F.is_rational else [x % self.F.p for x in v]

    def mul(self, x, y):
        n, sc = self.n, self.sc
        out = [0] * n
        for i in range(n):
            if x[i] == 0:
                continue
            for j in range(n):
                if y[j] == 0:
                    continue
                c = x[i] * y[j]
                row = sc[i][j]
                for k in range(n):
                    out[k] += c * row[k]
        return self.red(out)

    def alpha(self, v):
        n, A = self.n, self.A
        return self.red([sum(A[t][i] * v[i] for i in range(n)) for t in range(n)])

    def e(self, i):
        return [1 if k == i else 0 for k in range(self.n)]

    def basis_triples(self):
        r = range(self.n)
        return ((self.e(i), self.e(j), self.e(k)) for i in r for j in r for k in r)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, name, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {num:>2} {'PASS' if ok else 'FAIL'}  {name}  {detail}")
