import pytest

from kahlercone.algebra import fixture


@pytest.fixture(scope="session")
def algebras():
    names = ["p1", "p2", "p3", "p1xp1", "p1xp1xp1", "p1xp2", "t1", "t2"]
    return {n: fixture(n) for n in names}


def central_difference(f, t, direction, step, order=1):
    """Float central difference of a scalar-valued f at t along direction."""
    def at(s):
        return f([x + s * d for x, d in zip(t, direction)])

    if order == 1:
        return (at(step) - at(-step)) / (2 * step)
    return (at(step) - 2 * at(0.0) + at(-step)) / (step * step)


def rel_err(a, b):
    a, b = complex(a), complex(b)
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / scale
