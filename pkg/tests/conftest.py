import numpy as np
import pytest

import privperturb as pp


@pytest.fixture(scope="session")
def trio():
    return pp.nonconvex_trio()


@pytest.fixture(scope="session")
def trio_problem(trio):
    return trio.problem


@pytest.fixture(scope="session")
def trio_slopes(trio):
    return trio.reference_slopes


@pytest.fixture(scope="session")
def box1d():
    return pp.Box([-10.0], [10.0])


def grid_eval(f, box, points):
    """Dense grid evaluation oracle for 1-d functions."""
    xs = np.linspace(box.lo[0], box.hi[0], points)
    return xs, f(xs[:, None])
