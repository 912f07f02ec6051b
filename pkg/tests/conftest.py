import numpy as np
import pytest

from ovframes.frames import WeakOvf
from ovframes.linalg import Tolerance

TOL = Tolerance()


def scalar_frame(a_values, psi_values, tol=TOL) -> WeakOvf:
    """Frame with d = d0 = 1 built from two scalar sequences."""
    a = np.array([[[complex(v)]] for v in a_values])
    psi = np.array([[[complex(v)]] for v in psi_values])
    return WeakOvf(a, psi, tol)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
