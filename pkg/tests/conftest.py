import numpy as np
import pytest

from qspeed import DensityMatrix, HermitianOperator, Projector


def random_hermitian(rng, d, scale=1.0):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return HermitianOperator(scale * (a + a.conj().T) / 2)


def random_density(rng, d, rank=None):
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_projector(rng, d, k=None):
    k = int(rng.integers(1, d)) if k is None else k
    q, _ = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    v = q[:, :k]
    return Projector(v @ v.conj().T)


@pytest.fixture
def rng():
    return np.random.default_rng(20121019)
