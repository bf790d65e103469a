import numpy as np
import pytest

from sureamp import rng_from_seed


@pytest.fixture
def rng():
    return rng_from_seed(20240601)


def gauss_pdf(t, var):
    return np.exp(-0.5 * t * t / var) / np.sqrt(2 * np.pi * var)
