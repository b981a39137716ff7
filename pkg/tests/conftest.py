import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def sine(n=200, period=16.3, phase=0.9, amplitude=1.0):
    return amplitude * np.sin(2.0 * np.pi * np.arange(n) / period + phase)


def noise(n=200, seed=0):
    return np.random.default_rng(seed).normal(size=n)
