import numpy as np
import pytest


def rel_gap(a, b, scale_floor=1.0):
    """Elementwise |a - b| / max(|a|, |b|, scale_floor)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), scale_floor)
    return np.abs(a - b) / denom


@pytest.fixture
def grid_axes():
    def make(lo, hi, npts):
        return np.linspace(lo, hi, npts)

    return make
