import numpy as np


def random_invertible(n, rng, min_abs_det=1e-2):
    """Gaussian matrix redrawn until comfortably invertible."""
    while True:
        m = rng.standard_normal((n, n))
        if abs(np.linalg.det(m)) > min_abs_det:
            return m
