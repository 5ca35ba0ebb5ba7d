"""Seeded generators for randomized tests and the acceptance suite."""
from __future__ import annotations

import numpy as np

from .spaces import FiniteMetricSpace, validate_metric


def random_euclidean_space(n: int, seed: int, dim: int = 3,
                           scale: float = 2.0) -> FiniteMetricSpace:
    """Random points in a cube with the Euclidean metric; always valid."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, float(scale), size=(n, dim))
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    dist = 0.5 * (dist + dist.T)
    np.fill_diagonal(dist, 0.0)
    return validate_metric(dist, tol=1e-9)


def random_rectangle_points(count: int, lam: float, seed: int) -> np.ndarray:
    """count points in the parameter rectangle for a length-lam segment."""
    rng = np.random.default_rng(seed)
    t = rng.uniform(-lam / 2, lam / 2, size=count)
    phi = rng.uniform(-np.pi, np.pi, size=count)
    return np.column_stack([t, phi])
