"""
Quadrature rules shared by the equilibrium, Gaudin and kernel services
"""
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import special

from ..errors import DomainError


@lru_cache(maxsize=32)
def _legendre_reference(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = special.roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, lo: float = -1.0, hi: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Legendre nodes (ascending) and weights on [lo, hi]."""
    if n < 1:
        raise DomainError(f"Gauss-Legendre order must be positive, got {n}")
    x, w = _legendre_reference(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def chebyshev_nodes(n: int) -> np.ndarray:
    """First-kind Chebyshev points in (-1, 1), ascending."""
    if n < 1:
        raise DomainError(f"Chebyshev node count must be positive, got {n}")
    k = np.arange(n, 0, -1)
    return np.cos((2 * k - 1) * np.pi / (2 * n))


def gauss_chebyshev(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for the integral of g(t)/sqrt(1 - t^2) over (-1, 1)."""
    x, w = special.roots_chebyt(n)
    return x, w


def trapezoid_theta(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Trapezoid nodes on [0, pi] with half weights at both ends."""
    if n < 2:
        raise DomainError("trapezoid rule needs at least 2 points")
    theta = np.linspace(0.0, np.pi, n + 1)
    w = np.full(n + 1, np.pi / n)
    w[0] *= 0.5
    w[-1] *= 0.5
    return theta, w


def tensor_gauss(n: int, dims: int, lo: float, hi: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Tensor-product Gauss-Legendre rule on the cube [lo, hi]^dims.

    Returns points with shape (n**dims, dims) and the matching weights.
    """
    x, w = gauss_legendre(n, lo, hi)
    if dims == 0:
        return np.zeros((1, 0)), np.ones(1)
    grids = np.meshgrid(*([x] * dims), indexing='ij')
    weights = np.meshgrid(*([w] * dims), indexing='ij')
    points = np.stack([g.ravel() for g in grids], axis=1)
    return points, np.prod(np.stack([g.ravel() for g in weights], axis=1), axis=1)
