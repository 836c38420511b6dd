"""Pure-numpy fallback for the hot quadrature kernels.

The compiled twin lives in ``_kernels.pyx``; both expose the same functions
and are selected at import time by ``collarcusp._backend``.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def scaled_k_integrand(u: np.ndarray, eps: float, y: float) -> np.ndarray:
    """Even part of the scaled integrand exp(-y (cosh u - 1)) cosh(eps u)."""
    u = np.asarray(u, dtype=float)
    return np.exp(-y * (np.cosh(u) - 1.0)) * np.cosh(eps * u)


def scaled_k_panel(
    eps: float,
    y: float,
    u_max: float,
    nodes: np.ndarray,
    weights: np.ndarray,
) -> float:
    """Gauss-Legendre panel of the scaled integrand over [0, u_max].

    Returns e^{y} K_eps(y) up to the truncation error controlled by u_max.
    ``nodes``/``weights`` are a rule for [0, 1].
    """
    u = u_max * nodes
    vals = np.exp(-y * (np.cosh(u) - 1.0)) * np.cosh(eps * u)
    return float(u_max * np.dot(weights, vals))


def scaled_k_panel_batch(
    eps: float,
    ys: np.ndarray,
    u_maxes: np.ndarray,
    nodes: np.ndarray,
    weights: np.ndarray,
) -> np.ndarray:
    """Vectorized ``scaled_k_panel`` over matching arrays of y and u_max."""
    ys = np.asarray(ys, dtype=float)
    u_maxes = np.asarray(u_maxes, dtype=float)
    u = u_maxes[:, None] * nodes[None, :]
    vals = np.exp(-ys[:, None] * (np.cosh(u) - 1.0)) * np.cosh(eps * u)
    return u_maxes * (vals @ weights)
