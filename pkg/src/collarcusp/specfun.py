"""McDonald function via its integral representation, envelope bounds, Whittaker modes.

The McDonald function of order ``eps`` is evaluated as

    K_eps(y) = (1/2) * integral_{-inf}^{inf} exp(-y cosh u - eps u) du
             = e^{-y} * integral_{0}^{U} exp(-y (cosh u - 1)) cosh(eps u) du

with the truncation point ``U`` chosen so the dropped tail is below 1e-18
relative to the integrand scale.  Orders outside [0, 1/2] are supported only
through the symmetry K_{-eps} = K_eps; larger orders are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import _backend

TWO_PI = 2.0 * math.pi

#: gamma0 = sum_{n>=1} 1/(2n)! = cosh(1) - 1; growth rate of the integrand tail.
GAMMA0 = math.cosh(1.0) - 1.0

#: Lower validity threshold 2/gamma0 of the two-sided envelope bound.
TWO_OVER_GAMMA0 = 2.0 / GAMMA0

_DELTA0_PREFACTOR = 4.0 * math.cosh(1.0) / GAMMA0

#: log(1e18): target suppression of the truncated integrand tail.
_TAIL_LOG = 41.5

_GL_NODES_01, _GL_WEIGHTS_01 = np.polynomial.legendre.leggauss(160)
_GL_NODES_01 = np.ascontiguousarray(0.5 * (_GL_NODES_01 + 1.0))
_GL_WEIGHTS_01 = np.ascontiguousarray(0.5 * _GL_WEIGHTS_01)


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested accuracy."""

    def __init__(self, message: str, value: float, error_estimate: float):
        super().__init__(f"{message} (value={value!r}, achieved error={error_estimate!r})")
        self.value = value
        self.error_estimate = error_estimate


def gamma0_partial(n_terms: int) -> float:
    """Partial sum of sum_{n>=1} 1/(2n)!; converges to cosh(1) - 1."""
    total = 0.0
    for n in range(1, n_terms + 1):
        total += 1.0 / math.factorial(2 * n)
    return total


def delta0(y: float) -> float:
    """Envelope (4 cosh 1 / gamma0) e^{-gamma0 y} of the large-|u| contribution."""
    return _DELTA0_PREFACTOR * math.exp(-GAMMA0 * y)


@dataclass(frozen=True)
class BoundConstants:
    """Constants entering the two-sided envelope bound."""

    gamma0: float = GAMMA0
    delta0_prefactor: float = _DELTA0_PREFACTOR

    def delta0(self, y: float) -> float:
        return self.delta0_prefactor * math.exp(-self.gamma0 * y)


CUSPIDAL = "cuspidal-small"
RESIDUAL = "residual"


@dataclass(frozen=True)
class SpectralParam:
    """Spectral parameter s with eigenvalue s(1-s).

    Cuspidal-small regime: s in [1/2, 1] (eigenvalue in [0, 1/4]).
    Residual regime: s in (0, 1/2) (eigenvalue in (0, 1/4)).
    """

    s: float

    def __post_init__(self) -> None:
        if not 0.0 < self.s <= 1.0:
            raise ValueError(f"spectral parameter s must lie in (0, 1], got {self.s}")

    @classmethod
    def cuspidal(cls, eigenvalue: float) -> "SpectralParam":
        """Parameter on the cuspidal branch s = 1/2 + sqrt(1/4 - eigenvalue)."""
        if not 0.0 <= eigenvalue <= 0.25:
            raise ValueError(f"cuspidal-small eigenvalue must lie in [0, 1/4], got {eigenvalue}")
        return cls(0.5 + math.sqrt(0.25 - eigenvalue))

    @classmethod
    def residual(cls, eigenvalue: float) -> "SpectralParam":
        """Parameter on the residual branch s = 1/2 - sqrt(1/4 - eigenvalue)."""
        if not 0.0 < eigenvalue < 0.25:
            raise ValueError(f"residual eigenvalue must lie in (0, 1/4), got {eigenvalue}")
        return cls(0.5 - math.sqrt(0.25 - eigenvalue))

    @property
    def eigenvalue(self) -> float:
        return self.s * (1.0 - self.s)

    @property
    def regime(self) -> str:
        return CUSPIDAL if self.s >= 0.5 else RESIDUAL

    @property
    def order(self) -> float:
        """McDonald order s - 1/2 of the associated radial mode."""
        return self.s - 0.5


def _check_order(epsilon: float) -> float:
    eps = abs(epsilon)
    if eps > 0.5 + 1e-15:
        raise ValueError(f"order |epsilon|={eps} outside the supported range [0, 1/2]")
    return min(eps, 0.5)


def truncation_point(y: float, epsilon: float = 0.5) -> float:
    """Upper limit U with exp(-y(cosh U - 1) + |eps| U) below the tail target."""
    u = 1.0
    for _ in range(6):
        u = math.acosh(1.0 + (_TAIL_LOG + abs(epsilon) * u + math.log1p(u)) / y)
    return max(u, 1.0 + 1e-9)


def mcdonald_k_scaled(epsilon: float, y: float) -> float:
    """e^{y} K_eps(y) by a fixed Gauss-Legendre panel (fast path, no error report)."""
    if not y > 0.0:
        raise ValueError(f"argument y must be positive, got {y}")
    eps = _check_order(epsilon)
    u_max = truncation_point(y, eps)
    return _backend.scaled_k_panel(eps, y, u_max, _GL_NODES_01, _GL_WEIGHTS_01)


def mcdonald_k_scaled_batch(epsilon: float, ys: np.ndarray) -> np.ndarray:
    """Vectorized ``mcdonald_k_scaled`` over an array of arguments."""
    eps = _check_order(epsilon)
    ys = np.asarray(ys, dtype=float)
    if np.any(ys <= 0.0):
        raise ValueError("arguments y must be positive")
    u_maxes = np.array([truncation_point(float(y), eps) for y in ys])
    return _backend.scaled_k_panel_batch(eps, ys, u_maxes, _GL_NODES_01, _GL_WEIGHTS_01)


def mcdonald_k(
    epsilon: float,
    y: float,
    *,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-10,
) -> float:
    """K_eps(y) by adaptive quadrature of the integral representation.

    Raises
    ------
    ValueError
        If ``y <= 0`` or the order is outside [-1/2, 1/2].
    QuadratureError
        If the achieved error estimate exceeds ``max(abs_tol, rel_tol * K)``.
    """
    if not y > 0.0:
        raise ValueError(f"argument y must be positive, got {y}")
    eps = _check_order(epsilon)
    u_max = truncation_point(y, eps)
    scaled, err = quad(
        lambda u: math.exp(-y * (math.cosh(u) - 1.0)) * math.cosh(eps * u),
        0.0,
        u_max,
        epsabs=1e-14,
        epsrel=1e-12,
        limit=200,
    )
    value = math.exp(-y) * scaled
    achieved = math.exp(-y) * err
    if achieved > max(abs_tol, rel_tol * abs(value)):
        raise QuadratureError("McDonald quadrature did not converge", value, achieved)
    return value


def k_split(
    epsilon: float,
    y: float,
    *,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-10,
) -> tuple[float, float]:
    """Central and tail pieces (c, d) of the integral; (c + d)/2 recovers K.

    ``c`` integrates over |u| <= 1, ``d`` over |u| > 1 (tail truncated as in
    ``mcdonald_k``); both are positive.
    """
    if not y > 0.0:
        raise ValueError(f"argument y must be positive, got {y}")
    eps = _check_order(epsilon)
    u_max = max(truncation_point(y, eps), 1.0 + 1e-9)
    integrand = lambda u: math.exp(-y * (math.cosh(u) - 1.0)) * math.cosh(eps * u)
    c_scaled, c_err = quad(integrand, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12, limit=200)
    d_scaled, d_err = quad(integrand, 1.0, u_max, epsabs=1e-14, epsrel=1e-12, limit=200)
    scale = 2.0 * math.exp(-y)
    c, d = scale * c_scaled, scale * d_scaled
    achieved = scale * (c_err + d_err)
    if achieved > max(abs_tol, rel_tol * (abs(c) + abs(d))):
        raise QuadratureError("split quadrature did not converge", c + d, achieved)
    return c, d


def k_two_sided_bounds(
    epsilon: float,
    y: float,
    *,
    y_min: float = TWO_OVER_GAMMA0,
) -> tuple[float, float]:
    """Two-sided envelope for K_eps(y), valid for y >= y_min (default 2/gamma0).

    lower = 2 e^{-eps} (e^{-y}/y) (1 - e^{-y})
    upper = (e^{-y}/y) (2 pi e^{eps} + delta0(y))
    """
    eps = _check_order(epsilon)
    if y < y_min:
        raise ValueError(f"bound valid for y >= {y_min}, got y={y}")
    envelope = math.exp(-y) / y
    lower = 2.0 * math.exp(-eps) * envelope * (-math.expm1(-y))
    upper = envelope * (TWO_PI * math.exp(eps) + delta0(y))
    return lower, upper


def whittaker_mode(param: SpectralParam, n: int, y: float) -> float:
    """Radial Whittaker value 2 sqrt(|n| y) K_{s-1/2}(|n| y); depends on n through |n|."""
    if param.regime != CUSPIDAL:
        raise ValueError(f"Whittaker modes need the cuspidal-small regime, got {param.regime}")
    if n == 0:
        raise ValueError("mode index n must be nonzero")
    if not y > 0.0:
        raise ValueError(f"argument y must be positive, got {y}")
    ny = abs(n) * y
    return 2.0 * math.sqrt(ny) * mcdonald_k(param.order, ny)


def whittaker_value(param: SpectralParam, n: int, x: float, y: float) -> complex:
    """Full mode value: radial part times the phase e^{i n x}."""
    return whittaker_mode(param, n, y) * complex(math.cos(n * x), math.sin(n * x))
