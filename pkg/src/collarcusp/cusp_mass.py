"""L2 masses of Whittaker and residual modes over cusp annuli.

The standard cusp is parameterized by the height coordinate ``y > 2*pi`` of
the upper half-plane picture; the annulus ``P(a, b)`` collects heights in
``[a, b)``.  Mode norms reduce to one-dimensional integrals:

    |W_s(n .)|^2 over P(a, b) = 2*pi * integral_a^b 4 |n| K_{s-1/2}(|n| y)^2 dy / y
    |f0 y^s|^2  over P(a, b) = 2*pi * f0^2 * integral_a^b y^{2s-2} dy

Tail ratios of these norms are the module's subject: the cuspidal ratio is
bounded and decays as the split height grows; the residual ratio is the
exact expression 1 / ((b/2*pi)^{1-2s} - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.integrate import quad

from .specfun import (
    CUSPIDAL,
    QuadratureError,
    SpectralParam,
    mcdonald_k_scaled,
    truncation_point,
)

TWO_PI = 2.0 * math.pi

DEFAULT_N_GRID = tuple(range(1, 9))
DEFAULT_S_GRID = (0.5, 0.625, 0.75, 0.875, 1.0)


class MassComputationError(RuntimeError):
    """A mass or mass ratio could not be computed (degenerate denominator)."""


@dataclass(frozen=True)
class Annulus:
    """Cusp annulus a <= y < b inside the standard cusp (a >= 2*pi; b may be inf)."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if self.a < TWO_PI:
            raise ValueError(f"annulus must start at or above 2*pi, got a={self.a}")
        if not self.b > self.a:
            raise ValueError(f"annulus needs b > a, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class MassProfile:
    """Squared L2 norm of a function over a named region."""

    region: str
    mass_sq: float

    def __post_init__(self) -> None:
        if self.mass_sq < 0.0:
            raise ValueError(f"mass_sq must be nonnegative, got {self.mass_sq}")

    def __add__(self, other: "MassProfile") -> "MassProfile":
        return MassProfile(f"{self.region}+{other.region}", self.mass_sq + other.mass_sq)


@dataclass(frozen=True)
class CuspModeCoeffs:
    """Finite mode data: cuspidal coefficients f_n plus an optional residual term.

    ``coeffs`` maps nonzero integers n to f_n.  A nonzero residual coefficient
    ``f0`` requires its own parameter ``s_residual`` in (0, 1/2).
    """

    param: SpectralParam
    coeffs: tuple[tuple[int, float], ...]
    f0: float = 0.0
    s_residual: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(sorted(dict(self.coeffs).items())))
        for n, _ in self.coeffs:
            if n == 0:
                raise ValueError("cuspidal coefficients are indexed by nonzero n")
        if self.f0 != 0.0:
            if self.s_residual is None or not 0.0 < self.s_residual < 0.5:
                raise ValueError(
                    "a residual coefficient needs s_residual in (0, 1/2), "
                    f"got {self.s_residual}"
                )
        if all(f == 0.0 for _, f in self.coeffs) and self.f0 == 0.0:
            raise ValueError("mode data describes the zero function")

    @classmethod
    def from_mapping(
        cls,
        param: SpectralParam,
        coeffs: Mapping[int, float],
        f0: float = 0.0,
        s_residual: float | None = None,
    ) -> "CuspModeCoeffs":
        return cls(param, tuple(coeffs.items()), f0, s_residual)


def whittaker_norm_sq(
    param: SpectralParam,
    n: int,
    annulus: Annulus,
    *,
    rel_tol: float = 1e-11,
) -> float:
    """Squared norm of the n-th Whittaker mode over the annulus.

    The infinite upper limit is handled by the integrator's tail transform;
    the integrand is evaluated through the exponentially scaled McDonald
    kernel, so deep-tail underflow degrades gracefully to zero.
    """
    if param.regime != CUSPIDAL:
        raise ValueError(f"Whittaker norms need the cuspidal-small regime, got {param.regime}")
    if n == 0:
        raise ValueError("mode index n must be nonzero")
    eps = param.order
    m = abs(n)

    def integrand(y: float) -> float:
        ny = m * y
        scaled = mcdonald_k_scaled(eps, ny)
        damp = math.exp(-2.0 * ny)
        return 4.0 * m * damp * scaled * scaled / y

    upper = annulus.b if math.isfinite(annulus.b) else np.inf
    value, err = quad(
        integrand, annulus.a, upper, epsabs=1e-300, epsrel=rel_tol, limit=300
    )
    if value != 0.0 and err > 10.0 * rel_tol * abs(value) + 1e-300:
        raise QuadratureError("Whittaker norm quadrature did not converge", value, err)
    return TWO_PI * value


def whittaker_inner_product(
    param: SpectralParam,
    n: int,
    m: int,
    annulus: Annulus,
    *,
    n_x: int = 256,
    n_y: int = 2001,
) -> complex:
    """Two-dimensional composite quadrature of <W_s(n.), W_s(m.)> over a finite annulus."""
    if not math.isfinite(annulus.b):
        raise ValueError("inner product quadrature needs a finite annulus")
    ys = np.linspace(annulus.a, annulus.b, n_y)
    xs = np.arange(n_x) * (TWO_PI / n_x)
    eps = param.order
    rad_n = 2.0 * np.sqrt(abs(n) * ys) * np.array(
        [math.exp(-abs(n) * y) * mcdonald_k_scaled(eps, abs(n) * y) for y in ys]
    )
    rad_m = 2.0 * np.sqrt(abs(m) * ys) * np.array(
        [math.exp(-abs(m) * y) * mcdonald_k_scaled(eps, abs(m) * y) for y in ys]
    )
    phase = np.exp(1j * (n - m) * xs).sum() * (TWO_PI / n_x)
    radial = np.trapezoid(rad_n * rad_m / ys**2, ys)
    return complex(phase * radial)


def cuspidal_tail_ratio(param: SpectralParam, n: int, b: float) -> float:
    """Norm ratio of the n-th mode beyond height b to its band mass over [2*pi, b]."""
    if not b > TWO_PI:
        raise ValueError(f"split height b must exceed 2*pi, got {b}")
    band = whittaker_norm_sq(param, n, Annulus(TWO_PI, b))
    if band <= 0.0:
        raise MassComputationError(
            f"band mass for n={n}, s={param.s}, b={b} is numerically zero"
        )
    tail = whittaker_norm_sq(param, n, Annulus(b, math.inf))
    return math.sqrt(tail / band)


@dataclass(frozen=True)
class TailRatioSweep:
    """Tail-ratio sweep rows and the per-split-height empirical constants."""

    rows: tuple[tuple[float, int, float, float, float, float], ...]
    khat: tuple[tuple[float, float], ...]

    COLUMNS = ("b", "n", "s", "band_mass", "tail_mass", "ratio")

    def khat_dict(self) -> dict[float, float]:
        return dict(self.khat)


def khat_sweep(
    b_values: Sequence[float],
    n_values: Sequence[int] = DEFAULT_N_GRID,
    s_values: Sequence[float] = DEFAULT_S_GRID,
) -> TailRatioSweep:
    """Empirical sup of the cuspidal tail ratio over a grid of modes and parameters.

    Uniformity over all n is sampled on the finite grid, not proven; the
    summary records the grid sup for each split height.
    """
    rows = []
    khat = []
    for b in b_values:
        sup = 0.0
        for n in n_values:
            for s in s_values:
                param = SpectralParam(s)
                band = whittaker_norm_sq(param, n, Annulus(TWO_PI, b))
                tail = whittaker_norm_sq(param, n, Annulus(b, math.inf))
                ratio = math.sqrt(tail / band) if band > 0.0 else 0.0
                rows.append((b, n, s, band, tail, ratio))
                sup = max(sup, ratio)
        khat.append((b, sup))
    return TailRatioSweep(tuple(rows), tuple(khat))


def residual_tail_ratio_sq(s: float, b: float) -> float:
    """Exact squared tail ratio 1/((b/2*pi)^{1-2s} - 1) of the residual mode y^s."""
    if not 0.0 < s < 0.5:
        raise ValueError(f"residual parameter s must lie in (0, 1/2), got {s}")
    if not b > TWO_PI:
        raise ValueError(f"split height b must exceed 2*pi, got {b}")
    return 1.0 / ((b / TWO_PI) ** (1.0 - 2.0 * s) - 1.0)


def residual_norm_sq(f0: float, s: float, annulus: Annulus) -> float:
    """Closed-form squared norm of f0 y^s over the annulus (s < 1/2)."""
    if not 0.0 < s < 0.5:
        raise ValueError(f"residual parameter s must lie in (0, 1/2), got {s}")
    p = 2.0 * s - 1.0  # negative
    upper = 0.0 if not math.isfinite(annulus.b) else annulus.b**p
    return TWO_PI * f0 * f0 * (annulus.a**p - upper) / (-p)


@dataclass(frozen=True)
class LebedevTail:
    """Tail integral of e^{-2 alpha y} / y^2 with its leading term."""

    value: float
    leading_term: float
    rel_deviation: float


def lebedev_tail(alpha: float, t1: float, t2: float) -> LebedevTail:
    """integral_{t1}^{t2} e^{-2 alpha y} / y^2 dy against e^{-2 alpha t1}/(2 alpha t1^2).

    Valid for alpha > 1 and 1 < t1 < t2; the relative deviation of the
    leading term is O(e^{2(t1 - t2)} + 1/t1).
    """
    if not alpha > 1.0:
        raise ValueError(f"decay rate alpha must exceed 1, got {alpha}")
    if not (1.0 < t1 < t2):
        raise ValueError(f"need 1 < t1 < t2, got t1={t1}, t2={t2}")
    scale = math.exp(-2.0 * alpha * t1)

    def integrand(y: float) -> float:
        return math.exp(-2.0 * alpha * (y - t1)) / (y * y)

    upper = t2 if math.isfinite(t2) else np.inf
    scaled_value, _ = quad(integrand, t1, upper, epsabs=1e-300, epsrel=1e-12, limit=200)
    value = scale * scaled_value
    leading = scale / (2.0 * alpha * t1 * t1)
    rel_dev = abs(scaled_value - 1.0 / (2.0 * alpha * t1 * t1)) * (2.0 * alpha * t1 * t1)
    return LebedevTail(value, leading, rel_dev)


def coeffs_norm_sq(coeffs: CuspModeCoeffs, annulus: Annulus) -> float:
    """Squared norm of the synthesized mode sum over the annulus.

    Modes are pairwise orthogonal (distinct phases; the residual term carries
    the zero phase), so the norm is the weighted sum of mode norms.
    """
    total = 0.0
    for n, f_n in coeffs.coeffs:
        if f_n != 0.0:
            total += f_n * f_n * whittaker_norm_sq(coeffs.param, n, annulus)
    if coeffs.f0 != 0.0:
        assert coeffs.s_residual is not None
        total += residual_norm_sq(coeffs.f0, coeffs.s_residual, annulus)
    return total


@dataclass(frozen=True)
class CuspBandRatio:
    """Measured thin-part vs band mass ratio at one thin-part threshold."""

    eps: float
    thin_mass_sq: float
    band_mass_sq: float
    ratio: float


def cusp_mass_bound_check(
    coeffs: CuspModeCoeffs, eps_grid: Sequence[float]
) -> list[CuspBandRatio]:
    """Measured ratio of the eps-thin cusp mass to the band mass, per grid eps.

    The eps-thin part of the cusp is the region beyond height 2*pi/eps; the
    band is [2*pi, 2*pi/eps].  The measured ratios decrease to zero as eps
    shrinks.
    """
    results = []
    for eps in eps_grid:
        if not 0.0 < eps < 1.0:
            raise ValueError(f"thin-part threshold eps must lie in (0, 1), got {eps}")
        split = TWO_PI / eps
        thin = coeffs_norm_sq(coeffs, Annulus(split, math.inf))
        band = coeffs_norm_sq(coeffs, Annulus(TWO_PI, split))
        if band <= 0.0:
            raise MassComputationError(f"band mass at eps={eps} is numerically zero")
        results.append(CuspBandRatio(eps, thin, band, math.sqrt(thin / band)))
    return results
