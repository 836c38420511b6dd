"""Hyperbolic collar and cusp model domains.

Coordinate conventions used throughout the package:

* A collar around a closed geodesic of length ``l_gamma`` is the cylinder
  with coordinates ``(r, theta)`` (signed distance from the core geodesic,
  angle mod 2*pi) and metric ``ds^2 = dr^2 + l^2 cosh^2(r) dtheta^2`` where
  ``l = l_gamma / (2*pi)``.  The collar with boundary curves of length ``u``
  is the sublevel set ``l_gamma cosh(r) < u``; its boundary sits at
  ``|r| = arccosh(u / l_gamma)``.
* A cusp with boundary horocycle of length ``t`` is the half cylinder with
  coordinates ``(r, theta)`` (distance into the cusp from the boundary
  horocycle, angle mod 2*pi) and metric
  ``ds^2 = dr^2 + (t / 2*pi)^2 e^{-2r} dtheta^2``.

Everything here is a pure function of plain floats; values types are
immutable and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

TWO_PI = 2.0 * math.pi

#: Default Margulis constant used for thin-part boundaries.  Safely below the
#: two-dimensional bounds, so every derived boundary radius stays in range.
DEFAULT_MARGULIS = 0.5


def arccosh(x: float) -> float:
    """arccosh via the explicit log form log(x + sqrt((x-1)(x+1)))."""
    if x < 1.0:
        raise ValueError(f"arccosh argument must be >= 1, got {x}")
    return math.log(x + math.sqrt((x - 1.0) * (x + 1.0)))


def arcsinh(x: float) -> float:
    """arcsinh via the log form, sign-symmetric."""
    return math.copysign(math.log(abs(x) + math.hypot(1.0, x)), x)


def log_cosh(x: float) -> float:
    """log(cosh(x)) without overflow for large |x|."""
    a = abs(x)
    return a + math.log1p(math.exp(-2.0 * a)) - math.log(2.0)


@dataclass(frozen=True)
class CollarGeometry:
    """Collar around a closed geodesic of length ``l_gamma``.

    ``l = l_gamma / (2*pi)`` is derived, never stored.  ``margulis_eps0`` is
    the thin-part threshold used when a mid-band boundary is not given
    explicitly.
    """

    l_gamma: float
    margulis_eps0: float = DEFAULT_MARGULIS

    def __post_init__(self) -> None:
        if not self.l_gamma > 0.0:
            raise ValueError(f"l_gamma must be positive, got {self.l_gamma}")
        if not 0.0 < self.margulis_eps0 < 1.0:
            raise ValueError(
                f"margulis_eps0 must lie in (0, 1), got {self.margulis_eps0}"
            )

    @property
    def l(self) -> float:
        return self.l_gamma / TWO_PI

    @property
    def halfwidth(self) -> float:
        return keen_halfwidth(self.l_gamma)

    def boundary_radius(self, u: float) -> float:
        return boundary_radius(self, u)

    def contains(self, point: "FermiPoint", boundary_length: float = 1.0) -> bool:
        """Whether the point lies in the collar of the given boundary length."""
        return abs(point.r) <= self.boundary_radius(boundary_length)


@dataclass(frozen=True)
class CuspGeometry:
    """Cusp bounded by a horocycle of length ``t`` (area equals ``t``)."""

    t: float

    def __post_init__(self) -> None:
        if not self.t > 0.0:
            raise ValueError(f"horocycle length t must be positive, got {self.t}")

    @property
    def area(self) -> float:
        return self.t


@dataclass(frozen=True)
class FermiPoint:
    """Point on a collar cylinder: signed distance from the core, angle."""

    r: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", self.theta % TWO_PI)


@dataclass(frozen=True)
class HorocyclePoint:
    """Point on a cusp: distance from the boundary horocycle, position along it."""

    r: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        if self.r < 0.0:
            raise ValueError(f"cusp depth r must be >= 0, got {self.r}")


def collar_metric_coeff(geom: CollarGeometry, r: float) -> float:
    """Length coefficient l*cosh(r) of the collar metric; even, minimal at r=0."""
    return geom.l * math.cosh(r)


def cusp_metric_coeff(geom: CuspGeometry, r: float) -> float:
    """Length coefficient (t/2*pi) e^{-r} of the cusp metric, r >= 0."""
    if r < 0.0:
        raise ValueError(f"cusp depth r must be >= 0, got {r}")
    return geom.t / TWO_PI * math.exp(-r)


def cusp_area(geom: CuspGeometry) -> float:
    """Total area of the cusp; equals the boundary horocycle length."""
    return geom.t


def keen_halfwidth(l_gamma: float) -> float:
    """Half-width rho = arcsinh(1/sinh(l_gamma/2)) of the embedded collar."""
    if not l_gamma > 0.0:
        raise ValueError(f"l_gamma must be positive, got {l_gamma}")
    return arcsinh(1.0 / math.sinh(0.5 * l_gamma))


def keen_boundary_length(l_gamma: float) -> float:
    """Boundary length w = l_gamma * cosh(rho) of the embedded collar; ~2 for short geodesics."""
    return l_gamma * math.cosh(keen_halfwidth(l_gamma))


def boundary_radius(geom: CollarGeometry, u: float) -> float:
    """Radius L_u = arccosh(u / l_gamma) of the collar with boundary length u."""
    if u < geom.l_gamma:
        raise ValueError(
            f"boundary length u={u} below core length l_gamma={geom.l_gamma}: "
            "collar band is empty"
        )
    return arccosh(u / geom.l_gamma)


def shifted_fermi(geom: CollarGeometry, r: float) -> float:
    """Fermi coordinate with origin moved to the embedded-collar boundary."""
    return r - keen_halfwidth(geom.l_gamma)


def collar_coeff_shifted(geom: CollarGeometry, r_shifted: float) -> float:
    """Collar metric coefficient as a function of the inward boundary distance.

    ``r_shifted`` measures distance from the collar boundary at the Keen
    half-width toward (and past) the core, so the coefficient is
    ``l * cosh(r_shifted - rho)``.  For fixed ``r_shifted`` it tends to
    ``e^{-r_shifted} / pi`` as ``l_gamma -> 0``.
    """
    return geom.l * math.cosh(r_shifted - keen_halfwidth(geom.l_gamma))


def degenerate_limit_coeff(r_shifted: float) -> float:
    """Pinching limit e^{-r}/pi of the shifted collar metric coefficient."""
    return math.exp(-r_shifted) / math.pi
