"""Pinching sweeps, the thick-mass dichotomy, and surface-level mass bounds.

As the core geodesic length tends to zero, the collar metric coefficient in
boundary-based coordinates tends to the paired-cusp coefficient e^{-r}/pi
and the mode potential tends to its cusp form j^2 pi^2 e^{2r}; the sweeps
tabulate both errors along a pinching schedule.  The dichotomy classifier
decides, from per-member thick masses on a threshold grid, whether mass
persists in the thick part (with a witness) or vanishes for every threshold
(with diverging renormalizers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .geometry import (
    CollarGeometry,
    collar_coeff_shifted,
    degenerate_limit_coeff,
    keen_halfwidth,
)

CASE1 = "case1"
CASE2 = "case2"


@dataclass(frozen=True)
class PinchFamily:
    """Schedule of collars being pinched, with their eigenvalues."""

    l_gammas: tuple[float, ...]
    lambdas: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "l_gammas", tuple(float(x) for x in self.l_gammas))
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        if len(self.l_gammas) != len(self.lambdas):
            raise ValueError("schedule and eigenvalue lists must have equal length")
        if not self.l_gammas:
            raise ValueError("schedule must be nonempty")
        for x in self.l_gammas:
            if not x > 0.0:
                raise ValueError(f"core lengths must be positive, got {x}")
        for a, b in zip(self.l_gammas, self.l_gammas[1:]):
            if not b < a:
                raise ValueError("schedule must be strictly decreasing")
        for lam in self.lambdas:
            if not 0.0 <= lam <= 0.25:
                raise ValueError(f"eigenvalues must lie in [0, 1/4], got {lam}")

    def __len__(self) -> int:
        return len(self.l_gammas)


@dataclass(frozen=True)
class MetricErrorRow:
    l_gamma: float
    r_shifted: float
    coeff: float
    limit: float
    coeff_err: float
    gtt_err: float


def metric_convergence_sweep(
    family: PinchFamily, r_grid: Sequence[float]
) -> list[MetricErrorRow]:
    """Pointwise collar-vs-cusp metric errors along the schedule.

    ``coeff_err`` compares the length coefficients, ``gtt_err`` the squared
    (metric tensor) entries; both decrease quadratically in l = l_gamma/2 pi.
    """
    rows = []
    for l_gamma in family.l_gammas:
        geom = CollarGeometry(l_gamma)
        for r in r_grid:
            coeff = collar_coeff_shifted(geom, r)
            limit = degenerate_limit_coeff(r)
            rows.append(
                MetricErrorRow(
                    l_gamma,
                    float(r),
                    coeff,
                    limit,
                    abs(coeff - limit),
                    abs(coeff * coeff - limit * limit),
                )
            )
    return rows


@dataclass(frozen=True)
class PotentialErrorRow:
    l_gamma: float
    r_shifted: float
    potential: float
    limit: float
    abs_err: float
    rel_err: float


def potential_convergence_sweep(
    family: PinchFamily, j: int, r_grid: Sequence[float]
) -> list[PotentialErrorRow]:
    """Mode-potential term j^2/(l cosh)^2 against its cusp limit j^2 pi^2 e^{2r}."""
    if j < 0:
        raise ValueError(f"mode index must be nonnegative, got {j}")
    rows = []
    for l_gamma in family.l_gammas:
        geom = CollarGeometry(l_gamma)
        for r in r_grid:
            if j == 0:
                pot = 0.0
                limit = 0.0
            else:
                coeff = collar_coeff_shifted(geom, float(r))
                pot = (j / coeff) ** 2
                limit = (j * math.pi) ** 2 * math.exp(2.0 * float(r))
            err = abs(pot - limit)
            rows.append(
                PotentialErrorRow(
                    l_gamma, float(r), pot, limit, err,
                    err / limit if limit else 0.0,
                )
            )
    return rows


@dataclass(frozen=True)
class DichotomyReport:
    """Outcome of the thick-mass dichotomy on a finite family.

    Case 1 carries a witness threshold and the achieved tail mass; case 2
    carries renormalizers K_m (unit thick mass at ``renorm_eps``) whose
    divergence is reported through the monotonicity flag and final value.
    """

    case: str
    delta: float
    tail_fraction: float
    witness_eps: float | None = None
    witness_value: float | None = None
    renorm_eps: float | None = None
    k_values: tuple[float, ...] | None = None

    @property
    def k_nondecreasing(self) -> bool | None:
        if self.k_values is None:
            return None
        return all(b >= a for a, b in zip(self.k_values, self.k_values[1:]))


def classify_dichotomy(
    masses_by_eps: Mapping[float, Sequence[float]],
    *,
    delta: float = 1e-3,
    tail_fraction: float = 0.25,
    renorm_eps: float | None = None,
) -> DichotomyReport:
    """Classify per-member thick masses (squared norms) over a threshold grid.

    The limsup over the family is realized as the max over the trailing
    ``tail_fraction`` of the schedule.  Case 1 holds when some threshold
    keeps at least ``delta`` of tail mass; otherwise case 2, with
    K_m = max(1, mass^{-1/2}) at ``renorm_eps`` (default: the smallest grid
    threshold).
    """
    if not masses_by_eps:
        raise ValueError("mass table is empty")
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    lengths = {len(v) for v in masses_by_eps.values()}
    if len(lengths) != 1:
        raise ValueError(f"inconsistent member counts across thresholds: {lengths}")
    n = lengths.pop()
    if n == 0:
        raise ValueError("mass table has no members")
    tail_start = min(n - 1, int(math.floor(n * (1.0 - tail_fraction))))
    best_eps = None
    best_val = -math.inf
    for eps in sorted(masses_by_eps):
        tail_max = max(masses_by_eps[eps][tail_start:])
        if tail_max > best_val:
            best_eps, best_val = eps, tail_max
    if best_val >= delta:
        return DichotomyReport(CASE1, delta, tail_fraction,
                               witness_eps=best_eps, witness_value=best_val)
    if renorm_eps is None:
        renorm_eps = min(masses_by_eps)
    if renorm_eps not in masses_by_eps:
        raise ValueError(f"renormalization threshold {renorm_eps} not in the grid")
    k_values = tuple(
        max(1.0, 1.0 / math.sqrt(m)) if m > 0.0 else math.inf
        for m in masses_by_eps[renorm_eps]
    )
    return DichotomyReport(CASE2, delta, tail_fraction,
                           renorm_eps=renorm_eps, k_values=k_values)


@dataclass(frozen=True)
class RegionBound:
    """Thin region with its measured or formula mass-ratio constant."""

    name: str
    kind: str  # "cusp" or "collar"
    constant: float | None

    def __post_init__(self) -> None:
        if self.kind not in ("cusp", "collar"):
            raise ValueError(f"region kind must be 'cusp' or 'collar', got {self.kind!r}")


@dataclass(frozen=True)
class AggregateBound:
    """Surface-level thin-vs-thick bound assembled from per-region constants."""

    eps: float
    combined_constant: float
    thick_mass_lower: float
    regions: tuple[RegionBound, ...]


def aggregate_mass_bounds(regions: Sequence[RegionBound], eps: float) -> AggregateBound:
    """Combine per-region ratio constants into the surface inequality.

    thin mass <= max(constants) * thick mass, so a unit-mass function keeps
    thick mass at least 1/sqrt(1 + C^2).  No thin regions means all mass is
    thick.
    """
    for region in regions:
        if region.constant is None:
            raise ValueError(f"region {region.name!r} is missing its ratio constant")
    combined = max((r.constant for r in regions), default=0.0)
    thick_lower = 1.0 / math.sqrt(1.0 + combined * combined)
    return AggregateBound(eps, combined, thick_lower, tuple(regions))


# ---------------------------------------------------------------------------
# Plain-text family configuration (key = value lines, repeated member blocks)
# ---------------------------------------------------------------------------

_FAMILY_KEYS = {"delta", "tail_fraction", "eps_grid"}
_MEMBER_KEYS = {"l_gamma", "lambda"}


@dataclass(frozen=True)
class FamilyConfig:
    family: PinchFamily
    delta: float = 1e-3
    tail_fraction: float = 0.25
    eps_grid: tuple[float, ...] = (0.3, 0.1)


def parse_family_config(text: str) -> FamilyConfig:
    """Parse a pinch-family description: global keys, then [member] blocks."""
    options: dict[str, str] = {}
    members: list[dict[str, float]] = []
    current: dict[str, float] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "[member]":
            current = {}
            members.append(current)
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = (s.strip() for s in line.partition("="))
        if current is None:
            if key not in _FAMILY_KEYS:
                raise ValueError(f"line {lineno}: unknown family key {key!r}")
            options[key] = value
        else:
            if key not in _MEMBER_KEYS:
                raise ValueError(f"line {lineno}: unknown member key {key!r}")
            current[key] = float(value)
    if not members:
        raise ValueError("family configuration has no [member] blocks")
    for i, member in enumerate(members):
        missing = _MEMBER_KEYS - set(member)
        if missing:
            raise ValueError(f"member {i + 1} is missing keys: {sorted(missing)}")
    family = PinchFamily(
        tuple(m["l_gamma"] for m in members),
        tuple(m["lambda"] for m in members),
    )
    delta = float(options.get("delta", 1e-3))
    tail_fraction = float(options.get("tail_fraction", 0.25))
    if delta <= 0.0 or tail_fraction <= 0.0:
        raise ValueError("delta and tail_fraction must be positive")
    eps_grid = tuple(
        float(x) for x in options.get("eps_grid", "0.3,0.1").split(",") if x.strip()
    )
    return FamilyConfig(family, delta, tail_fraction, eps_grid)
