"""Zero-set combinatorics: Euler accounting, crossing verdicts, sign scans.

The Euler accounting is pure arithmetic on a decomposition record: the zero
set's graph characteristic plus the characteristics of the signed
complementary components must add up to the surface characteristic.  When a
decomposition encodes the no-crossing hypothesis (all summands nonpositive,
at least one negative) the sum cannot reach the once-punctured sphere's
value 1, which forces every curve in the relevant homotopy class to meet the
zero set.

Grid extraction on collar cylinders uses marching squares with the
compactly-supported Euler characteristic, which is additive: the extracted
graph characteristic plus the region characteristics always equals the
closed cylinder's value 0.  Exact zero samples are resolved by symbolic
perturbation (sign of the first nonzero neighbor in a fixed scan order).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .collar_modes import CollarField

CROSSING_FORCED = "crossing-forced"
CONSISTENT = "consistent"

AMBIENT = "F"
POSITIVE = "+"
NEGATIVE = "-"
_SIGNS = (AMBIENT, POSITIVE, NEGATIVE)


class DegenerateFieldError(ValueError):
    """The sampled field vanishes identically; no zero contour exists."""


@dataclass(frozen=True)
class NodalComponent:
    """One complementary component: its sign (or ambient marker) and Euler number."""

    sign: str
    chi: int

    def __post_init__(self) -> None:
        if self.sign not in _SIGNS:
            raise ValueError(f"component sign must be one of {_SIGNS}, got {self.sign!r}")


@dataclass(frozen=True)
class NodalDecomposition:
    """Combinatorial record of a zero set and its complement.

    ``punctures_in_zero_set`` is the topological hypothesis flag (all
    punctures lie on the closure of the zero set and its components are
    essential); it cannot be derived from the numbers and must be asserted
    by the caller.
    """

    graph_vertices: int
    graph_edges: int
    components: tuple[NodalComponent, ...]
    surface_chi: int
    punctures_in_zero_set: bool | None = None

    def __post_init__(self) -> None:
        if self.graph_vertices < 0 or self.graph_edges < 0:
            raise ValueError("graph counts must be nonnegative")
        object.__setattr__(self, "components", tuple(self.components))

    @property
    def graph_chi(self) -> int:
        return self.graph_vertices - self.graph_edges


@dataclass(frozen=True)
class EulerSum:
    total: int
    surface_chi: int

    @property
    def consistent(self) -> bool:
        return self.total == self.surface_chi


def euler_sum(decomp: NodalDecomposition) -> EulerSum:
    """Sum chi(ambient) + chi(positive) + chi(negative) + chi(zero set)."""
    total = decomp.graph_chi + sum(c.chi for c in decomp.components)
    return EulerSum(total, decomp.surface_chi)


def crossing_verdict(decomp: NodalDecomposition) -> str:
    """Whether the decomposition forces the zero set across every parallel curve.

    Under the hypothesis (punctures on the zero set, ambient component and
    graph nonpositive, every signed component strictly negative, at least one
    signed component) the Euler sum is strictly below the once-punctured
    sphere's characteristic, so a curve missing the zero set is impossible.
    If any part of the hypothesis fails numerically the verdict is
    ``consistent`` (no contradiction available).
    """
    if decomp.punctures_in_zero_set is None:
        raise ValueError("hypothesis flag punctures_in_zero_set is not set")
    signed = [c for c in decomp.components if c.sign != AMBIENT]
    if not signed:
        raise ValueError("hypothesis needs at least one signed component (a sign change)")
    if not decomp.punctures_in_zero_set:
        return CONSISTENT
    ambient_ok = all(c.chi <= 0 for c in decomp.components if c.sign == AMBIENT)
    signed_ok = all(c.chi < 0 for c in signed)
    graph_ok = decomp.graph_chi <= 0
    if ambient_ok and signed_ok and graph_ok and euler_sum(decomp).total < decomp.surface_chi:
        return CROSSING_FORCED
    return CONSISTENT


@dataclass(frozen=True)
class SignTrace:
    """Sampled sign sequence along one parallel curve r = const."""

    r: float
    signs: np.ndarray = field(repr=False)
    constant_sign: bool = False
    zero_mode_dominant: bool = False

    @property
    def sign(self) -> int:
        if not self.constant_sign:
            return 0
        return int(np.sign(self.signs[0]))


def sign_scan(fld: CollarField, r_values: Sequence[float]) -> list[SignTrace]:
    """Sign traces along parallel curves, with the zero-mode dominance flag.

    A curve is flagged constant-sign when all samples share a nonzero sign;
    dominance (|zero mode| above the sup of the rest at that radius) is the
    sufficient condition and is reported alongside.
    """
    traces = []
    nonzero = fld.nonzero_part()
    zero = fld.zero_mode()
    for r in r_values:
        i = int(np.argmin(np.abs(fld.r_grid - r)))
        row = fld.values[i]
        signs = np.sign(row).astype(int)
        constant = bool(np.all(signs == signs[0]) and signs[0] != 0)
        dominant = bool(abs(zero[i]) > np.max(np.abs(nonzero[i])))
        traces.append(SignTrace(float(fld.r_grid[i]), signs, constant, dominant))
    return traces


# ---------------------------------------------------------------------------
# Grid extraction (marching squares on the closed cylinder, theta periodic)
# ---------------------------------------------------------------------------


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, x):
        parent = self.parent
        if x not in parent:
            parent[x] = x
            return x
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _perturbed_signs(values: np.ndarray) -> tuple[np.ndarray, int]:
    """Sign grid with exact zeros replaced by the first nonzero neighbor's sign.

    Neighbors are scanned east, west, north, south (theta wraps); unresolved
    zeros are filled iteratively, so plateaus take the sign of their nearest
    resolved boundary in that scan order.
    """
    signs = np.sign(values).astype(np.int8)
    n_zero = int(np.count_nonzero(signs == 0))
    perturbed = n_zero
    if n_zero == 0:
        return signs, 0
    if np.all(signs == 0):
        raise DegenerateFieldError(
            "field vanishes on the whole grid; perturb the data or coefficients"
        )
    rows, cols = signs.shape
    while n_zero:
        progressed = False
        zr, zc = np.nonzero(signs == 0)
        for i, k in zip(zr, zc):
            for di, dk in ((0, 1), (0, -1), (1, 0), (-1, 0)):
                ii = i + di
                if ii < 0 or ii >= rows:
                    continue
                s = signs[ii, (k + dk) % cols]
                if s != 0:
                    signs[i, k] = s
                    progressed = True
                    break
        n_zero = int(np.count_nonzero(signs == 0))
        if not progressed and n_zero:
            raise DegenerateFieldError("zero plateau could not be resolved")
    return signs, perturbed


@dataclass(frozen=True)
class ZeroSetComponent:
    vertices: int
    edges: int

    @property
    def chi(self) -> int:
        return self.vertices - self.edges


@dataclass(frozen=True)
class RegionComponent:
    sign: int
    chi: int
    sites: int


@dataclass(frozen=True)
class ExtractionResult:
    """Zero-contour graph and signed complement of a sampled cylinder field."""

    decomposition: NodalDecomposition
    zero_components: tuple[ZeroSetComponent, ...]
    region_components: tuple[RegionComponent, ...]
    perturbed_points: int

    @property
    def additive_total(self) -> int:
        return sum(z.chi for z in self.zero_components) + sum(
            r.chi for r in self.region_components
        )


def nodal_graph_extract(fld: CollarField) -> ExtractionResult:
    """Marching-squares zero contour of the field on its cylinder grid.

    Vertices sit on sign-changing grid edges, contour segments join them
    inside cells (saddles resolved by the cell mean).  Region characteristics
    use the compactly-supported convention, counted cell by cell, so the
    totals satisfy chi(graph) + sum chi(regions) = 0 on the cylinder.
    """
    values = fld.values
    signs, perturbed = _perturbed_signs(values)
    rows, cols = signs.shape

    # Crossing vertices on grid edges. 't' edges run along theta (wrapping),
    # 'r' edges along the radial direction.
    t_cross = signs != np.roll(signs, -1, axis=1)
    r_cross = signs[:-1, :] != signs[1:, :]

    regions = _UnionFind()
    zeros = _UnionFind()
    frag_counts: dict = {}
    frag_links: list = []
    segments: list = []

    for i in range(rows):
        for k in range(cols):
            if not t_cross[i, k]:
                regions.union((i, k), (i, (k + 1) % cols))
    for i in range(rows - 1):
        for k in range(cols):
            if not r_cross[i, k]:
                regions.union((i, k), (i + 1, k))

    def cell(i: int, k: int) -> None:
        k1 = (k + 1) % cols
        corners = ((i, k), (i, k1), (i + 1, k1), (i + 1, k))
        bottom = ("t", i, k) if t_cross[i, k] else None
        top = ("t", i + 1, k) if t_cross[i + 1, k] else None
        left = ("r", i, k) if r_cross[i, k] else None
        right = ("r", i, k1) if r_cross[i, k1] else None
        crossings = [e for e in (bottom, right, top, left) if e is not None]
        if not crossings:
            frag_links.append(corners)
            return
        if len(crossings) == 2:
            segments.append(tuple(crossings))
            sa = signs[i, k]
            group_a = tuple(c for c in corners if signs[c] == sa)
            group_b = tuple(c for c in corners if signs[c] != sa)
            frag_links.append(group_a)
            frag_links.append(group_b)
            return
        # Saddle: opposite corners share signs; the cell mean picks which
        # diagonal stays connected through the middle fragment.
        center = float(values[i, k] + values[i, k1] + values[i + 1, k1] + values[i + 1, k]) / 4.0
        sa = signs[i, k]
        center_sign = sa if center == 0.0 else (1 if center > 0.0 else -1)
        if center_sign == sa:
            # corners (i,k) and (i+1,k1) connected; cut off the other two
            segments.append((bottom, right))
            segments.append((top, left))
            frag_links.append((corners[0], corners[2]))
            frag_links.append((corners[1],))
            frag_links.append((corners[3],))
        else:
            segments.append((bottom, left))
            segments.append((top, right))
            frag_links.append((corners[1], corners[3]))
            frag_links.append((corners[0],))
            frag_links.append((corners[2],))

    for i in range(rows - 1):
        for k in range(cols):
            cell(i, k)

    for group in frag_links:
        for other in group[1:]:
            regions.union(group[0], other)

    for a, b in segments:
        zeros.union(a, b)

    # chi_c per region component: sites - edge pieces + cell fragments.
    site_count: dict = {}
    piece_count: dict = {}
    cell_count: dict = {}
    sign_of: dict = {}
    for i in range(rows):
        for k in range(cols):
            root = regions.find((i, k))
            site_count[root] = site_count.get(root, 0) + 1
            sign_of[root] = int(signs[i, k])

    def add_edge_piece(site) -> None:
        root = regions.find(site)
        piece_count[root] = piece_count.get(root, 0) + 1

    for i in range(rows):
        for k in range(cols):
            if t_cross[i, k]:
                add_edge_piece((i, k))
                add_edge_piece((i, (k + 1) % cols))
            else:
                add_edge_piece((i, k))
    for i in range(rows - 1):
        for k in range(cols):
            if r_cross[i, k]:
                add_edge_piece((i, k))
                add_edge_piece((i + 1, k))
            else:
                add_edge_piece((i, k))

    for group in frag_links:
        root = regions.find(group[0])
        cell_count[root] = cell_count.get(root, 0) + 1

    region_components = tuple(
        RegionComponent(
            sign_of[root],
            site_count[root] - piece_count.get(root, 0) + cell_count.get(root, 0),
            site_count[root],
        )
        for root in sorted(site_count)
    )

    # Zero-set components: vertices on crossed edges, segment edges in cells.
    vert_comp: dict = {}
    edge_comp: dict = {}
    all_vertices = [("t", i, k) for i in range(rows) for k in range(cols) if t_cross[i, k]]
    all_vertices += [("r", i, k) for i in range(rows - 1) for k in range(cols) if r_cross[i, k]]
    for vertex in all_vertices:
        root = zeros.find(vertex)
        vert_comp[root] = vert_comp.get(root, 0) + 1
    for a, b in segments:
        root = zeros.find(a)
        edge_comp[root] = edge_comp.get(root, 0) + 1
    zero_components = tuple(
        ZeroSetComponent(vert_comp[root], edge_comp.get(root, 0))
        for root in sorted(vert_comp)
    )

    components = tuple(
        NodalComponent(POSITIVE if rc.sign > 0 else NEGATIVE, rc.chi)
        for rc in region_components
    )
    graph_v = sum(z.vertices for z in zero_components)
    graph_e = sum(z.edges for z in zero_components)
    decomp = NodalDecomposition(graph_v, graph_e, components, surface_chi=0)
    return ExtractionResult(decomp, zero_components, region_components, perturbed)


# ---------------------------------------------------------------------------
# Plain-text decomposition format
# ---------------------------------------------------------------------------


def dumps_decomposition(decomp: NodalDecomposition) -> str:
    lines = ["# nodal decomposition"]
    lines.append(f"surface_chi = {decomp.surface_chi}")
    if decomp.punctures_in_zero_set is not None:
        lines.append(f"punctures_in_zero_set = {str(decomp.punctures_in_zero_set).lower()}")
    lines.append(f"graph = {decomp.graph_vertices} {decomp.graph_edges}")
    for comp in decomp.components:
        lines.append(f"component {comp.sign} {comp.chi}")
    return "\n".join(lines) + "\n"


def loads_decomposition(text: str) -> NodalDecomposition:
    surface_chi: int | None = None
    punctures: bool | None = None
    graph: tuple[int, int] | None = None
    components: list[NodalComponent] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("component"):
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'component SIGN CHI'")
            components.append(NodalComponent(parts[1], int(parts[2])))
            continue
        if line.startswith("graph"):
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'graph V E'")
            graph = (int(parts[1]), int(parts[2]))
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = (s.strip() for s in line.partition("="))
        if key == "surface_chi":
            surface_chi = int(value)
        elif key == "punctures_in_zero_set":
            punctures = value.lower() in ("true", "1", "yes")
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if surface_chi is None or graph is None:
        raise ValueError("decomposition needs surface_chi and graph lines")
    return NodalDecomposition(graph[0], graph[1], tuple(components), surface_chi, punctures)
