"""Radial mode analysis on collars.

Fourier coefficients of an eigenfunction on a collar solve, in the distance
coordinate r,

    phi'' + tanh(r) phi' + (lambda - j^2 / (l^2 cosh^2 r)) phi = 0,

and the substitution u = cosh^{1/2}(r) phi removes the first-order term:

    u'' = Q(r) u,   Q(r) = (1/4 - lambda) + 1/(4 cosh^2 r) + j^2 / (l^2 cosh^2 r).

For small eigenvalues Q > 0, so the normalized solutions grow monotonically
away from the core; for short core geodesics they overflow doubles, and the
solver then continues in a log-magnitude representation (v = u'/u,
w = log u).  Masses, ratios and synthesized fields are assembled from that
representation, so only the ratios ever need to be representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.integrate import quad, solve_ivp

from .geometry import CollarGeometry, log_cosh
from .specfun import SpectralParam

TWO_PI = 2.0 * math.pi

#: Magnitude at which the solver switches to the log representation.
SWITCH_MAGNITUDE = 1e100

_LOG_SWITCH = math.log(SWITCH_MAGNITUDE)
_EXP_MAX = 709.0

MONOTONE_INCREASING = "increasing"
MONOTONE_FAILED = "not increasing"
HYPOTHESIS_NOT_SATISFIED = "hypothesis not satisfied"


class ModeSolveError(RuntimeError):
    """The radial integration failed (step-size collapse)."""

    def __init__(self, message: str, r_fail: float):
        super().__init__(f"{message} (failed near r={r_fail!r})")
        self.r_fail = r_fail


@dataclass(frozen=True)
class ModeODE:
    """Radial equation data for mode index j on a collar at a small eigenvalue."""

    geom: CollarGeometry
    param: SpectralParam
    j: int

    def __post_init__(self) -> None:
        if self.j < 0 or self.j != int(self.j):
            raise ValueError(f"mode index j must be a nonnegative integer, got {self.j}")
        if self.geom.l_gamma >= 1.0:
            raise ValueError(
                f"collar must be strictly thinner than the unit band, got l_gamma={self.geom.l_gamma}"
            )

    def q(self, r: float) -> float:
        """Transformed potential Q(r); strictly positive for small eigenvalues."""
        c = math.cosh(r)
        base = (0.25 - self.param.eigenvalue) + 0.25 / (c * c)
        if self.j:
            jl = self.j / (self.geom.l * c)
            base += jl * jl
        return base

    def q_array(self, r: np.ndarray) -> np.ndarray:
        c = np.cosh(r)
        base = (0.25 - self.param.eigenvalue) + 0.25 / (c * c)
        if self.j:
            base = base + (self.j / (self.geom.l * c)) ** 2
        return base


class _HalfSolution:
    """One-sided solution of u'' = Q u on [0, r_max] with u, u' >= 0.

    ``dense_lin`` covers [0, r_switch] with state (u, u'); past the switch the
    log representation ``dense_log`` carries (v, w) = (u'/u, log u).
    """

    def __init__(self, ode: ModeODE, u0: float, du0: float, r_max: float,
                 rtol: float, atol: float):
        self.ode = ode
        self.r_max = r_max
        self.u0 = u0
        self.du0 = du0

        def rhs_lin(r, z):
            return (z[1], ode.q(r) * z[0])

        def hit_switch(r, z):
            return z[0] - SWITCH_MAGNITUDE

        hit_switch.terminal = True
        hit_switch.direction = 1.0

        sol = solve_ivp(
            rhs_lin,
            (0.0, r_max),
            (u0, du0),
            method="DOP853",
            rtol=rtol,
            atol=atol,
            dense_output=True,
            events=hit_switch,
        )
        if sol.status < 0:
            raise ModeSolveError(sol.message, float(sol.t[-1]))
        self.dense_lin = sol.sol
        if sol.status == 1:
            r_sw = float(sol.t_events[0][0])
            u_sw, du_sw = (float(v) for v in sol.sol(r_sw))
            self.r_switch: float | None = r_sw
            v0 = du_sw / u_sw
            w0 = math.log(u_sw)

            def rhs_log(r, z):
                v = z[0]
                return (ode.q(r) - v * v, v)

            def jac_log(r, z):
                return ((-2.0 * z[0], 0.0), (1.0, 0.0))

            logsol = solve_ivp(
                rhs_log,
                (r_sw, r_max),
                (v0, w0),
                method="LSODA",
                jac=jac_log,
                rtol=max(rtol, 1e-11),
                atol=(1e-8, 1e-10),
                dense_output=True,
            )
            if logsol.status < 0:
                raise ModeSolveError(logsol.message, float(logsol.t[-1]))
            self.dense_log = logsol.sol
        else:
            self.r_switch = None
            self.dense_log = None

    def _clamp(self, r: np.ndarray) -> np.ndarray:
        return np.clip(r, 0.0, self.r_max)

    def log_u(self, r: np.ndarray) -> np.ndarray:
        """log u(r); -inf where u vanishes (only at r = 0 for odd data)."""
        r = self._clamp(np.asarray(r, dtype=float))
        out = np.empty_like(r)
        if self.r_switch is None:
            lin = np.ones_like(r, dtype=bool)
        else:
            lin = r <= self.r_switch
        if lin.any():
            u = self.dense_lin(r[lin])[0]
            with np.errstate(divide="ignore"):
                out[lin] = np.where(u > 0.0, np.log(np.maximum(u, 1e-320)), -np.inf)
        if (~lin).any():
            out[~lin] = self.dense_log(r[~lin])[1]
        return out

    def rate(self, r: np.ndarray) -> np.ndarray:
        """v = u'/u; +inf at a zero of u."""
        r = self._clamp(np.asarray(r, dtype=float))
        out = np.empty_like(r)
        if self.r_switch is None:
            lin = np.ones_like(r, dtype=bool)
        else:
            lin = r <= self.r_switch
        if lin.any():
            u, du = self.dense_lin(r[lin])
            with np.errstate(divide="ignore", invalid="ignore"):
                out[lin] = np.where(u > 0.0, du / np.maximum(u, 1e-320), np.inf)
        if (~lin).any():
            out[~lin] = self.dense_log(r[~lin])[0]
        return out

    def u_du(self, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(u, u') as floats; +inf past the representable range."""
        r = self._clamp(np.asarray(r, dtype=float))
        u = np.empty_like(r)
        du = np.empty_like(r)
        if self.r_switch is None:
            lin = np.ones_like(r, dtype=bool)
        else:
            lin = r <= self.r_switch
        if lin.any():
            u[lin], du[lin] = self.dense_lin(r[lin])
        if (~lin).any():
            v, w = self.dense_log(r[~lin])
            big = w > _EXP_MAX
            uu = np.where(big, np.inf, np.exp(np.minimum(w, _EXP_MAX)))
            u[~lin] = uu
            du[~lin] = uu * v
        return u, du

    def mass_log(self, x1: float, x2: float) -> float:
        """log of integral_{x1}^{x2} u(r)^2 dr (one side)."""
        x1 = max(0.0, x1)
        x2 = min(self.r_max, x2)
        if x2 <= x1:
            return -math.inf
        pieces = []
        if self.r_switch is None or x2 <= self.r_switch:
            pieces.append(self._mass_log_piece(x1, x2, linear=True))
        elif x1 >= self.r_switch:
            pieces.append(self._mass_log_piece(x1, x2, linear=False))
        else:
            pieces.append(self._mass_log_piece(x1, self.r_switch, linear=True))
            pieces.append(self._mass_log_piece(self.r_switch, x2, linear=False))
        return float(np.logaddexp.reduce(pieces))

    def _mass_log_piece(self, x1: float, x2: float, linear: bool) -> float:
        if x2 <= x1:
            return -math.inf
        if linear:
            u_ref = float(self.dense_lin(x2)[0])
            if u_ref <= 0.0:
                return -math.inf
            log_ref = math.log(u_ref)

            def f(r: float) -> float:
                val = float(self.dense_lin(r)[0]) / u_ref
                return val * val

        else:
            log_ref = float(self.dense_log(x2)[1])

            def f(r: float) -> float:
                w = float(self.dense_log(r)[1])
                return math.exp(max(2.0 * (w - log_ref), -745.0))

        # The integrand peaks at x2 with decay rate ~ 2 v(x2); accumulate
        # leftward in chunks wide enough to capture the boundary layer and
        # stop once the remainder is negligible.
        total = 0.0
        right = x2
        while right > x1:
            v_r = float(self.rate(np.array([right]))[0])
            width = (x2 - x1) if v_r <= 1.0 else 30.0 / v_r
            left = max(x1, right - max(width, 1e-12))
            part, _ = quad(f, left, right, epsabs=1e-300, epsrel=1e-12, limit=200)
            total += part
            if left <= x1 or f(left) * (left - x1) < 1e-16 * total:
                break
            right = left
        if total <= 0.0:
            return -math.inf
        return math.log(total) + 2.0 * log_ref


class ModeSolution:
    """Sampled radial solution of the collar mode equation.

    ``kind`` is ``"s"`` (odd: value 0, slope 1 at the core) or ``"c"`` (even:
    value 1, slope 0).  Both half-lines are integrated independently, so the
    parity defect is a genuine accuracy measure.
    """

    def __init__(self, ode: ModeODE, kind: str, boundary_length: float = 1.0,
                 *, rtol: float = 1e-12, atol: float = 1e-14, n_samples: int = 1025):
        if kind not in ("s", "c"):
            raise ValueError(f"kind must be 's' or 'c', got {kind!r}")
        self.ode = ode
        self.kind = kind
        self.boundary_length = boundary_length
        self.r_max = ode.geom.boundary_radius(boundary_length)
        u0, du0 = (0.0, 1.0) if kind == "s" else (1.0, 0.0)
        self.right = _HalfSolution(ode, u0, du0, self.r_max, rtol, atol)
        # Left side: z(rho) = parity * u(-rho) solves the same equation with
        # the sign flip folded into the initial slope.
        self.left = _HalfSolution(ode, u0, du0 if kind == "s" else du0, self.r_max, rtol, atol)
        self.parity = -1.0 if kind == "s" else 1.0
        self.n_samples = n_samples
        self._grid: np.ndarray | None = None

    @property
    def geom(self) -> CollarGeometry:
        return self.ode.geom

    def _split(self, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        r = np.asarray(r, dtype=float)
        return r, r < 0.0

    def sign_at(self, r) -> np.ndarray:
        r, neg = self._split(r)
        out = np.ones_like(r)
        out[neg] = self.parity
        if self.kind == "s":
            out[r == 0.0] = 0.0
        return out

    def u(self, r) -> np.ndarray:
        r, neg = self._split(r)
        out = np.empty_like(r)
        if (~neg).any():
            out[~neg] = self.right.u_du(r[~neg])[0]
        if neg.any():
            out[neg] = self.parity * self.left.u_du(-r[neg])[0]
        return out

    def du(self, r) -> np.ndarray:
        r, neg = self._split(r)
        out = np.empty_like(r)
        if (~neg).any():
            out[~neg] = self.right.u_du(r[~neg])[1]
        if neg.any():
            out[neg] = -self.parity * self.left.u_du(-r[neg])[1]
        return out

    def log_abs_u(self, r) -> np.ndarray:
        r, neg = self._split(r)
        out = np.empty_like(r)
        if (~neg).any():
            out[~neg] = self.right.log_u(r[~neg])
        if neg.any():
            out[neg] = self.left.log_u(-r[neg])
        return out

    def phi(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return self.u(r) / np.sqrt(np.cosh(r))

    def dphi(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        c = np.sqrt(np.cosh(r))
        return (self.du(r) - 0.5 * np.tanh(r) * self.u(r)) / c

    def log_abs_phi(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        lc = np.array([log_cosh(float(x)) for x in np.atleast_1d(r)])
        return self.log_abs_u(r) - 0.5 * lc.reshape(np.shape(r))

    @property
    def r_grid(self) -> np.ndarray:
        if self._grid is None:
            self._grid = np.linspace(-self.r_max, self.r_max, self.n_samples)
        return self._grid

    def samples(self) -> dict[str, np.ndarray]:
        """Grid samples of (r, phi, dphi); values are +-inf past float range."""
        r = self.r_grid
        return {"r": r, "phi": self.phi(r), "dphi": self.dphi(r)}

    def parity_defect(self, n_points: int = 201) -> float:
        """max over the grid of |phi(r) - parity * phi(-r)| / max(1, |phi(r)|)."""
        r = np.linspace(0.0, self.r_max, n_points)[1:]
        right = self.phi(r)
        left = self.phi(-r)
        finite = np.isfinite(right) & np.isfinite(left)
        defect = 0.0
        if finite.any():
            num = np.abs(right[finite] - self.parity * left[finite])
            den = np.maximum(1.0, np.abs(right[finite]))
            defect = float(np.max(num / den))
        both = ~finite
        if both.any():
            wr = self.right.log_u(r[both])
            wl = self.left.log_u(r[both])
            defect = max(defect, float(np.max(np.abs(np.expm1(wl - wr)))))
        return defect

    def mass_log_band(self, t: float, w: float) -> float:
        """log of l_gamma * integral of u^2 over the band t <= boundary length <= w."""
        geom = self.ode.geom
        if not geom.l_gamma <= t <= w <= self.boundary_length + 1e-12:
            raise ValueError(
                f"band [{t}, {w}] outside the solved range "
                f"[{geom.l_gamma}, {self.boundary_length}]"
            )
        x1 = geom.boundary_radius(t)
        x2 = geom.boundary_radius(min(w, self.boundary_length))
        if x2 <= x1:
            return -math.inf
        lg = math.log(geom.l_gamma)
        return lg + float(
            np.logaddexp(self.right.mass_log(x1, x2), self.left.mass_log(x1, x2))
        )


def solve_mode(ode: ModeODE, kind: str, *, boundary_length: float = 1.0,
               rtol: float = 1e-12, atol: float = 1e-14,
               n_samples: int = 1025) -> ModeSolution:
    """Integrate the mode equation outward from the core in both directions."""
    return ModeSolution(ode, kind, boundary_length, rtol=rtol, atol=atol,
                        n_samples=n_samples)


def mode_mass(sol: ModeSolution, band: tuple[float, float]) -> float:
    """l_gamma * integral of u^2 over the symmetric band; inf if unrepresentable."""
    log_mass = sol.mass_log_band(*band)
    if log_mass == -math.inf:
        return 0.0
    if log_mass > _EXP_MAX:
        return math.inf
    return math.exp(log_mass)


def transform_u(sol: ModeSolution, r: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Transformed samples u = cosh^{1/2}(r) * phi(r) on the given grid."""
    if r is None:
        r = sol.r_grid
    r = np.asarray(r, dtype=float)
    return r, np.sqrt(np.cosh(r)) * sol.phi(r)


def fd_residual_u(sol: ModeSolution, h: float = 1e-3,
                  r: np.ndarray | None = None, five_point: bool = False) -> float:
    """Max normalized residual of u'' = Q u under central differences.

    Uses sampled values only (no solver derivatives), so this is an honest
    consistency check of the transformed equation; restricted to points where
    the stencil stays in float range.
    """
    if r is None:
        r = np.linspace(-sol.r_max + 2 * h, sol.r_max - 2 * h, 401)
    r = np.asarray(r, dtype=float)
    _, u0 = transform_u(sol, r)
    _, up = transform_u(sol, r + h)
    _, um = transform_u(sol, r - h)
    if five_point:
        _, up2 = transform_u(sol, r + 2 * h)
        _, um2 = transform_u(sol, r - 2 * h)
        d2 = (-up2 + 16 * up - 30 * u0 + 16 * um - um2) / (12 * h * h)
    else:
        d2 = (up - 2 * u0 + um) / (h * h)
    q = sol.ode.q_array(r)
    res = d2 - q * u0
    ok = np.isfinite(res)
    if not ok.any():
        return math.inf
    return float(np.max(np.abs(res[ok]) / (1.0 + np.abs(q[ok] * u0[ok]))))


def fd_residual_phi(sol: ModeSolution, h: float = 1e-3,
                    r: np.ndarray | None = None) -> float:
    """Max residual of the original mode equation under central differences."""
    if r is None:
        r = np.linspace(-sol.r_max + 2 * h, sol.r_max - 2 * h, 401)
    r = np.asarray(r, dtype=float)
    p0 = sol.phi(r)
    pp = sol.phi(r + h)
    pm = sol.phi(r - h)
    d2 = (pp - 2 * p0 + pm) / (h * h)
    d1 = (pp - pm) / (2 * h)
    lam = sol.ode.param.eigenvalue
    pot = lam - (sol.ode.q_array(r) - (0.25 - lam) - 0.25 / np.cosh(r) ** 2)
    res = d2 + np.tanh(r) * d1 + pot * p0
    ok = np.isfinite(res)
    return float(np.max(np.abs(res[ok]) / (1.0 + np.abs(p0[ok]))))


def wronskian_defect(s_sol: ModeSolution, c_sol: ModeSolution,
                     r: np.ndarray | None = None) -> float:
    """Max |cosh(r) (s' c - s c') - 1| over points where both are in float range."""
    if r is None:
        r = np.linspace(-s_sol.r_max, s_sol.r_max, 401)
    r = np.asarray(r, dtype=float)
    w = np.cosh(r) * (s_sol.dphi(r) * c_sol.phi(r) - s_sol.phi(r) * c_sol.dphi(r))
    ok = np.isfinite(w)
    if not ok.any():
        return math.inf
    return float(np.max(np.abs(w[ok] - 1.0)))


@dataclass(frozen=True)
class MonotoneReport:
    """Verdict of the growth-ratio check g(r)/cosh(delta r)."""

    status: str
    r: np.ndarray = field(repr=False)
    ratio: np.ndarray = field(repr=False)
    hypothesis_margin: float = math.nan

    @property
    def increasing(self) -> bool:
        return self.status == MONOTONE_INCREASING


def monotone_ratio_check(r: np.ndarray, u: np.ndarray, delta: float) -> MonotoneReport:
    """Check h = u / cosh(delta r) for strict increase on sampled data.

    The hypothesis u'' > delta^2 u is verified by central differences before
    any verdict on the conclusion; if it fails anywhere the report says so
    instead of judging monotonicity.  Data must start at r = 0 with a
    nonnegative initial slope.
    """
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    if r.ndim != 1 or r.shape != u.shape or len(r) < 5:
        raise ValueError("need matching 1-d arrays with at least 5 samples")
    if abs(r[0]) > 1e-12:
        raise ValueError(f"samples must start at r=0, got r[0]={r[0]}")
    du0 = (u[1] - u[0]) / (r[1] - r[0])
    if du0 < -1e-12 * max(1.0, abs(u[0])):
        raise ValueError(f"initial slope must be nonnegative, got {du0}")
    h = np.diff(r)
    if not np.allclose(h, h[0]):
        raise ValueError("samples must be uniformly spaced")
    step = h[0]
    d2 = (u[2:] - 2 * u[1:-1] + u[:-2]) / (step * step)
    margin = d2 - delta * delta * u[1:-1]
    ratio = u / np.cosh(delta * r)
    min_margin = float(np.min(margin))
    if min_margin <= 0.0:
        return MonotoneReport(HYPOTHESIS_NOT_SATISFIED, r, ratio, min_margin)
    status = MONOTONE_INCREASING if bool(np.all(np.diff(ratio) > 0.0)) else MONOTONE_FAILED
    return MonotoneReport(status, r, ratio, min_margin)


def monotone_ratio_check_solution(sol: ModeSolution, delta: float,
                                  n_points: int = 400) -> MonotoneReport:
    """Growth-ratio check for a solved mode, in log form so pinched collars work.

    The hypothesis is checked through the potential (u'' = Q u exactly along
    the solution), the ratio through log u - log cosh(delta r).
    """
    r = np.linspace(0.0, sol.r_max, n_points + 1)
    q = sol.ode.q_array(r)
    margin = float(np.min(q)) - delta * delta
    log_ratio = sol.right.log_u(r) - np.array([log_cosh(float(x)) for x in delta * r])
    ratio = np.exp(log_ratio - np.max(log_ratio[np.isfinite(log_ratio)]))
    if margin <= 0.0:
        return MonotoneReport(HYPOTHESIS_NOT_SATISFIED, r, ratio, margin)
    diffs = np.diff(log_ratio[1:])  # drop r=0 where odd data gives -inf
    status = MONOTONE_INCREASING if bool(np.all(diffs > 0.0)) else MONOTONE_FAILED
    return MonotoneReport(status, r, ratio, margin)


def t0_constant(geom: CollarGeometry, eps: float, eta: float) -> float:
    """Zero-mode inner-vs-band ratio constant at spectral gap eta (delta0 = sqrt(eta))."""
    if not geom.l_gamma < eps <= geom.margulis_eps0:
        raise ValueError(
            f"need l_gamma < eps <= margulis constant, got eps={eps}, "
            f"l_gamma={geom.l_gamma}, eps0={geom.margulis_eps0}"
        )
    if not eta > 0.0:
        raise ValueError(f"spectral gap eta must be positive, got {eta}")
    delta0 = math.sqrt(eta)
    l_eps = geom.boundary_radius(eps)
    l_one = geom.boundary_radius(1.0)
    num = math.sinh(2.0 * delta0 * l_eps) + 2.0 * delta0 * l_eps
    den = (
        math.sinh(2.0 * delta0 * l_one)
        - math.sinh(2.0 * delta0 * l_eps)
        + 2.0 * delta0 * (l_one - l_eps)
    )
    return math.sqrt(num / den)


def t1_constant(geom: CollarGeometry, eps: float) -> float:
    """Nonzero-mode inner-vs-band ratio constant; the eta = 1 instance of t0."""
    return t0_constant(geom, eps, 1.0)


def t2_constant(geom: CollarGeometry, eps: float, eps0: float | None = None) -> float:
    """Mid-band ratio constant sqrt((L_eps0 - L_eps) / (L_1 - L_eps0)).

    Asymptotically independent of the core length once it is small against eps.
    """
    if eps0 is None:
        eps0 = geom.margulis_eps0
    if not geom.l_gamma < eps < eps0 < 1.0:
        raise ValueError(
            f"need l_gamma < eps < eps0 < 1, got l_gamma={geom.l_gamma}, "
            f"eps={eps}, eps0={eps0}"
        )
    l_eps = geom.boundary_radius(eps)
    l_eps0 = geom.boundary_radius(eps0)
    l_one = geom.boundary_radius(1.0)
    return math.sqrt((l_eps0 - l_eps) / (l_one - l_eps0))


@dataclass(frozen=True)
class LemmaCheckRow:
    """One measured mass-ratio inequality against its formula constant."""

    generator: str
    inequality: str
    measured: float
    constant: float
    passed: bool


@dataclass(frozen=True)
class CollarLemmaReport:
    geom: CollarGeometry
    param: SpectralParam
    eps: float
    eps0: float
    eta: float | None
    rows: tuple[LemmaCheckRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)


def _ratio_from_logs(log_num: float, log_den: float) -> float:
    if log_den == -math.inf:
        raise ValueError("band mass vanished; ratio undefined")
    half = 0.5 * (log_num - log_den)
    return 0.0 if half < -700.0 else math.exp(half)


def verify_collar_lemma(
    geom: CollarGeometry,
    param: SpectralParam,
    j_max: int,
    eps: float,
    eta: float | None = None,
    *,
    eps0: float | None = None,
    mixture_seed: int | None = 7,
    n_mixtures: int = 2,
    rtol: float = 1e-12,
) -> CollarLemmaReport:
    """Measure the generator mass-ratio inequalities against their constants.

    For every generator pair (odd and even, j <= j_max) this checks
    * inner vs band ratio against the nonzero-mode constant (j >= 1),
    * mid-band vs outer-band ratio against the band constant (all j),
    * for ``eta`` given, the zero-mode inner vs band ratio against the
      eta-dependent constant (needs lambda <= 1/4 - eta).

    Random coefficient mixtures of the two generators (seeded) are spot
    checked as well; by parity their band masses are the coefficient-weighted
    sums of the generator masses.
    """
    if eps0 is None:
        eps0 = geom.margulis_eps0
    if eta is not None:
        if not eta > 0.0:
            raise ValueError(f"eta must be positive, got {eta}")
        if param.eigenvalue > 0.25 - eta + 1e-12:
            raise ValueError(
                f"zero-mode branch needs lambda <= 1/4 - eta, got "
                f"lambda={param.eigenvalue}, eta={eta}"
            )
    t1 = t1_constant(geom, eps)
    t2 = t2_constant(geom, eps, eps0)
    t0 = t0_constant(geom, eps, eta) if eta is not None else None

    rows: list[LemmaCheckRow] = []
    rng = np.random.default_rng(mixture_seed) if mixture_seed is not None else None

    for j in range(j_max + 1):
        ode = ModeODE(geom, param, j)
        masses: dict[str, dict[str, float]] = {}
        for kind in ("s", "c"):
            sol = solve_mode(ode, kind, rtol=rtol)
            name = f"{kind}{j}"
            masses[kind] = {
                "inner": sol.mass_log_band(geom.l_gamma, eps),
                "band": sol.mass_log_band(eps, 1.0),
                "mid": sol.mass_log_band(eps, eps0),
                "outer": sol.mass_log_band(eps0, 1.0),
            }
            m = masses[kind]
            if j >= 1:
                ratio = _ratio_from_logs(m["inner"], m["band"])
                rows.append(
                    LemmaCheckRow(name, "inner<=T1*band", ratio, t1, ratio <= t1)
                )
            ratio = _ratio_from_logs(m["mid"], m["outer"])
            rows.append(LemmaCheckRow(name, "mid<=T2*outer", ratio, t2, ratio <= t2))
            if j == 0 and t0 is not None:
                ratio = _ratio_from_logs(m["inner"], m["band"])
                rows.append(
                    LemmaCheckRow(name, "inner<=T0*band", ratio, t0, ratio <= t0)
                )
        if rng is not None:
            for _ in range(n_mixtures):
                a, b = rng.uniform(0.1, 1.0, size=2)
                la, lb = 2.0 * math.log(a), 2.0 * math.log(b)
                mix = {
                    key: np.logaddexp(la + masses["s"][key], lb + masses["c"][key])
                    for key in ("inner", "band", "mid", "outer")
                }
                name = f"mix{j}[{a:.3f}s+{b:.3f}c]"
                if j >= 1:
                    ratio = _ratio_from_logs(mix["inner"], mix["band"])
                    rows.append(
                        LemmaCheckRow(name, "inner<=T1*band", ratio, t1, ratio <= t1)
                    )
                elif t0 is not None:
                    ratio = _ratio_from_logs(mix["inner"], mix["band"])
                    rows.append(
                        LemmaCheckRow(name, "inner<=T0*band", ratio, t0, ratio <= t0)
                    )
                ratio = _ratio_from_logs(mix["mid"], mix["outer"])
                rows.append(LemmaCheckRow(name, "mid<=T2*outer", ratio, t2, ratio <= t2))

    return CollarLemmaReport(geom, param, eps, eps0, eta, tuple(rows))


@dataclass(frozen=True)
class ModeCoefficients:
    """Coefficients of one angular mode: cos and sin parts in the (odd, even) basis.

    The cos-coefficient function is ``cos_s * s_j + cos_c * c_j`` and likewise
    for sin.  The zero mode has no sin part.
    """

    j: int
    cos_s: float = 0.0
    cos_c: float = 0.0
    sin_s: float = 0.0
    sin_c: float = 0.0

    def __post_init__(self) -> None:
        if self.j < 0:
            raise ValueError(f"mode index must be nonnegative, got {self.j}")
        if self.j == 0 and (self.sin_s != 0.0 or self.sin_c != 0.0):
            raise ValueError("the zero mode has no sin component")


class CollarField:
    """Assembled field f(r, theta) on a collar, with its angular decomposition.

    ``a[j]``/``b[j]`` are the cos/sin coefficient functions on the radial
    grid; ``values`` the assembled grid.  The zero mode ``a[0]`` and the rest
    of the series are exposed separately because their interplay drives the
    sign analysis on parallel curves.
    """

    def __init__(self, geom: CollarGeometry, param: SpectralParam,
                 r_grid: np.ndarray, theta_grid: np.ndarray,
                 a: dict[int, np.ndarray], b: dict[int, np.ndarray]):
        self.geom = geom
        self.param = param
        self.r_grid = r_grid
        self.theta_grid = theta_grid
        self.a = a
        self.b = b
        values = np.zeros((len(r_grid), len(theta_grid)))
        for j, coef in a.items():
            values += coef[:, None] * np.cos(j * theta_grid)[None, :]
        for j, coef in b.items():
            if j > 0:
                values += coef[:, None] * np.sin(j * theta_grid)[None, :]
        self.values = values

    @property
    def r_max(self) -> float:
        return float(self.r_grid[-1])

    def zero_mode(self) -> np.ndarray:
        return self.a.get(0, np.zeros_like(self.r_grid))

    def nonzero_part(self) -> np.ndarray:
        return self.values - self.zero_mode()[:, None]

    def boundary_trace(self, side: int) -> np.ndarray:
        """Field values along the boundary circle r = +-r_max."""
        if side not in (1, -1):
            raise ValueError("side must be +1 or -1")
        return self.values[-1] if side == 1 else self.values[0]

    def boundary_sup(self) -> float:
        return float(
            max(np.max(np.abs(self.boundary_trace(1))), np.max(np.abs(self.boundary_trace(-1))))
        )

    def fourier_coefficient(self, side: int, j: int, kind: str = "cos") -> float:
        """Angular Fourier coefficient of the boundary trace (uniform-grid rule)."""
        trace = self.boundary_trace(side)
        n = len(self.theta_grid)
        if kind == "cos":
            basis = np.cos(j * self.theta_grid)
            norm = TWO_PI if j == 0 else math.pi
        elif kind == "sin":
            basis = np.sin(j * self.theta_grid)
            norm = math.pi
        else:
            raise ValueError("kind must be 'cos' or 'sin'")
        return float(np.dot(trace, basis) * (TWO_PI / n) / norm)

    def sup_nonzero_inner(self, eps: float) -> float:
        """Sup of |f - zero mode| over the inner collar of boundary length eps."""
        l_eps = self.geom.boundary_radius(eps)
        rows = np.abs(self.r_grid) <= l_eps + 1e-12
        if not rows.any():
            raise ValueError(f"no grid rows inside the collar of boundary length {eps}")
        return float(np.max(np.abs(self.nonzero_part()[rows])))

    def mass_sq_grid(self) -> float:
        """Grid quadrature of the squared norm with the collar area weight."""
        weight = self.geom.l * np.cosh(self.r_grid)
        dtheta = TWO_PI / len(self.theta_grid)
        per_r = (self.values**2).sum(axis=1) * dtheta
        return float(np.trapezoid(per_r * weight, self.r_grid))

    def mass_sq_coefficients(self) -> float:
        """Same norm from the angular coefficients (Parseval form)."""
        weight = self.geom.l * np.cosh(self.r_grid)
        total = np.zeros_like(self.r_grid)
        for j, coef in self.a.items():
            total += (TWO_PI if j == 0 else math.pi) * coef**2
        for j, coef in self.b.items():
            if j > 0:
                total += math.pi * coef**2
        return float(np.trapezoid(total * weight, self.r_grid))

    def scaled(self, factor: float) -> "CollarField":
        """New field with every coefficient (hence the grid) multiplied by factor."""
        return CollarField(
            self.geom,
            self.param,
            self.r_grid,
            self.theta_grid,
            {j: factor * c for j, c in self.a.items()},
            {j: factor * c for j, c in self.b.items()},
        )

    def write_text(self, path: str) -> None:
        """Plain-text dump: grid header lines then one row of values per radius."""
        with open(path, "w") as fh:
            fh.write("# collar field grid dump\n")
            fh.write("# r: " + " ".join(repr(float(x)) for x in self.r_grid) + "\n")
            fh.write("# theta: " + " ".join(repr(float(x)) for x in self.theta_grid) + "\n")
            for row in self.values:
                fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def synthesize_field(
    geom: CollarGeometry,
    param: SpectralParam,
    modes: Sequence[ModeCoefficients],
    *,
    n_r: int = 2048,
    n_theta: int = 256,
    boundary_length: float = 1.0,
    scale: str = "raw",
    solutions: Mapping[tuple[str, int], ModeSolution] | None = None,
) -> CollarField:
    """Assemble a field from mode coefficients in the (odd, even) solution basis.

    ``scale="raw"`` multiplies the solutions themselves; ``scale="boundary"``
    multiplies boundary-normalized shapes (value 1 at the +boundary), which
    stays in float range on strongly pinched collars.
    """
    if scale not in ("raw", "boundary"):
        raise ValueError(f"scale must be 'raw' or 'boundary', got {scale!r}")
    r_max = geom.boundary_radius(boundary_length)
    r_grid = np.linspace(-r_max, r_max, n_r)
    theta_grid = np.arange(n_theta) * (TWO_PI / n_theta)

    cache: dict[tuple[str, int], ModeSolution] = dict(solutions or {})

    def shape(kind: str, j: int) -> np.ndarray:
        key = (kind, j)
        if key not in cache:
            cache[key] = solve_mode(ModeODE(geom, param, j), kind,
                                    boundary_length=boundary_length)
        sol = cache[key]
        if scale == "raw":
            vals = sol.phi(r_grid)
            if not np.all(np.isfinite(vals)):
                raise OverflowError(
                    f"mode ({kind}, {j}) exceeds float range; use scale='boundary'"
                )
            return vals
        log_ref = float(sol.log_abs_phi(np.array([r_max]))[0])
        log_vals = sol.log_abs_phi(r_grid) - log_ref
        return sol.sign_at(r_grid) * np.exp(np.minimum(log_vals, _EXP_MAX))

    a: dict[int, np.ndarray] = {}
    b: dict[int, np.ndarray] = {}
    for mode in modes:
        acc_a = np.zeros_like(r_grid)
        if mode.cos_s:
            acc_a = acc_a + mode.cos_s * shape("s", mode.j)
        if mode.cos_c:
            acc_a = acc_a + mode.cos_c * shape("c", mode.j)
        a[mode.j] = a.get(mode.j, 0.0) + acc_a
        if mode.j > 0 and (mode.sin_s or mode.sin_c):
            acc_b = np.zeros_like(r_grid)
            if mode.sin_s:
                acc_b = acc_b + mode.sin_s * shape("s", mode.j)
            if mode.sin_c:
                acc_b = acc_b + mode.sin_c * shape("c", mode.j)
            b[mode.j] = b.get(mode.j, 0.0) + acc_b
    return CollarField(geom, param, r_grid, theta_grid, a, b)


def geometric_tail_factor(eps: float) -> float:
    """Closed form sqrt(eps)/(1 - eps) of sum_{j>=1} eps^j eps^{-1/2}."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return math.sqrt(eps) / (1.0 - eps)


def _tail_comparison_sum(geom: CollarGeometry, eps: float, r_max: float,
                         j_cap: int = 200) -> float:
    """sum_j cosh(j L_eps)/sqrt(cosh L_eps) * sqrt(cosh L_1)/cosh(j L_1)."""
    l_eps = geom.boundary_radius(eps)
    half_log = 0.5 * (log_cosh(r_max) - log_cosh(l_eps))
    total = 0.0
    for j in range(1, j_cap + 1):
        log_term = log_cosh(j * l_eps) - log_cosh(j * r_max) + half_log
        term = math.exp(max(log_term, -745.0))
        total += term
        if term < 1e-18 * total:
            break
    return total


@dataclass(frozen=True)
class TailBoundReport:
    """Uniform bound on the nonzero angular part over the inner collar."""

    eps: float
    t_boundary: float
    boundary_sup: float
    sup_nonzero: float
    k_prime: float
    bound: float
    passed: bool


def tail_bound_check(field: CollarField, eps: float, t_boundary: float) -> TailBoundReport:
    """Check sup |f - zero mode| over the inner collar against the geometric bound.

    The field must obey the boundary smallness hypothesis (sup at most
    t_boundary/4).  The comparison constant is measured from the mode-sum
    comparison rather than fixed a priori, and the bound is
    2 * t_boundary * K' * sqrt(eps)/(1 - eps).
    """
    if not field.geom.l_gamma < eps < 1.0:
        raise ValueError(f"eps must lie in (l_gamma, 1), got {eps}")
    boundary_sup = field.boundary_sup()
    if boundary_sup > 0.25 * t_boundary * (1.0 + 1e-9):
        raise ValueError(
            f"boundary hypothesis violated: sup={boundary_sup} exceeds t/4={0.25 * t_boundary}"
        )
    sup_nonzero = field.sup_nonzero_inner(eps)
    geo = geometric_tail_factor(eps)
    k_prime = _tail_comparison_sum(field.geom, eps, field.r_max) / geo
    bound = 2.0 * t_boundary * k_prime * geo
    return TailBoundReport(
        eps, t_boundary, boundary_sup, sup_nonzero, k_prime, bound,
        sup_nonzero <= bound * (1.0 + 1e-12),
    )
