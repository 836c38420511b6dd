"""Verification suites: named checks over default or configured grids.

Each suite returns a ``SuiteResult`` holding one line per checked inequality
(the line names the inequality and the measured numbers), CSV tables, and a
JSON-ready summary.  The CLI renders these; the acceptance tests drive the
same code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from . import cusp_mass, degeneration, nodal
from .collar_modes import (
    MONOTONE_INCREASING,
    CollarField,
    ModeCoefficients,
    ModeODE,
    monotone_ratio_check_solution,
    solve_mode,
    synthesize_field,
    t0_constant,
    t1_constant,
    t2_constant,
    tail_bound_check,
    verify_collar_lemma,
)
from .geometry import CollarGeometry
from .specfun import SpectralParam

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CheckLine:
    """One verified inequality: its name, verdict, and the numbers involved."""

    name: str
    passed: bool
    detail: str


@dataclass
class SuiteResult:
    suite: str
    checks: list[CheckLine] = field(default_factory=list)
    tables: dict[str, tuple[tuple[str, ...], list[tuple]]] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str) -> None:
        self.checks.append(CheckLine(name, bool(passed), detail))

    def extend(self, other: "SuiteResult") -> None:
        self.checks.extend(other.checks)
        self.tables.update(other.tables)
        self.summary[other.suite] = other.summary


DEFAULT_B_GRID = (4 * math.pi, 8 * math.pi, 16 * math.pi, 32 * math.pi)
DEFAULT_RESIDUAL_PAIRS = tuple(
    (s, b)
    for s in (0.05, 0.15, 0.25, 0.35, 0.45)
    for b in (3 * math.pi, 10 * math.pi, 40 * math.pi)
)


def verify_cusp(
    b_grid: Sequence[float] = DEFAULT_B_GRID,
    n_values: Sequence[int] = cusp_mass.DEFAULT_N_GRID,
    s_values: Sequence[float] = cusp_mass.DEFAULT_S_GRID,
    residual_pairs: Sequence[tuple[float, float]] = DEFAULT_RESIDUAL_PAIRS,
) -> SuiteResult:
    """Cusp-side checks: residual tail identity, tail-ratio decay, n-trend."""
    result = SuiteResult("cusp")

    worst = 0.0
    for s, b in residual_pairs:
        tail, _ = quad(lambda y: y ** (2 * s - 2), b, np.inf, epsrel=1e-13)
        band, _ = quad(lambda y: y ** (2 * s - 2), TWO_PI, b, epsrel=1e-13)
        formula = cusp_mass.residual_tail_ratio_sq(s, b)
        worst = max(worst, abs(tail / band - formula))
    result.add(
        "residual tail identity: |quadrature ratio - closed form| < 1e-10",
        worst < 1e-10,
        f"max deviation {worst:.3e} over {len(residual_pairs)} (s, b) pairs",
    )

    sweep = cusp_mass.khat_sweep(b_grid, n_values, s_values)
    khat = [v for _, v in sweep.khat]
    decreasing = all(b < a for a, b in zip(khat, khat[1:]))
    result.add(
        "tail-ratio constant strictly decreasing in the split height",
        decreasing,
        "K^(b) = " + ", ".join(f"{v:.3e}" for v in khat),
    )
    result.add(
        "tail-ratio constant decays: K^(b_max) < 0.1 K^(b_min)",
        khat[-1] < 0.1 * khat[0],
        f"K^({b_grid[-1]:.4g}) = {khat[-1]:.3e} vs 0.1*K^({b_grid[0]:.4g}) = {0.1 * khat[0]:.3e}",
    )

    param = SpectralParam(1.0)
    ratios = [cusp_mass.cuspidal_tail_ratio(param, n, b_grid[0]) for n in n_values]
    result.add(
        "tail ratio decreasing in the mode index at fixed split height",
        all(b < a for a, b in zip(ratios, ratios[1:])),
        "ratios(n) = " + ", ".join(f"{v:.3e}" for v in ratios),
    )

    result.tables["cusp_tail_ratio"] = (cusp_mass.TailRatioSweep.COLUMNS, list(sweep.rows))
    result.summary = {"khat": {repr(b): v for b, v in sweep.khat}}
    return result


DEFAULT_CONSTANT_EPS_GRID = (0.3, 0.1, 0.03, 0.01)


def constants_sweep(
    eps_grid: Sequence[float],
    eta: float,
    l_gamma: float,
    eps0: float = 0.5,
) -> list[tuple[float, float, float, float]]:
    """Rows (eps, t0, t1, t2) of the ratio constants along a threshold grid."""
    geom = CollarGeometry(l_gamma, margulis_eps0=eps0)
    rows = []
    for eps in eps_grid:
        rows.append(
            (
                eps,
                t0_constant(geom, eps, eta),
                t1_constant(geom, eps),
                t2_constant(geom, eps, eps0),
            )
        )
    return rows


def verify_collar(
    lam: float = 0.16,
    l_gammas: Sequence[float] = (1e-2, 1e-3),
    eps: float = 0.1,
    eta: float = 0.09,
    j_max: int = 4,
    eps_grid: Sequence[float] = DEFAULT_CONSTANT_EPS_GRID,
) -> SuiteResult:
    """Collar-side checks: generator mass ratios, constants decay, growth ratios."""
    result = SuiteResult("collar")
    param = SpectralParam.cuspidal(lam)

    table_rows = []
    for l_gamma in l_gammas:
        geom = CollarGeometry(l_gamma)
        report = verify_collar_lemma(geom, param, j_max, eps, eta)
        for row in report.rows:
            table_rows.append(
                (l_gamma, lam, row.generator, row.inequality, row.measured,
                 row.constant, row.passed)
            )
            result.add(
                f"collar mass ratio {row.inequality} [{row.generator}, l_gamma={l_gamma:g}]",
                row.passed,
                f"measured {row.measured:.3e} vs constant {row.constant:.3e}",
            )

    sweep_lg = min(min(l_gammas), min(eps_grid) / 10.0)
    rows = constants_sweep(eps_grid, eta, sweep_lg)
    t0s = [r[1] for r in rows]
    t1s = [r[2] for r in rows]
    result.add(
        "zero-mode constant strictly decreasing along the threshold grid",
        all(b < a for a, b in zip(t0s, t0s[1:])),
        "T0 = " + ", ".join(f"{v:.4f}" for v in t0s),
    )
    result.add(
        "nonzero-mode constant strictly decreasing along the threshold grid",
        all(b < a for a, b in zip(t1s, t1s[1:])),
        "T1 = " + ", ".join(f"{v:.4f}" for v in t1s),
    )

    geom_a = CollarGeometry(min(l_gammas))
    geom_b = CollarGeometry(min(l_gammas) / 2.0)
    t2a = t2_constant(geom_a, eps, 0.5)
    t2b = t2_constant(geom_b, eps, 0.5)
    rel = abs(t2b / t2a - 1.0)
    result.add(
        "band constant varies < 1% when the core length is halved",
        rel < 0.01,
        f"T2 = {t2a:.6f} vs {t2b:.6f} (rel change {rel:.2e})",
    )

    for check_lam, delta in ((0.16, 0.3), (0.2, 0.2), (0.0, 0.5)):
        check_param = SpectralParam.cuspidal(check_lam)
        for j in (0, 1, 2, 4):
            for kind in ("s", "c"):
                sol = solve_mode(ModeODE(CollarGeometry(1e-2), check_param, j), kind)
                rep = monotone_ratio_check_solution(sol, delta)
                result.add(
                    f"growth ratio increasing [lambda={check_lam}, delta={delta}, {kind}{j}]",
                    rep.status == MONOTONE_INCREASING,
                    f"status: {rep.status} (hypothesis margin {rep.hypothesis_margin:.3e})",
                )

    result.tables["collar_lemma"] = (
        ("l_gamma", "lambda", "generator", "inequality", "measured", "constant", "pass"),
        table_rows,
    )
    result.tables["collar_constants"] = (("eps", "t0", "t1", "t2"), rows)
    result.summary = {"t0": t0s, "t1": t1s, "t2_l_independence_rel_change": rel}
    return result


DEFAULT_TAIL_MODES = (
    ModeCoefficients(0, cos_c=0.6),
    ModeCoefficients(1, cos_s=0.7, sin_c=0.4),
    ModeCoefficients(2, cos_c=0.5, sin_s=0.3),
    ModeCoefficients(3, cos_s=0.25, cos_c=0.2),
)


def make_boundary_scaled_field(
    geom: CollarGeometry,
    param: SpectralParam,
    t_boundary: float,
    modes: Sequence[ModeCoefficients] = DEFAULT_TAIL_MODES,
    *,
    n_r: int = 1025,
    n_theta: int = 128,
) -> CollarField:
    """Synthesize a field and rescale it so its boundary sup equals t/4."""
    fld = synthesize_field(
        geom, param, modes, n_r=n_r, n_theta=n_theta, scale="boundary"
    )
    return fld.scaled(0.25 * t_boundary / fld.boundary_sup())


def verify_tail(
    l_gammas: Sequence[float] = (1e-2, 1e-3, 1e-4),
    eps_grid: Sequence[float] = (0.25, 0.1, 0.04),
    lam: float = 0.2,
    t_boundary: float = 1.0,
) -> SuiteResult:
    """Nonzero-part uniform bound on inner collars, and the constant's stability."""
    result = SuiteResult("tail")
    param = SpectralParam.cuspidal(lam)

    eps_geo = 0.25
    geo = math.sqrt(eps_geo) / (1.0 - eps_geo)
    result.add(
        "geometric sum identity at eps=1/4 equals 2/3",
        abs(geo - 2.0 / 3.0) < 1e-15,
        f"sqrt(eps)/(1-eps) = {geo!r}",
    )

    r = np.linspace(0.2, 6.0, 200)
    mono_ok = True
    for j in (1, 2, 3, 5):
        vals = np.cosh(j * r) / np.sqrt(np.cosh(r))
        mono_ok = mono_ok and bool(np.all(np.diff(vals) > 0.0))
    result.add(
        "cosh(j r)/sqrt(cosh r) strictly increasing for j >= 1",
        mono_ok,
        "checked j in {1,2,3,5} on a uniform grid",
    )

    kprimes: dict[float, list[float]] = {e: [] for e in eps_grid}
    rows = []
    for l_gamma in l_gammas:
        geom = CollarGeometry(l_gamma)
        fld = make_boundary_scaled_field(geom, param, t_boundary)
        for eps in eps_grid:
            rep = tail_bound_check(fld, eps, t_boundary)
            kprimes[eps].append(rep.k_prime)
            rows.append(
                (l_gamma, eps, rep.boundary_sup, rep.sup_nonzero, rep.k_prime,
                 rep.bound, rep.passed)
            )
            result.add(
                f"nonzero part bounded on inner collar [l_gamma={l_gamma:g}, eps={eps}]",
                rep.passed,
                f"sup {rep.sup_nonzero:.3e} vs bound {rep.bound:.3e} (K'={rep.k_prime:.3f})",
            )
    for eps in eps_grid:
        ks = kprimes[eps]
        spread = max(ks) / min(ks)
        result.add(
            f"comparison constant stable across core lengths [eps={eps}]",
            spread < 2.0,
            f"K' range [{min(ks):.3f}, {max(ks):.3f}] (spread {spread:.3f}x)",
        )

    result.tables["tail_bound"] = (
        ("l_gamma", "eps", "boundary_sup", "sup_nonzero", "k_prime", "bound", "pass"),
        rows,
    )
    result.summary = {"k_prime": {repr(e): v for e, v in kprimes.items()}}
    return result


def synthetic_decomposition_corpus() -> list[nodal.NodalDecomposition]:
    """Deterministic hypothesis-satisfying decompositions (once-punctured sphere)."""
    corpus = []
    for chi_ambient in (0, -1):
        for chi_graph_edges in (0, 1, 2):
            for signs in (("-",), ("+", "-"), ("+", "-", "-"), ("+", "+", "-", "-")):
                comps = [nodal.NodalComponent(nodal.AMBIENT, chi_ambient)]
                comps += [
                    nodal.NodalComponent(s, -(i % 2 + 1)) for i, s in enumerate(signs)
                ]
                corpus.append(
                    nodal.NodalDecomposition(
                        graph_vertices=2,
                        graph_edges=2 + chi_graph_edges,
                        components=tuple(comps),
                        surface_chi=1,
                        punctures_in_zero_set=True,
                    )
                )
    return corpus


def _constant_angular_field(radial: np.ndarray, j: int, r_max: float,
                            n_theta: int = 64) -> CollarField:
    # Core length chosen so the unit boundary sits exactly at r_max.
    geom = CollarGeometry(1.0 / math.cosh(r_max))
    r_grid = np.linspace(-r_max, r_max, len(radial))
    theta = np.arange(n_theta) * (TWO_PI / n_theta)
    a = {j: np.asarray(radial, dtype=float)}
    return CollarField(geom, SpectralParam(1.0), r_grid, theta, a, {})


def verify_nodal(input_text: str | None = None) -> SuiteResult:
    """Euler accounting, crossing verdicts, extraction sanity, sign scans."""
    result = SuiteResult("nodal")

    if input_text is not None:
        decomp = nodal.loads_decomposition(input_text)
        es = nodal.euler_sum(decomp)
        verdict = nodal.crossing_verdict(decomp)
        result.add(
            "input decomposition verdict",
            verdict == nodal.CROSSING_FORCED,
            f"euler sum {es.total} vs surface {decomp.surface_chi}: {verdict}",
        )
        result.summary["input_verdict"] = verdict
        return result

    corpus = synthetic_decomposition_corpus()
    verdicts = [nodal.crossing_verdict(d) for d in corpus]
    forced = sum(v == nodal.CROSSING_FORCED for v in verdicts)
    result.add(
        "hypothesis-satisfying corpus forces crossings (100%)",
        forced == len(corpus) and len(corpus) >= 20,
        f"{forced}/{len(corpus)} crossing-forced",
    )

    disk = nodal.NodalDecomposition(
        2, 2,
        (nodal.NodalComponent("F", 0), nodal.NodalComponent("+", 1)),
        surface_chi=1,
        punctures_in_zero_set=True,
    )
    result.add(
        "positive-characteristic domain escapes the contradiction",
        nodal.crossing_verdict(disk) == nodal.CONSISTENT,
        "disk-like signed component gives verdict 'consistent'",
    )

    # Extraction sanity on three cylinder fields.
    n_r, n_theta = 161, 64
    r_max = 2.0
    ones = np.ones(n_r)
    fld_cos = _constant_angular_field(ones, 1, r_max, n_theta)
    ext = nodal.nodal_graph_extract(fld_cos)
    zchis = sorted(z.chi for z in ext.zero_components)
    rchis = sorted(rc.chi for rc in ext.region_components)
    result.add(
        "pure angular mode: two zero arcs (chi 1), two strips (chi -1), additive total 0",
        zchis == [1, 1] and rchis == [-1, -1] and ext.additive_total == 0,
        f"zero chis {zchis}, region chis {rchis}, total {ext.additive_total}",
    )

    r_grid = np.linspace(-r_max, r_max, n_r)
    fld_rad = _constant_angular_field(r_grid**2 - 1.0, 0, r_max, n_theta)
    ext = nodal.nodal_graph_extract(fld_rad)
    zchis = sorted(z.chi for z in ext.zero_components)
    rchis = sorted(rc.chi for rc in ext.region_components)
    result.add(
        "radial sign change: two zero circles (chi 0), three annuli (chi 0), additive total 0",
        zchis == [0, 0] and rchis == [0, 0, 0] and ext.additive_total == 0,
        f"zero chis {zchis}, region chis {rchis}, total {ext.additive_total}",
    )

    fld_mix = _constant_angular_field(np.sinh(r_grid), 1, r_max, n_theta)
    ext = nodal.nodal_graph_extract(fld_mix)
    result.add(
        "odd radial times angular mode: additive total 0 after saddle resolution",
        ext.additive_total == 0,
        f"{len(ext.zero_components)} zero components, "
        f"{len(ext.region_components)} regions, total {ext.additive_total}",
    )

    # Sign scans: constant field, pure angular mode, dominance soundness.
    fld_const = _constant_angular_field(ones, 0, r_max, n_theta)
    traces = nodal.sign_scan(fld_const, [0.0, 1.0, -1.0])
    result.add(
        "constant field: every parallel curve has constant sign",
        all(t.constant_sign for t in traces),
        f"{len(traces)} curves scanned",
    )
    traces = nodal.sign_scan(fld_cos, [0.0, 1.0])
    result.add(
        "pure angular mode: no parallel curve has constant sign",
        not any(t.constant_sign for t in traces),
        "sign changes along every scanned curve",
    )
    a = {0: 1.5 * ones, 1: np.asarray(np.abs(r_grid))}
    fld_dom = CollarField(fld_cos.geom, SpectralParam(1.0), r_grid,
                          fld_cos.theta_grid, a, {})
    traces = nodal.sign_scan(fld_dom, list(r_grid[:: n_r // 16]))
    sound = all(t.constant_sign for t in traces if t.zero_mode_dominant)
    result.add(
        "zero-mode dominance implies constant sign on the curve (soundness)",
        sound and any(t.zero_mode_dominant for t in traces),
        f"{sum(t.zero_mode_dominant for t in traces)} dominant curves, all constant-sign",
    )

    result.summary["corpus_size"] = len(corpus)
    return result


def verify_degeneration() -> SuiteResult:
    """Pinching-limit errors and the dichotomy classifier."""
    result = SuiteResult("degeneration")

    ls = (1e-1, 1e-2, 1e-3)
    family = degeneration.PinchFamily(
        tuple(TWO_PI * l for l in ls), (0.1, 0.1, 0.1)
    )
    rows = degeneration.metric_convergence_sweep(family, [0.0])
    thresholds = (1e-2, 1e-4, 1e-6)
    for row, thr, l in zip(rows, thresholds, ls):
        result.add(
            f"metric-entry error below {thr:g} at l={l:g}",
            row.gtt_err < thr,
            f"gtt_err {row.gtt_err:.3e} (coeff_err {row.coeff_err:.3e})",
        )
    ratios = [a.gtt_err / b.gtt_err for a, b in zip(rows, rows[1:])]
    result.add(
        "metric error shrinks quadratically (decade ratio near 100)",
        all(50.0 < q < 150.0 for q in ratios),
        "decade ratios " + ", ".join(f"{q:.1f}" for q in ratios),
    )

    prow = degeneration.potential_convergence_sweep(
        degeneration.PinchFamily((TWO_PI * 1e-3,), (0.1,)), 1, [0.0]
    )[0]
    result.add(
        "mode potential reaches pi^2 to 1e-3 relative at l=1e-3",
        prow.rel_err < 1e-3 and abs(prow.limit - math.pi**2) < 1e-12,
        f"potential {prow.potential:.8f} vs pi^2 (rel err {prow.rel_err:.3e})",
    )

    masses_case1 = {0.1: [0.9] * 6, 0.3: [0.9] * 6}
    rep1 = degeneration.classify_dichotomy(masses_case1)
    result.add(
        "constant thick masses classify as persistent (case 1)",
        rep1.case == degeneration.CASE1 and rep1.witness_value == 0.9,
        f"case {rep1.case}, witness {rep1.witness_value}",
    )
    masses_case2 = {0.1: [1.0 / m for m in range(1, 9)]}
    rep2 = degeneration.classify_dichotomy(masses_case2)
    k_ok = (
        rep2.case == degeneration.CASE2
        and rep2.k_nondecreasing
        and abs(rep2.k_values[-1] - math.sqrt(8.0)) < 1e-12
    )
    result.add(
        "vanishing thick masses classify as case 2 with diverging renormalizers",
        k_ok,
        f"K_m = {[round(k, 4) for k in rep2.k_values]}",
    )

    # Pipeline family: even zero modes at eigenvalues approaching 1/4 spread
    # their mass over the whole collar, so every fixed thick band loses mass.
    schedule = tuple(10.0 ** (-k) for k in range(2, 9))
    eps_grid = (0.3, 0.1)
    table: dict[float, list[float]] = {e: [] for e in eps_grid}
    for l_gamma in schedule:
        geom = CollarGeometry(l_gamma)
        param = SpectralParam.cuspidal(0.25 * (1.0 - l_gamma))
        sol = solve_mode(ModeODE(geom, param, 0), "c")
        total = sol.mass_log_band(l_gamma, 1.0)
        for eps in eps_grid:
            thick = sol.mass_log_band(eps, 1.0)
            table[eps].append(math.exp(thick - total))
    rep3 = degeneration.classify_dichotomy(table, delta=0.5, renorm_eps=0.1)
    result.add(
        "pinched zero-mode family classifies as case 2 with growing renormalizers",
        rep3.case == degeneration.CASE2 and rep3.k_nondecreasing,
        f"thick fractions at eps=0.1: {[round(v, 4) for v in table[0.1]]}",
    )

    agg = degeneration.aggregate_mass_bounds(
        [
            degeneration.RegionBound("cusp-1", "cusp", 0.2),
            degeneration.RegionBound("collar-1", "collar", 0.65),
        ],
        eps=0.1,
    )
    result.add(
        "aggregate bound takes the max constant and lower-bounds the thick mass",
        abs(agg.combined_constant - 0.65) < 1e-15
        and abs(agg.thick_mass_lower - 1.0 / math.sqrt(1.0 + 0.65**2)) < 1e-15,
        f"combined {agg.combined_constant}, thick lower bound {agg.thick_mass_lower:.6f}",
    )
    empty = degeneration.aggregate_mass_bounds([], eps=0.1)
    result.add(
        "no thin regions: thick mass is the total mass",
        empty.thick_mass_lower == 1.0,
        "combined constant 0 gives lower bound 1",
    )

    result.summary = {
        "gtt_errors": [row.gtt_err for row in rows],
        "thick_fractions": {repr(e): v for e, v in table.items()},
    }
    return result


def verify_all() -> SuiteResult:
    result = SuiteResult("all")
    for sub in (verify_cusp(), verify_collar(), verify_tail(), verify_nodal(),
                verify_degeneration()):
        result.extend(sub)
    return result
