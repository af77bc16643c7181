"""Reproduction drivers: optimizer tables, filter-threshold scans, appendix sweeps."""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass, field
from math import sqrt
from pathlib import Path

import numpy as np

from . import svg
from .bell import DEFAULT_RESTARTS, DEFAULT_SWEEPS, DEFAULT_TOL, CoefficientTensor, get_inequality, optimize_bell
from .criteria import horodecki_m
from .errors import ArgumentError
from .filters import FilterMode, apply_filter, chsh_filter_threshold, symmetric_filtered_reduced, uniform_filters
from .library import SymmetricStateParams, reduced_w
from .output import ResultTable

log = logging.getLogger(__name__)

TABLE_INEQUALITIES = ("dda3", "facet3", "svetlichny3", "mermin3")
TABLE2_H = (1.0, 0.99, 0.91, 0.55, 0.4)
FIG1_N_RANGE = tuple(range(4, 13))


@dataclass
class SweepConfig:
    restarts: int = DEFAULT_RESTARTS
    sweeps_max: int = DEFAULT_SWEEPS
    tol: float = DEFAULT_TOL
    seed: int = 0
    workers: int = 1
    margin: float = 1e-6  # a value counts as a violation above local_bound + margin
    bracket: float = 5e-3
    h_min: float = 1e-3
    out_dir: Path | None = None

    def __post_init__(self):
        if self.restarts < 1 or self.sweeps_max < 1:
            raise ArgumentError("restarts and sweeps_max must be positive")
        if not 0 < self.h_min < 1 or self.bracket <= 0:
            raise ArgumentError("need 0 < h_min < 1 and a positive bracket")

    def optimizer_params(self) -> dict:
        return dict(restarts=self.restarts, sweeps_max=self.sweeps_max, tol=self.tol, seed=self.seed)

    def as_params(self) -> dict:
        d = asdict(self)
        d["out_dir"] = None if self.out_dir is None else str(self.out_dir)
        return d


@dataclass(frozen=True)
class ThresholdResult:
    n: int
    m: int
    inequality: str
    h_star: float | None  # largest probed h that violates; None if nothing in (h_min, 1] does
    bracket: float
    probes: list[tuple[float, float]] = field(default_factory=list, compare=False)

    @property
    def found(self) -> bool:
        return self.h_star is not None


def filtered_noisy_w(n: int, m: int, h: float) -> np.ndarray:
    """m-qubit marginal of |W_n> after the filter h|0><0| + |1><1| on every qubit."""
    rho = reduced_w(n, m)
    return rho if h == 1 else apply_filter(rho, uniform_filters(m, h))


def _maximize(rho, ineq: CoefficientTensor, config: SweepConfig, stop_above=None) -> float:
    return optimize_bell(rho, ineq, workers=config.workers, stop_above=stop_above, **config.optimizer_params()).value


def run_table1(config: SweepConfig = SweepConfig()) -> ResultTable:
    """Maximal Bell values of the 3-qubit marginal of |W_4>."""
    rho = reduced_w(4, 3)
    row = {"state": "rho4_3"}
    for name in TABLE_INEQUALITIES:
        row[name] = _maximize(rho, get_inequality(name), config)
    return ResultTable("table1", ["state", *TABLE_INEQUALITIES], [row], config.as_params(), config.seed)


def run_table2(h_list: Sequence[float] = TABLE2_H, config: SweepConfig = SweepConfig()) -> ResultTable:
    """Maximal Bell values of the filtered 3-qubit marginal of |W_4>, one row per h."""
    for h in h_list:
        if not 0 < h <= 1:
            raise ArgumentError(f"filter strength must be in (0, 1], got {h}")
    columns = ["h", *TABLE_INEQUALITIES, *(f"{n}_violated" for n in TABLE_INEQUALITIES)]
    rows = []
    for h in h_list:
        rho = filtered_noisy_w(4, 3, h)
        row = {"h": float(h)}
        for name in TABLE_INEQUALITIES:
            ineq = get_inequality(name)
            value = _maximize(rho, ineq, config)
            row[name] = value
            row[f"{name}_violated"] = bool(value > ineq.local_bound + config.margin)
        rows.append(row)
    params = config.as_params() | {"h_list": [float(h) for h in h_list]}
    return ResultTable("table2", columns, rows, params, config.seed)


def violates(n: int, m: int, ineq: CoefficientTensor, h: float, config: SweepConfig) -> tuple[bool, float]:
    """Does the filtered m-qubit W marginal beat the local bound by more than the margin?"""
    threshold = ineq.local_bound + config.margin
    value = _maximize(filtered_noisy_w(n, m, h), ineq, config, stop_above=threshold)
    return value > threshold, value


def scan_threshold(n: int, m: int, ineq: CoefficientTensor | str, config: SweepConfig = SweepConfig()) -> ThresholdResult:
    """Bisect for the largest filter strength h that still gives a violation.

    Violation is assumed monotone in h (stronger filtering, i.e. smaller h,
    only helps).
    """
    if not 2 <= m < n:
        raise ArgumentError(f"need 2 <= m < n, got n={n}, m={m}")
    ineq = get_inequality(ineq) if isinstance(ineq, str) else ineq
    if ineq.parties != m:
        raise ArgumentError(f"{ineq.name} acts on {ineq.parties} qubits, not {m}")
    probes = []

    def probe(h):
        hit, value = violates(n, m, ineq, h, config)
        probes.append((h, value))
        log.debug("n=%d m=%d %s h=%.6f value=%.9f violated=%s", n, m, ineq.name, h, value, hit)
        return hit

    if probe(1.0):
        return ThresholdResult(n, m, ineq.name, 1.0, 0.0, probes)
    lo, hi = config.h_min, 1.0
    if not probe(lo):
        return ThresholdResult(n, m, ineq.name, None, hi - lo, probes)
    while hi - lo > config.bracket:
        mid = 0.5 * (lo + hi)
        if probe(mid):
            lo = mid
        else:
            hi = mid
    return ThresholdResult(n, m, ineq.name, lo, hi - lo, probes)


def threshold_table(result: ThresholdResult, config: SweepConfig) -> ResultTable:
    rows = [{"h": h, "value": v, "violated": bool(v > get_inequality(result.inequality).local_bound + config.margin)}
            for h, v in result.probes]
    derived = {"n": result.n, "m": result.m, "inequality": result.inequality,
               "h_star": result.h_star, "bracket": result.bracket}
    if result.m == 2:
        derived["analytic_h_star"] = chsh_filter_threshold(result.n)
    return ResultTable("threshold", ["h", "value", "violated"], rows, config.as_params(), config.seed, derived)


def fit_through_origin(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope of y = k x and the centered coefficient of determination."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    slope = float(x @ y / (x @ x))
    residual = y - slope * x
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(residual @ residual) / ss_tot if ss_tot > 0 else 1.0
    return slope, r2


def run_fig1(n_range: Sequence[int] = FIG1_N_RANGE, config: SweepConfig = SweepConfig(), m: int = 3) -> ResultTable:
    """Facet-inequality filter threshold of the m-qubit W_N marginal across N."""
    n_range = list(n_range)
    if not n_range or min(n_range) <= m or max(n_range) > 12:
        raise ArgumentError(f"n_range must lie in [{m + 1}, 12]")
    ineq = get_inequality(f"facet{m}")
    rows = []
    for n in n_range:
        res = scan_threshold(n, m, ineq, config)
        rows.append({
            "n": n,
            "h_star": res.h_star,
            "bracket": res.bracket,
            "inv_sqrt_n_minus_m": 1 / sqrt(n - m),
        })
    found = [r for r in rows if r["h_star"] is not None]
    conjecture = sqrt(2 * (sqrt(2) - 1))
    derived = {"m": m, "n_range": n_range, "conjectured_slope": conjecture}
    if len(found) >= 2:
        slope, r2 = fit_through_origin([r["inv_sqrt_n_minus_m"] for r in found], [r["h_star"] for r in found])
        derived |= {"slope": slope, "r_squared": r2, "slope_rel_error": abs(slope - conjecture) / conjecture}
    table = ResultTable("fig1", ["n", "h_star", "bracket", "inv_sqrt_n_minus_m"], rows, config.as_params(), config.seed, derived)
    return table


def fig1_svgs(table: ResultTable) -> dict[str, str]:
    rows = [r for r in table.rows if r["h_star"] is not None]
    n = [r["n"] for r in rows]
    h = [r["h_star"] for r in rows]
    x = [r["inv_sqrt_n_minus_m"] for r in rows]
    m = table.derived["m"]
    left = svg.line_chart([svg.Series(n, h, "h*")], f"Facet threshold, {m}-qubit marginal of W_N", "N", "h*")
    series = [svg.Series(x, h, "h*")]
    if "slope" in table.derived:
        k = table.derived["slope"]
        xs = [0.0, max(x)]
        series.append(svg.Series(xs, [k * v for v in xs], f"fit slope {k:.4f}, R^2 {table.derived['r_squared']:.5f}",
                                 markers=False, dashed=True))
    right = svg.line_chart(series, "h* against 1/sqrt(N - M)", "1/sqrt(N - M)", "h*", xlim=(0, max(x) * 1.05))
    return {"fig1_h_vs_n": left, "fig1_h_vs_inv_sqrt": right}


# -- appendix: symmetric three-qubit family ---------------------------------

AXES = ("a1", "b1", "h")
M_MARGIN = 1e-9  # rounding slack on the M = 1 ridge


@dataclass(frozen=True)
class AppendixGrid:
    """Sample points of the two free parameters; the third is fixed."""

    x: np.ndarray
    y: np.ndarray

    @classmethod
    def uniform(cls, points: int = 101, h_min: float = 0.01) -> dict:
        if points < 2:
            raise ArgumentError("need at least two grid points per axis")
        unit = np.linspace(0.0, 1.0, points)
        return {"a1": unit, "b1": unit, "h": np.linspace(h_min, 1.0, points)}


def free_axes(fixed_params: Mapping[str, float]) -> tuple[str, str]:
    if len(fixed_params) != 1 or next(iter(fixed_params)) not in AXES:
        raise ArgumentError(f"fix exactly one of {AXES}, got {dict(fixed_params)}")
    free = [a for a in AXES if a not in fixed_params]
    return free[0], free[1]


def appendix_m(a1: float, b1: float, h: float, mode: FilterMode) -> float:
    """Horodecki sum of the filtered two-qubit marginal; NaN outside a1^2 + b1^2 <= 1."""
    if a1 * a1 + b1 * b1 > 1 + 1e-12:
        return float("nan")
    p = SymmetricStateParams(a1, b1)
    return horodecki_m(symmetric_filtered_reduced(p, h, mode))


def run_appendix(
    filter_mode: FilterMode,
    fixed_params: Mapping[str, float],
    grid: AppendixGrid | int = 101,
    config: SweepConfig = SweepConfig(),
) -> ResultTable:
    """Horodecki sum of the filtered symmetric-state marginal over a 2-D parameter grid."""
    xname, yname = free_axes(fixed_params)
    fixed_name, fixed_value = next(iter(fixed_params.items()))
    if fixed_name == "h" and not 0 < fixed_value <= 1:
        raise ArgumentError("h must be in (0, 1]")
    if fixed_name != "h" and not 0 <= fixed_value <= 1:
        raise ArgumentError(f"{fixed_name} must be in [0, 1]")
    if isinstance(grid, int):
        axes = AppendixGrid.uniform(grid)
        grid = AppendixGrid(axes[xname], axes[yname])
    rows = []
    z = np.full((len(grid.x), len(grid.y)), np.nan)
    for i, xv in enumerate(grid.x):
        for j, yv in enumerate(grid.y):
            point = {fixed_name: fixed_value, xname: float(xv), yname: float(yv)}
            value = appendix_m(point["a1"], point["b1"], point["h"], filter_mode)
            z[i, j] = value
            rows.append({xname: float(xv), yname: float(yv), "m_value": None if np.isnan(value) else value})
    valid = ~np.isnan(z)
    best = np.unravel_index(np.nanargmax(z), z.shape)
    derived = {
        "filter": filter_mode.value,
        "fixed": {fixed_name: fixed_value},
        "max_m": float(z[best]),
        f"argmax_{xname}": float(grid.x[best[0]]),
        f"argmax_{yname}": float(grid.y[best[1]]),
        "violating_fraction": float(np.mean(z[valid] > 1.0 + M_MARGIN)),
    }
    table = ResultTable("appendix", [xname, yname, "m_value"], rows, config.as_params(), config.seed, derived)
    table.grid = (grid.x, grid.y, z)
    return table


def appendix_svg(table: ResultTable) -> str:
    x, y, z = table.grid
    xname, yname = table.columns[:2]
    levels = [0.6, 0.8, 0.9, 1.1, 1.2, 1.4]
    fixed = ", ".join(f"{k} = {v:g}" for k, v in table.derived["fixed"].items())
    title = f"Sum of two largest eigenvalues of U, filter {table.derived['filter']}, {fixed}"
    return svg.contour_plot(x, y, z, levels, 1.0, title, xname, yname)


def appendix_maximum(
    coarse_step: float = 0.01,
    fine_step: float = 1e-3,
    window: float = 0.02,
    ridge_tol: float = 1e-6,
    center: tuple[float, float] | None = None,
) -> dict:
    """Maximum of the unfiltered Horodecki sum over the symmetric family.

    A coarse grid over a1, b1 in [0, 1] is refined with ``fine_step`` in a
    ``window`` around ``center`` (default: the coarse argmax).  The maximum
    is attained on a whole curve, so the result also lists every refined
    grid point within ``ridge_tol`` of the maximum.
    """
    coarse = np.arange(0.0, 1.0 + coarse_step / 2, coarse_step)
    z = np.array([[appendix_m(a, b, 1.0, FilterMode.SUPPRESS_ZERO) for b in coarse] for a in coarse])
    i, j = np.unravel_index(np.nanargmax(z), z.shape)
    coarse_best = (float(coarse[i]), float(coarse[j]))
    cx, cy = center if center is not None else coarse_best
    fx = np.arange(max(cx - window, 0.0), min(cx + window, 1.0) + fine_step / 2, fine_step)
    fy = np.arange(max(cy - window, 0.0), min(cy + window, 1.0) + fine_step / 2, fine_step)
    fz = np.array([[appendix_m(a, b, 1.0, FilterMode.SUPPRESS_ZERO) for b in fy] for a in fx])
    k, l = np.unravel_index(np.nanargmax(fz), fz.shape)
    best = float(max(fz[k, l], z[i, j]))
    ridge = [(float(fx[p]), float(fy[q])) for p, q in zip(*np.nonzero(fz >= best - ridge_tol))]
    return {
        "max_m": best,
        "coarse_argmax": coarse_best,
        "fine_argmax": (float(fx[k]), float(fy[l])),
        "ridge": ridge,
    }
