"""Config-driven studies: single runs, convergence tables, step-size sweeps,
soliton interactions, and the convolution oracle self-check.

Runs inside a study are independent of each other and could execute in
parallel; results are always assembled in parameter order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .diagnostics import (
    ErrorRow,
    ErrorTable,
    InvariantRecord,
    SolitonSpec,
    exact_soliton,
    invariants,
    l2_error,
    linf_error,
    observed_orders,
)
from .errors import InvalidParameterError, NonDoublingSequenceError, OracleSizeError
from .grid import (
    Discretization,
    RealField,
    SpectralField,
    build_discretization,
    forward_transform,
    grid_points,
    inverse_transform,
    random_spectral_field,
    wavenumbers,
)
from .operators import NonlinearWorkspace, linear_symbol, nonlinear_term, nonlinear_term_oracle
from .stepping import StepperState, StepPolicy, default_dt, integrate

ORACLE_TOLERANCE = 1e-12
DEFAULT_FRACTIONAL_ORDERS = (1.2, 1.5, 1.9, 2.0)


@dataclass(frozen=True)
class CosineMode:
    """Analytic initial-condition component ``a * cos(kx*x/L + ky*y/L)``."""

    amplitude: float
    kx: int = 1
    ky: int = 0


@dataclass(frozen=True)
class ConstantField:
    """Spatially constant initial-condition component."""

    value: float


@dataclass
class RunConfig:
    """Everything one simulation needs; ``dt="auto"`` applies the
    ``1/(N max|u0|)`` rule at run time."""

    n: int
    t_final: float
    l: float = 1.0
    alpha: float = 2.0
    dt: float | str = "auto"
    ic: list = field(default_factory=list)
    observe_every: int = 100
    out_dir: str = "out"
    seed: int = 0
    snapshot_times: tuple[float, ...] = ()


@dataclass
class RunResult:
    final: StepperState
    invariants: list[InvariantRecord]
    snapshots: list[tuple[float, RealField]]
    timings: dict[str, float]
    disc: Discretization
    dt: float


def initial_field(components, M: int, L: float) -> RealField:
    """Superpose the configured initial-condition components on the grid."""
    vals = np.zeros((M, M))
    x = grid_points(M, L)
    X, Y = np.meshgrid(x, x, indexing="ij")
    for comp in components:
        if isinstance(comp, SolitonSpec):
            vals += exact_soliton(comp, 0.0, M, L).values
        elif isinstance(comp, CosineMode):
            vals += comp.amplitude * np.cos(comp.kx * X / L + comp.ky * Y / L)
        elif isinstance(comp, ConstantField):
            vals += comp.value
        else:
            raise InvalidParameterError(f"unknown initial-condition component {comp!r}")
    return RealField(vals, L)


def resolve_dt(cfg: RunConfig, u0: RealField) -> float:
    if cfg.dt == "auto":
        return default_dt(cfg.n, u0)
    dt = float(cfg.dt)
    if not dt > 0:
        raise InvalidParameterError(f"dt must be positive, got {dt}")
    return dt


def run_simulation(cfg: RunConfig) -> RunResult:
    """Project the initial data, integrate to T, record invariants/snapshots."""
    t0 = time.perf_counter()
    disc = build_discretization(cfg.n, cfg.l, cfg.alpha)
    u0_real = initial_field(cfg.ic, disc.M_phys, cfg.l)
    dt = resolve_dt(cfg, u0_real)
    u0 = forward_transform(u0_real, disc)
    lam = linear_symbol(disc)
    workspace = NonlinearWorkspace(disc)
    kt = wavenumbers(disc)
    setup_time = time.perf_counter() - t0

    series: list[InvariantRecord] = []
    snapshots: list[tuple[float, RealField]] = []
    wanted = sorted(set(float(t) for t in cfg.snapshot_times))
    diag_time = 0.0

    def observer(t: float, u: SpectralField):
        nonlocal diag_time
        d0 = time.perf_counter()
        series.append(invariants(u, t, kt))
        if any(abs(t - ts) <= 1e-9 * max(1.0, abs(ts)) for ts in wanted):
            snapshots.append((t, inverse_transform(u, disc.M_phys)))
        diag_time += time.perf_counter() - d0

    t1 = time.perf_counter()
    final = integrate(
        u0,
        StepPolicy(dt=dt, T=cfg.t_final),
        lam,
        workspace,
        observer=observer,
        observe_every=cfg.observe_every,
        checkpoint_times=cfg.snapshot_times,
    )
    stepping_time = time.perf_counter() - t1 - diag_time

    timings = {
        "setup_s": setup_time,
        "stepping_s": stepping_time,
        "diagnostics_s": diag_time,
    }
    return RunResult(
        final=final,
        invariants=series,
        snapshots=snapshots,
        timings=timings,
        disc=disc,
        dt=dt,
    )


def _validate_doubling(ns) -> list[int]:
    ns = [int(n) for n in ns]
    if len(ns) < 2:
        raise NonDoublingSequenceError("need at least two resolutions")
    for a, b in zip(ns, ns[1:]):
        if b != 2 * a:
            raise NonDoublingSequenceError(
                f"resolutions must double: got {a} followed by {b}"
            )
    return ns


def convergence_study(base: RunConfig, ns) -> ErrorTable:
    """Errors at T for a doubling resolution sweep.

    With ``alpha == 2`` and a single-soliton initial condition, errors are
    measured against the exact traveling wave on each run's own grid.
    Otherwise every run is compared against the finest-resolution run
    (self-convergence), evaluated on the finest grid; the finest N then
    serves as reference and gets no row of its own.
    """
    ns = _validate_doubling(ns)
    exact_path = (
        base.alpha == 2.0
        and len(base.ic) == 1
        and isinstance(base.ic[0], SolitonSpec)
    )
    results = [run_simulation(replace(base, n=n)) for n in ns]

    rows = []
    if exact_path:
        wave = base.ic[0]
        for n, res in zip(ns, results):
            approx = inverse_transform(res.final.u, res.disc.M_phys)
            target = exact_soliton(wave, base.t_final, res.disc.M_phys, base.l)
            rows.append(
                ErrorRow(n=n, l2_error=l2_error(approx, target), linf_error=linf_error(approx, target))
            )
    else:
        ref = results[-1]
        m_ref = ref.disc.M_phys
        target = inverse_transform(ref.final.u, m_ref)
        for n, res in zip(ns[:-1], results[:-1]):
            approx = inverse_transform(res.final.u, m_ref)
            rows.append(
                ErrorRow(n=n, l2_error=l2_error(approx, target), linf_error=linf_error(approx, target))
            )
    return observed_orders(ErrorTable(rows=rows))


@dataclass(frozen=True)
class TemporalOrderRow:
    dt: float
    error: float
    order: float | None = None


def temporal_order_study(cfg: RunConfig, dts) -> list[TemporalOrderRow]:
    """Self-convergence in dt at fixed N; the finest dt is the reference.

    ``dts`` must halve strictly; returns one row per non-reference dt with
    orders ``log2(e_coarse / e_fine)`` from the second row on.
    """
    dts = [float(dt) for dt in dts]
    if any(not dt > 0 for dt in dts):
        raise InvalidParameterError("all dts must be positive")
    for a, b in zip(dts, dts[1:]):
        if abs(b - 0.5 * a) > 1e-12 * a:
            raise NonDoublingSequenceError(f"dts must halve: got {a} followed by {b}")
    if len(dts) < 2:
        return []

    results = [run_simulation(replace(cfg, dt=dt)) for dt in dts]
    m = results[-1].disc.M_phys
    reference = inverse_transform(results[-1].final.u, m)
    errors = [
        l2_error(inverse_transform(res.final.u, m), reference) for res in results[:-1]
    ]
    rows = [TemporalOrderRow(dt=dts[0], error=errors[0])]
    for i in range(1, len(errors)):
        rows.append(
            TemporalOrderRow(
                dt=dts[i],
                error=errors[i],
                order=float(np.log2(errors[i - 1] / errors[i])),
            )
        )
    return rows


def soliton_interaction_study(
    cfg: RunConfig, alphas=DEFAULT_FRACTIONAL_ORDERS
) -> list[tuple[float, RunResult]]:
    """Run the multi-soliton configuration once per fractional order.

    Results are returned in the given alpha order.  Every run applies the
    same automatic step-size rule to its own initial data.
    """
    if len(cfg.ic) < 2 or not all(isinstance(c, SolitonSpec) for c in cfg.ic):
        raise InvalidParameterError(
            "soliton interaction study needs at least two soliton components"
        )
    return [(a, run_simulation(replace(cfg, alpha=a))) for a in alphas]


def oracle_check(n_max: int, trials: int, seed: int = 0) -> float:
    """Max discrepancy between the dealiased transport term and the
    brute-force convolution, over seeded random fields at N = 2, 4, ...
    doubling up to ``n_max``."""
    if n_max > 16:
        raise OracleSizeError(f"oracle limited to N <= 16, got n_max={n_max}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    n = 2
    while n <= n_max:
        disc = build_discretization(n, 1.0, 2.0)
        workspace = NonlinearWorkspace(disc)
        for _ in range(trials):
            u = random_spectral_field(disc, rng)
            fast = nonlinear_term(u, workspace).coeffs
            slow = nonlinear_term_oracle(u).coeffs
            worst = max(worst, float(np.max(np.abs(fast - slow))))
        n *= 2
    return worst


def peak_positions(
    field: RealField, min_height: float = 0.05, min_separation: float = 2.0
) -> list[tuple[float, float]]:
    """Locate solitary-wave crests along the cross-section nearest y = 0.

    Returns (x1 position, height) pairs sorted by descending height, with
    sub-grid refinement by parabolic interpolation.  Peaks closer than
    ``min_separation`` to a taller one are suppressed.
    """
    M = field.M
    x = grid_points(M, field.L)
    j0 = int(np.argmin(np.abs(x)))
    slice_vals = field.values[:, j0]
    candidates = []
    for i in range(M):
        left = slice_vals[(i - 1) % M]
        right = slice_vals[(i + 1) % M]
        v = slice_vals[i]
        if v > left and v >= right and v >= min_height:
            h = 2.0 * np.pi * field.L / M
            denom = left - 2.0 * v + right
            offset = 0.5 * h * (left - right) / denom if denom != 0 else 0.0
            height = v - 0.25 * (left - right) * (offset / h) if denom != 0 else v
            candidates.append((x[i] + offset, float(height)))
    candidates.sort(key=lambda p: -p[1])
    kept: list[tuple[float, float]] = []
    for pos, height in candidates:
        if all(abs(pos - kpos) >= min_separation for kpos, _ in kept):
            kept.append((pos, height))
    return kept
