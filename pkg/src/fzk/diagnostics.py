"""Conserved quantities, error norms, solitary waves, convergence orders."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import GridMismatchError, InvalidParameterError, NonDoublingSequenceError
from .grid import (
    RealField,
    SpectralField,
    WavenumberTable,
    grid_points,
    inverse_transform,
    next_smooth,
    wavenumbers,
)

DRIFT_FLOOR = 1e-30


@dataclass(frozen=True)
class InvariantRecord:
    """One sample of the three conserved functionals."""

    t: float
    mass: float
    momentum: float
    hamiltonian: float


@dataclass(frozen=True)
class SolitonSpec:
    """Sech^2 solitary wave: speed/amplitude parameter c, angle, initial center."""

    c: float
    theta: float = 0.0
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if not self.c > 0:
            raise InvalidParameterError(f"soliton parameter c must be > 0, got {self.c}")

    @property
    def amplitude(self) -> float:
        return 3.0 * self.c


@dataclass(frozen=True)
class ErrorRow:
    n: int
    l2_error: float
    linf_error: float
    l2_order: float | None = None
    linf_order: float | None = None


@dataclass
class ErrorTable:
    """Per-resolution errors; orders attach from the second row on."""

    rows: list[ErrorRow]


def mass(u: SpectralField) -> float:
    """Integral of u over the domain: ``|Omega| * u_hat(0, 0)``."""
    N = u.disc.N
    return u.disc.domain_area * float(u.coeffs[N, N].real)


def momentum(u: SpectralField) -> float:
    """Integral of u^2, via the Parseval identity."""
    return u.disc.domain_area * float(np.sum(np.abs(u.coeffs) ** 2))


def hamiltonian(u: SpectralField, kt: WavenumberTable | None = None) -> float:
    """Energy ``1/2 int |(-Delta)^(alpha/4) u|^2 - 1/6 int u^3``.

    The quadratic part is a weighted Parseval sum.  The cubic part is
    evaluated on a grid of at least 4N+2 points per axis so its quadrature
    carries no aliasing error.
    """
    disc = u.disc
    if kt is None:
        kt = wavenumbers(disc)
    quadratic = 0.5 * disc.domain_area * float(
        np.sum(kt.frac_mult * np.abs(u.coeffs) ** 2)
    )
    M3 = next_smooth(4 * disc.N + 2)
    r = inverse_transform(u, M3)
    cell = (2.0 * np.pi * disc.L / M3) ** 2
    cubic = cell * float(np.sum(r.values**3))
    return quadratic - cubic / 6.0


def invariants(u: SpectralField, t: float, kt: WavenumberTable | None = None) -> InvariantRecord:
    return InvariantRecord(
        t=t, mass=mass(u), momentum=momentum(u), hamiltonian=hamiltonian(u, kt)
    )


def exact_soliton(spec: SolitonSpec, t: float, M: int, L: float) -> RealField:
    """Sample ``3c sech^2(sqrt(c)/2 [((x-x0) - ct) cos(theta) + (y-y0) sin(theta)])``.

    Exact traveling-wave solution for dispersion order alpha = 2.  If the
    profile has not decayed at the periodic seam, a warning is issued (the
    field is then not effectively periodic).
    """
    x = grid_points(M, L)
    X, Y = np.meshgrid(x, x, indexing="ij")
    vals = _soliton_values(spec, t, X, Y)

    edge = L * np.pi
    seam_x = np.max(
        np.abs(
            _soliton_values(spec, t, np.full_like(x, -edge), x)
            - _soliton_values(spec, t, np.full_like(x, edge), x)
        )
    )
    seam_y = np.max(
        np.abs(
            _soliton_values(spec, t, x, np.full_like(x, -edge))
            - _soliton_values(spec, t, x, np.full_like(x, edge))
        )
    )
    if max(seam_x, seam_y) > 1e-13:
        warnings.warn(
            f"soliton support reaches the domain boundary (seam jump "
            f"{max(seam_x, seam_y):.3e}); the periodic field is distorted",
            stacklevel=2,
        )
    return RealField(vals, L)


def _soliton_values(spec: SolitonSpec, t, X, Y):
    arg = 0.5 * np.sqrt(spec.c) * (
        ((X - spec.x0) - spec.c * t) * np.cos(spec.theta)
        + (Y - spec.y0) * np.sin(spec.theta)
    )
    return spec.amplitude / np.cosh(arg) ** 2


def _check_same_grid(a: RealField, b: RealField):
    if a.values.shape != b.values.shape or a.L != b.L:
        raise GridMismatchError(
            f"fields on different grids: {a.values.shape}/L={a.L} vs "
            f"{b.values.shape}/L={b.L}"
        )


def l2_error(a: RealField, b: RealField) -> float:
    """Grid-quadrature L2 norm of a - b (cell-area weighted)."""
    _check_same_grid(a, b)
    cell = (2.0 * np.pi * a.L / a.M) ** 2
    return float(np.sqrt(cell * np.sum((a.values - b.values) ** 2)))


def linf_error(a: RealField, b: RealField) -> float:
    _check_same_grid(a, b)
    return float(np.max(np.abs(a.values - b.values)))


def observed_orders(table: ErrorTable) -> ErrorTable:
    """Attach ``log2(e_N / e_2N)`` orders; requires a doubling N sequence."""
    rows = table.rows
    for prev, cur in zip(rows, rows[1:]):
        if cur.n != 2 * prev.n:
            raise NonDoublingSequenceError(
                f"resolutions must double: got N={prev.n} followed by N={cur.n}"
            )
    out = [replace(rows[0], l2_order=None, linf_order=None)] if rows else []
    for prev, cur in zip(rows, rows[1:]):
        out.append(
            replace(
                cur,
                l2_order=float(np.log2(prev.l2_error / cur.l2_error)),
                linf_order=float(np.log2(prev.linf_error / cur.linf_error)),
            )
        )
    return ErrorTable(rows=out)


def conservation_drift(series: list[InvariantRecord]) -> tuple[float, float, float]:
    """Max relative drift of each invariant against its initial value.

    The denominator is floored at 1e-30 so identically zero invariants
    (e.g. the mass of a zero-mean field) report their absolute drift.
    """
    if not series:
        raise InvalidParameterError("conservation_drift needs a non-empty series")
    first = series[0]
    drifts = []
    for name in ("mass", "momentum", "hamiltonian"):
        q0 = getattr(first, name)
        denom = max(abs(q0), DRIFT_FLOOR)
        drifts.append(max(abs(getattr(r, name) - q0) for r in series) / denom)
    return tuple(drifts)
