"""Discrete torus: grids, wavenumbers, and spectral/physical transforms.

Conventions
-----------
The domain is the square torus ``Omega = [-L*pi, L*pi]^2``.  A real field
``u`` is expanded in the scaled Fourier basis

    u(x) = sum_{|k|_inf <= N} u_hat(k) * exp(i k . x / L),

so the effective wavenumber of integer mode ``k`` is ``kappa = k / L`` and
the fractional Laplacian acts as multiplication by ``|kappa|^alpha``.

``SpectralField`` stores the dense block of coefficients for
``k in {-N..N}^2`` as a complex array ``coeffs`` of shape
``(2N+1, 2N+1)`` with ``coeffs[i, j] = u_hat(i - N, j - N)``.  Axis 0 is
the x1 (propagation) direction.  Real-valued fields satisfy the Hermitian
symmetry ``u_hat(-k) == conj(u_hat(k))``, which in this layout reads
``coeffs == conj(coeffs[::-1, ::-1])``.

``RealField`` stores samples ``values[i, j] = u(x[i], y[j])`` on the
uniform M x M grid ``x[i] = -L*pi + 2*pi*L*i/M``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, ResolutionMismatchError

ALPHA_ANALYZED_RANGE = (1.0, 2.0)


def next_smooth(n: int) -> int:
    """Smallest integer >= n whose prime factors are all in {2, 3, 5}."""
    n = max(int(n), 1)
    while True:
        m = n
        for p in (2, 3, 5):
            while m % p == 0:
                m //= p
        if m == 1:
            return n
        n += 1


@dataclass(frozen=True)
class Discretization:
    """Resolution and domain parameters of one spectral setup.

    Attributes:
        N: mode cutoff; retained modes satisfy ``|k|_inf <= N``.
        L: domain half-width factor, ``Omega = [-L*pi, L*pi]^2``.
        alpha: fractional dispersion order in ``(0, 2]``.
        M_phys: physical grid points per axis (``>= 2N+1``).
        M_pad: dealiasing grid points per axis (``>= 3N+1``), sized so
            quadratic products of retained modes are alias-free.
    """

    N: int
    L: float
    alpha: float
    M_phys: int
    M_pad: int

    @property
    def n_modes(self) -> int:
        return 2 * self.N + 1

    @property
    def domain_area(self) -> float:
        return (2.0 * np.pi * self.L) ** 2


def build_discretization(N: int, L: float = 1.0, alpha: float = 2.0) -> Discretization:
    """Validate parameters and choose FFT-friendly grid sizes.

    ``M_phys`` is the smallest {2,3,5}-smooth integer >= 2N+2 and
    ``M_pad`` the smallest one >= 3N+2.

    Raises:
        InvalidParameterError: if ``N < 1``, ``L <= 0`` or ``alpha`` is
            outside ``(0, 2]``.
    """
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise InvalidParameterError(f"N must be an integer >= 1, got {N!r}")
    if not L > 0:
        raise InvalidParameterError(f"L must be positive, got {L!r}")
    if not 0.0 < alpha <= 2.0:
        raise InvalidParameterError(f"alpha must lie in (0, 2], got {alpha!r}")
    if alpha < ALPHA_ANALYZED_RANGE[0]:
        warnings.warn(
            f"alpha = {alpha} is outside the analyzed range [1, 2]; "
            "results are exploratory",
            stacklevel=2,
        )
    return Discretization(
        N=int(N),
        L=float(L),
        alpha=float(alpha),
        M_phys=next_smooth(2 * N + 2),
        M_pad=next_smooth(3 * N + 2),
    )


@dataclass(frozen=True)
class WavenumberTable:
    """Per-mode scaled wavenumbers on the (2N+1)^2 coefficient block.

    ``kappa1[i, j] = (i - N) / L``, ``kappa2[i, j] = (j - N) / L`` and
    ``frac_mult = (kappa1^2 + kappa2^2)^(alpha/2)``.
    """

    kappa1: np.ndarray
    kappa2: np.ndarray
    frac_mult: np.ndarray


def wavenumbers(disc: Discretization) -> WavenumberTable:
    k = np.arange(-disc.N, disc.N + 1, dtype=float) / disc.L
    kappa1 = np.broadcast_to(k[:, None], (disc.n_modes, disc.n_modes)).copy()
    kappa2 = np.broadcast_to(k[None, :], (disc.n_modes, disc.n_modes)).copy()
    frac_mult = (kappa1**2 + kappa2**2) ** (disc.alpha / 2.0)
    return WavenumberTable(kappa1=kappa1, kappa2=kappa2, frac_mult=frac_mult)


@dataclass
class SpectralField:
    """Dense Hermitian-symmetric coefficient block plus its discretization."""

    coeffs: np.ndarray
    disc: Discretization

    def copy(self) -> "SpectralField":
        return SpectralField(self.coeffs.copy(), self.disc)


@dataclass
class RealField:
    """Real samples on the uniform M x M grid over Omega."""

    values: np.ndarray
    L: float

    @property
    def M(self) -> int:
        return self.values.shape[0]


def grid_points(M: int, L: float) -> np.ndarray:
    """1D grid coordinates ``-L*pi + 2*pi*L*i/M`` for ``i = 0..M-1``."""
    return -L * np.pi + 2.0 * np.pi * L * np.arange(M) / M


def hermitian_symmetrize(coeffs: np.ndarray) -> np.ndarray:
    """Project onto the Hermitian-symmetric subspace by pair averaging.

    Also zeroes the imaginary part of the (0,0) mode.  Idempotent; returns
    a new array.
    """
    return 0.5 * (coeffs + np.conj(coeffs[::-1, ::-1]))


def hermitian_defect(coeffs: np.ndarray) -> float:
    """Max absolute violation of ``u_hat(-k) == conj(u_hat(k))``."""
    return float(np.max(np.abs(coeffs - np.conj(coeffs[::-1, ::-1]))))


def _wrap_indices(N: int, M: int) -> np.ndarray:
    # row/column positions of modes -N..N inside an M-point FFT layout
    return np.arange(-N, N + 1) % M

def _checkerboard(n: int) -> np.ndarray:
    # (-1)^(k1+k2) relating the FFT grid (origin at index 0) to the
    # physical grid whose first point sits at -L*pi
    idx = np.arange(n)
    return np.where((idx[:, None] + idx[None, :]) % 2 == 0, 1.0, -1.0)


def forward_transform(f: RealField, disc: Discretization) -> SpectralField:
    """Coefficients of the trigonometric interpolant, truncated to |k|_inf <= N.

    Hermitian symmetry is enforced exactly on the result.

    Raises:
        ResolutionMismatchError: if ``f.M < 2N+1``.
    """
    M = f.M
    if M < 2 * disc.N + 1:
        raise ResolutionMismatchError(
            f"grid with M={M} cannot resolve modes up to N={disc.N} (need M >= {2*disc.N+1})"
        )
    F = np.fft.fft2(f.values) / (M * M)
    wrap = _wrap_indices(disc.N, M)
    coeffs = F[np.ix_(wrap, wrap)] * _checkerboard(disc.n_modes)
    return SpectralField(hermitian_symmetrize(coeffs), disc)


def inverse_transform(s: SpectralField, M: int) -> RealField:
    """Sample ``sum u_hat(k) exp(i k . x / L)`` on the M x M grid.

    Raises:
        ResolutionMismatchError: if ``M < 2N+1``.
        ValueError: if the imaginary residue exceeds ``1e-12 * ||s||``,
            which indicates a non-Hermitian input.
    """
    N = s.disc.N
    if M < 2 * N + 1:
        raise ResolutionMismatchError(
            f"M={M} cannot represent modes up to N={N} (need M >= {2*N+1})"
        )
    G = np.zeros((M, M), dtype=complex)
    wrap = _wrap_indices(N, M)
    G[np.ix_(wrap, wrap)] = s.coeffs * _checkerboard(s.disc.n_modes)
    vals = np.fft.ifft2(G) * (M * M)
    scale = float(np.sqrt(np.sum(np.abs(s.coeffs) ** 2)))
    residue = float(np.max(np.abs(vals.imag)))
    if residue > 1e-12 * max(scale, 1e-300):
        raise ValueError(
            f"imaginary residue {residue:.3e} exceeds 1e-12*||s||; "
            "input coefficients are not Hermitian-symmetric"
        )
    return RealField(np.ascontiguousarray(vals.real), s.disc.L)


def random_spectral_field(
    disc: Discretization,
    rng: np.random.Generator | int | None = None,
    decay: float = 2.0,
) -> SpectralField:
    """Seeded smooth random Hermitian field for property tests.

    Coefficient magnitudes scale like ``(1 + |k|^2)^(-decay)`` with
    uniformly random phases.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    n = disc.n_modes
    raw = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    k = np.arange(-disc.N, disc.N + 1, dtype=float)
    envelope = (1.0 + k[:, None] ** 2 + k[None, :] ** 2) ** (-decay)
    return SpectralField(hermitian_symmetrize(raw * envelope), disc)
