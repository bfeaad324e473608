"""Right-hand side of the Galerkin coefficient system.

The evolution of the coefficients of a real solution splits into a diagonal
dispersion part and a quadratic transport part:

    d/dt u_hat(m) = Lambda(m) * u_hat(m) + NL(m),
    Lambda(m)     = 1j * kappa1(m) * |kappa(m)|^alpha,
    NL(m)         = -0.5j * kappa1(m) * (u_hat * u_hat)(m),

where ``*`` is the convolution truncated to ``|m|_inf <= N``.  The
convolution is evaluated pseudo-spectrally on the enlarged ``M_pad`` grid
(``M_pad >= 3N+1``) so that it is exact for retained modes; the discrete
conservation properties depend on this exactness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, OracleSizeError, WorkspaceMismatchError
from .grid import (
    Discretization,
    SpectralField,
    hermitian_symmetrize,
    wavenumbers,
)

ORACLE_MAX_N = 16


@dataclass(frozen=True)
class DiagonalOperator:
    """Per-mode complex multiplier on the (2N+1)^2 coefficient block."""

    entries: np.ndarray


def linear_symbol(disc: Discretization) -> DiagonalOperator:
    """Dispersion symbol ``1j * kappa1 * |kappa|^alpha`` (purely imaginary).

    Zero on the ``m1 = 0`` row, in particular at the mean mode.
    """
    kt = wavenumbers(disc)
    return DiagonalOperator(entries=1j * kt.kappa1 * kt.frac_mult)


class NonlinearWorkspace:
    """Reusable buffers and index maps for the dealiased quadratic term.

    One workspace serves one discretization and one evaluation stream; the
    stepping loop calls it four times per step without reallocating the
    padded spectrum.  Not safe to share between concurrent evaluations.
    """

    def __init__(self, disc: Discretization):
        self.disc = disc
        N, M = disc.N, disc.M_pad
        self.padded = np.zeros((M, M // 2 + 1), dtype=complex)
        self.real_pad = np.zeros((M, M), dtype=float)
        # rows of modes k1 = -N..N inside the M-point layout
        self._rows = np.arange(-N, N + 1) % M
        self._rows_rev = self._rows[::-1].copy()
        self._cols_pos = np.arange(N + 1)          # k2 = 0..N
        self._cols_neg = np.arange(N, 0, -1)       # sources for k2 = -N..-1
        kappa1 = (np.arange(-N, N + 1, dtype=float) / disc.L)[:, None]
        self._premul = -0.5j * kappa1

    def convolve(self, coeffs: np.ndarray) -> np.ndarray:
        """Exact truncated self-convolution of a Hermitian coefficient block."""
        N, M = self.disc.N, self.disc.M_pad
        P = self.padded
        P[...] = 0.0
        P[np.ix_(self._rows, self._cols_pos)] = coeffs[:, N:]
        self.real_pad = np.fft.irfft2(P, s=(M, M)) * (M * M)
        np.square(self.real_pad, out=self.real_pad)
        W = np.fft.rfft2(self.real_pad) / (M * M)
        out = np.empty_like(coeffs)
        out[:, N:] = W[np.ix_(self._rows, self._cols_pos)]
        out[:, :N] = np.conj(W[np.ix_(self._rows_rev, self._cols_neg)])
        return out

    def transport(self, coeffs: np.ndarray) -> np.ndarray:
        """Raw kernel: ``-0.5j * kappa1 * (coeffs * coeffs)`` without checks."""
        return self._premul * self.convolve(coeffs)


def nonlinear_term(u: SpectralField, workspace: NonlinearWorkspace) -> SpectralField:
    """Galerkin truncation of ``-0.5 * d/dx1 (u^2)``, dealiased and Hermitian.

    Raises:
        WorkspaceMismatchError: if the workspace was built for another
            discretization.
    """
    if workspace.disc != u.disc:
        raise WorkspaceMismatchError(
            f"workspace built for {workspace.disc}, field uses {u.disc}"
        )
    return SpectralField(hermitian_symmetrize(workspace.transport(u.coeffs)), u.disc)


def nonlinear_term_oracle(u: SpectralField) -> SpectralField:
    """Brute-force truncated convolution; no transforms involved.

    Guarded to N <= 16 since the cost grows like N^4.

    Raises:
        OracleSizeError: if ``u.disc.N > 16``.
    """
    disc = u.disc
    N = disc.N
    if N > ORACLE_MAX_N:
        raise OracleSizeError(f"oracle limited to N <= {ORACLE_MAX_N}, got N={N}")
    c = u.coeffs
    n = disc.n_modes
    conv = np.empty_like(c)
    for p in range(n):           # m1 = p - N
        ilo, ihi = max(0, p - N), min(2 * N, p + N)
        for q in range(n):       # m2 = q - N
            jlo, jhi = max(0, q - N), min(2 * N, q + N)
            a = c[ilo : ihi + 1, jlo : jhi + 1]
            b = c[p + N - ihi : p + N - ilo + 1, q + N - jhi : q + N - jlo + 1]
            conv[p, q] = np.sum(a * b[::-1, ::-1])
    kappa1 = (np.arange(-N, N + 1, dtype=float) / disc.L)[:, None]
    return SpectralField(-0.5j * kappa1 * conv, disc)


def apply_fractional(u: SpectralField, s: float) -> SpectralField:
    """Apply ``(-Delta)^s``: multiply mode k by ``|kappa(k)|^(2s)``.

    The ``s = 0`` case is the exact identity (``0^0`` taken as 1).

    Raises:
        InvalidParameterError: if ``s < 0``.
    """
    if s < 0:
        raise InvalidParameterError(f"fractional exponent must be >= 0, got {s}")
    kt = wavenumbers(u.disc)
    mult = (kt.kappa1**2 + kt.kappa2**2) ** s
    return SpectralField(u.coeffs * mult, u.disc)


def rhs(
    u: SpectralField, lam: DiagonalOperator, workspace: NonlinearWorkspace
) -> SpectralField:
    """Full right-hand side ``Lambda u + NL(u)``; the mean mode stays exactly 0."""
    nl = nonlinear_term(u, workspace)
    return SpectralField(lam.entries * u.coeffs + nl.coeffs, u.disc)
