"""Invariants, solitary waves, error norms, convergence orders."""

import numpy as np
import pytest

from fzk.diagnostics import (
    ErrorRow,
    ErrorTable,
    InvariantRecord,
    SolitonSpec,
    conservation_drift,
    exact_soliton,
    hamiltonian,
    l2_error,
    linf_error,
    mass,
    momentum,
    observed_orders,
)
from fzk.errors import GridMismatchError, InvalidParameterError, NonDoublingSequenceError
from fzk.grid import (
    RealField,
    SpectralField,
    build_discretization,
    forward_transform,
    grid_points,
    inverse_transform,
    random_spectral_field,
)


def cosine_spectral(disc, amplitude=1.0):
    x = grid_points(disc.M_phys, disc.L)
    X, _ = np.meshgrid(x, x, indexing="ij")
    return forward_transform(RealField(amplitude * np.cos(X / disc.L), disc.L), disc)


class TestMass:
    def test_constant(self):
        disc = build_discretization(4, 2.0, 2.0)
        c = np.zeros((disc.n_modes,) * 2, dtype=complex)
        c[disc.N, disc.N] = 1.7
        assert mass(SpectralField(c, disc)) == pytest.approx(
            1.7 * (2 * np.pi * 2.0) ** 2, rel=1e-15
        )

    def test_zero_mean_field(self):
        disc = build_discretization(4, 1.0, 2.0)
        assert abs(mass(cosine_spectral(disc))) < 1e-13

    def test_soliton_mass_matches_quadrature(self):
        disc = build_discretization(64, 20.0, 2.0)
        f = exact_soliton(SolitonSpec(c=1.0), 0.0, disc.M_phys, 20.0)
        s = forward_transform(f, disc)
        cell = (2 * np.pi * 20.0 / disc.M_phys) ** 2
        assert mass(s) == pytest.approx(cell * np.sum(f.values), rel=1e-12)


class TestMomentum:
    def test_zero(self):
        disc = build_discretization(4, 1.0, 2.0)
        z = SpectralField(np.zeros((disc.n_modes,) * 2, dtype=complex), disc)
        assert momentum(z) == 0.0

    def test_single_cosine(self):
        disc = build_discretization(4, 1.0, 2.0)
        assert momentum(cosine_spectral(disc)) == pytest.approx(2 * np.pi**2, rel=1e-13)

    def test_matches_padded_quadrature(self):
        disc = build_discretization(8, 3.0, 2.0)
        rng = np.random.default_rng(5)
        for _ in range(5):
            s = random_spectral_field(disc, rng)
            r = inverse_transform(s, disc.M_pad)
            cell = (2 * np.pi * disc.L / disc.M_pad) ** 2
            assert momentum(s) == pytest.approx(cell * np.sum(r.values**2), rel=1e-12)


class TestHamiltonian:
    def test_zero(self):
        disc = build_discretization(4, 1.0, 2.0)
        z = SpectralField(np.zeros((disc.n_modes,) * 2, dtype=complex), disc)
        assert hamiltonian(z) == 0.0

    def test_single_cosine_hand_value(self):
        # quadratic part: (1/2)(2pi)^2 (1/4 + 1/4) = pi^2; the cubic
        # integral of cos^3 vanishes
        disc = build_discretization(4, 1.0, 2.0)
        assert hamiltonian(cosine_spectral(disc)) == pytest.approx(np.pi**2, rel=1e-13)

    def test_cubic_term_sign(self):
        # u = const c: H = -(1/6) c^3 |Omega|
        disc = build_discretization(4, 1.0, 2.0)
        c = np.zeros((disc.n_modes,) * 2, dtype=complex)
        c[disc.N, disc.N] = 0.5
        expected = -(0.5**3) / 6.0 * (2 * np.pi) ** 2
        assert hamiltonian(SpectralField(c, disc)) == pytest.approx(expected, rel=1e-13)


class TestExactSoliton:
    def test_peak_amplitude_and_location(self):
        f = exact_soliton(SolitonSpec(c=1.0), 0.0, 256, 20.0)
        x = grid_points(256, 20.0)
        i0 = np.argmin(np.abs(x))
        assert f.values.max() == pytest.approx(3.0, abs=1e-6)
        assert np.unravel_index(np.argmax(f.values), f.values.shape)[0] == i0

    def test_amplitude_scales_with_c(self):
        f = exact_soliton(SolitonSpec(c=0.5), 0.0, 128, 20.0)
        assert f.values.max() == pytest.approx(1.5, abs=1e-6)

    def test_traveling_wave_shift_identity(self):
        # ct equal to a whole number of cells: translation is exact
        M, L, c = 200, 20.0, 1.0
        h = 2 * np.pi * L / M
        t = 10 * h / c
        f0 = exact_soliton(SolitonSpec(c=c), 0.0, M, L)
        ft = exact_soliton(SolitonSpec(c=c), t, M, L)
        assert np.allclose(ft.values, np.roll(f0.values, 10, axis=0), atol=1e-13)

    def test_boundary_decay_warning(self):
        with pytest.warns(UserWarning, match="boundary"):
            exact_soliton(SolitonSpec(c=1.0, x0=20.0 * np.pi), 0.0, 64, 20.0)

    def test_invalid_speed(self):
        with pytest.raises(InvalidParameterError):
            SolitonSpec(c=-1.0)


class TestErrorNorms:
    def test_identical_fields(self):
        f = RealField(np.ones((16, 16)), 1.0)
        assert l2_error(f, f) == 0.0
        assert linf_error(f, f) == 0.0

    def test_constant_difference(self):
        a = RealField(np.ones((32, 32)), 1.0)
        b = RealField(np.zeros((32, 32)), 1.0)
        assert l2_error(a, b) == pytest.approx(2 * np.pi, rel=1e-14)
        assert linf_error(a, b) == 1.0

    def test_grid_mismatch(self):
        a = RealField(np.ones((16, 16)), 1.0)
        b = RealField(np.ones((32, 32)), 1.0)
        with pytest.raises(GridMismatchError):
            l2_error(a, b)
        c = RealField(np.ones((16, 16)), 2.0)
        with pytest.raises(GridMismatchError):
            linf_error(a, c)


class TestObservedOrders:
    def test_two_decades(self):
        table = ErrorTable(
            rows=[ErrorRow(64, 1e-2, 1e-2), ErrorRow(128, 1e-4, 1e-4)]
        )
        out = observed_orders(table)
        assert out.rows[0].l2_order is None
        assert out.rows[1].l2_order == pytest.approx(np.log2(100), rel=1e-12)

    def test_equal_errors_give_zero(self):
        table = ErrorTable(rows=[ErrorRow(8, 0.5, 0.25), ErrorRow(16, 0.5, 0.25)])
        out = observed_orders(table)
        assert out.rows[1].l2_order == 0.0
        assert out.rows[1].linf_order == 0.0

    def test_reported_convergence_row(self):
        # the N=64 -> N=128 step of the reference convergence table
        table = ErrorTable(
            rows=[ErrorRow(64, 6.248e-1, 5.398e-2), ErrorRow(128, 9.401e-4, 5.844e-5)]
        )
        out = observed_orders(table)
        assert out.rows[1].l2_order == pytest.approx(9.38, abs=0.01)
        assert out.rows[1].linf_order == pytest.approx(9.85, abs=0.01)

    def test_non_doubling_rejected(self):
        table = ErrorTable(rows=[ErrorRow(8, 1.0, 1.0), ErrorRow(8, 0.5, 0.5)])
        with pytest.raises(NonDoublingSequenceError):
            observed_orders(table)


class TestDriftScaling:
    def test_halving_dt_shrinks_drift_fourth_order(self):
        # momentum/Hamiltonian drift comes only from the time discretization;
        # halving dt must shrink it by roughly 2^4 (mass stays exactly 0)
        from fzk.experiments import CosineMode, RunConfig, run_simulation

        drifts = []
        for dt in (1 / 16, 1 / 32):
            cfg = RunConfig(
                n=16, t_final=10.0, l=1.0, alpha=2.0, dt=dt,
                ic=[CosineMode(0.4, 1, 0), CosineMode(0.2, 0, 1)], observe_every=10,
            )
            drifts.append(conservation_drift(run_simulation(cfg).invariants))
        (m1, p1, h1), (m2, p2, h2) = drifts
        assert m1 == 0.0 and m2 == 0.0
        assert p1 > 1e-9 and h1 > 1e-9  # well above roundoff, scaling is real
        assert 8.0 <= p1 / p2 <= 32.0
        assert 8.0 <= h1 / h2 <= 32.0


class TestConservationDrift:
    def test_constant_series(self):
        series = [InvariantRecord(t, 1.0, 2.0, -3.0) for t in (0.0, 0.5, 1.0)]
        assert conservation_drift(series) == (0.0, 0.0, 0.0)

    def test_relative_normalization(self):
        series = [
            InvariantRecord(0.0, 2.0, 10.0, -5.0),
            InvariantRecord(1.0, 2.0 + 2e-9, 10.0 + 1e-8, -5.0 - 5e-9),
        ]
        dm, dp, dh = conservation_drift(series)
        assert dm == pytest.approx(1e-9, rel=1e-6)
        assert dp == pytest.approx(1e-9, rel=1e-6)
        assert dh == pytest.approx(1e-9, rel=1e-6)

    def test_zero_initial_value_uses_floor(self):
        series = [InvariantRecord(0.0, 0.0, 1.0, 1.0), InvariantRecord(1.0, 0.0, 1.0, 1.0)]
        dm, _, _ = conservation_drift(series)
        assert dm == 0.0

    def test_empty_series_rejected(self):
        with pytest.raises(InvalidParameterError):
            conservation_drift([])
