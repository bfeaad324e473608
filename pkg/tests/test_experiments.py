"""Experiment harness: runs, studies, and the oracle self-check."""

import numpy as np
import pytest

from fzk.diagnostics import SolitonSpec
from fzk.errors import (
    InvalidParameterError,
    NonDoublingSequenceError,
    OracleSizeError,
    ZeroFieldError,
)
from fzk.experiments import (
    ConstantField,
    CosineMode,
    RunConfig,
    convergence_study,
    initial_field,
    oracle_check,
    peak_positions,
    run_simulation,
    soliton_interaction_study,
    temporal_order_study,
)
from fzk.grid import grid_points


def quiet_cfg(**kw):
    base = dict(n=8, t_final=0.5, l=1.0, alpha=2.0, dt=0.01, observe_every=10**9)
    base.update(kw)
    return RunConfig(**base)


class TestInitialField:
    def test_empty_list_is_zero(self):
        f = initial_field([], 16, 1.0)
        assert np.all(f.values == 0.0)

    def test_superposition(self):
        f = initial_field([ConstantField(1.5), CosineMode(0.5, 1, 0)], 32, 1.0)
        x = grid_points(32, 1.0)
        X, _ = np.meshgrid(x, x, indexing="ij")
        assert np.allclose(f.values, 1.5 + 0.5 * np.cos(X), atol=1e-15)

    def test_two_soliton_superposition_peaks(self):
        # the reference two-soliton setup: amplitudes 1.5 and 0.6 at the
        # configured centers
        ic = [SolitonSpec(c=0.5, x0=-15.0), SolitonSpec(c=0.2, x0=0.0)]
        f = initial_field(ic, 540, 20.0)
        peaks = peak_positions(f, min_height=0.1, min_separation=5.0)
        assert len(peaks) == 2
        (p1, h1), (p2, h2) = peaks
        assert h1 == pytest.approx(1.5, rel=0.01)
        assert p1 == pytest.approx(-15.0, abs=0.2)
        assert h2 == pytest.approx(0.6, rel=0.02)
        assert p2 == pytest.approx(0.0, abs=0.2)

    def test_unknown_component_rejected(self):
        with pytest.raises(InvalidParameterError):
            initial_field([object()], 16, 1.0)


class TestRunSimulation:
    def test_zero_initial_data(self):
        res = run_simulation(quiet_cfg(ic=[]))
        assert np.all(res.final.u.coeffs == 0.0)
        assert all(r.mass == r.momentum == r.hamiltonian == 0.0 for r in res.invariants)

    def test_constant_initial_data_is_steady(self):
        res = run_simulation(quiet_cfg(ic=[ConstantField(2.0)]))
        N = res.disc.N
        assert res.final.u.coeffs[N, N] == pytest.approx(2.0, abs=1e-13)
        off = res.final.u.coeffs.copy()
        off[N, N] = 0.0
        assert np.max(np.abs(off)) < 1e-13

    def test_auto_dt_requires_nonzero_field(self):
        with pytest.raises(ZeroFieldError):
            run_simulation(quiet_cfg(ic=[], dt="auto"))

    def test_snapshots_at_requested_times(self):
        cfg = quiet_cfg(ic=[CosineMode(0.3, 1, 0)], snapshot_times=(0.25, 0.5), observe_every=7)
        res = run_simulation(cfg)
        times = [t for t, _ in res.snapshots]
        assert times == [0.25, 0.5]
        observed = [r.t for r in res.invariants]
        assert set(times) <= set(observed)

    def test_timings_present(self):
        res = run_simulation(quiet_cfg(ic=[CosineMode(0.2, 1, 0)]))
        assert set(res.timings) == {"setup_s", "stepping_s", "diagnostics_s"}


class TestConvergenceStudy:
    def test_non_doubling_rejected(self):
        cfg = quiet_cfg(ic=[SolitonSpec(c=1.0)], l=20.0)
        with pytest.raises(NonDoublingSequenceError):
            convergence_study(cfg, [16, 16])
        with pytest.raises(NonDoublingSequenceError):
            convergence_study(cfg, [16, 48])
        with pytest.raises(NonDoublingSequenceError):
            convergence_study(cfg, [16])

    def test_exact_solution_path_decreasing_errors(self):
        cfg = RunConfig(
            n=16, t_final=0.2, l=20.0, alpha=2.0, dt="auto",
            ic=[SolitonSpec(c=1.0)], observe_every=10**9,
        )
        table = convergence_study(cfg, [16, 32, 64])
        assert [row.n for row in table.rows] == [16, 32, 64]
        errs = [row.l2_error for row in table.rows]
        assert errs[0] > errs[1] > errs[2]
        linfs = [row.linf_error for row in table.rows]
        assert linfs[0] > linfs[1] > linfs[2]
        assert table.rows[1].l2_order is not None

    def test_self_convergence_path_for_fractional_order(self):
        cfg = RunConfig(
            n=16, t_final=0.2, l=20.0, alpha=1.5, dt="auto",
            ic=[SolitonSpec(c=1.0)], observe_every=10**9,
        )
        table = convergence_study(cfg, [16, 32, 64])
        # finest resolution serves as reference and has no row
        assert [row.n for row in table.rows] == [16, 32]
        assert table.rows[0].l2_error > table.rows[1].l2_error

    def test_determinism(self):
        cfg = RunConfig(
            n=8, t_final=0.1, l=20.0, alpha=2.0, dt="auto",
            ic=[SolitonSpec(c=1.0)], observe_every=10**9,
        )
        t1 = convergence_study(cfg, [8, 16])
        t2 = convergence_study(cfg, [8, 16])
        assert t1 == t2  # bit-identical rows


class TestTemporalOrderStudy:
    def test_single_dt_gives_empty_list(self):
        cfg = quiet_cfg(ic=[CosineMode(0.4, 1, 0)])
        assert temporal_order_study(cfg, [0.01]) == []

    def test_non_halving_rejected(self):
        cfg = quiet_cfg(ic=[CosineMode(0.4, 1, 0)])
        with pytest.raises(NonDoublingSequenceError):
            temporal_order_study(cfg, [0.01, 0.004])

    def test_fourth_order_band(self):
        cfg = RunConfig(
            n=16, t_final=1.0, l=1.0, alpha=2.0, dt=0.05,
            ic=[CosineMode(0.4, 1, 0), CosineMode(0.2, 0, 1)], observe_every=10**9,
        )
        rows = temporal_order_study(cfg, [1 / 40, 1 / 80, 1 / 160, 1 / 320])
        assert len(rows) == 3
        assert rows[0].order is None
        for row in rows[1:]:
            assert 3.7 <= row.order <= 4.3


class TestSolitonInteractionStudy:
    def test_single_soliton_rejected(self):
        cfg = quiet_cfg(ic=[SolitonSpec(c=0.5)], l=20.0)
        with pytest.raises(InvalidParameterError):
            soliton_interaction_study(cfg)

    def test_non_soliton_components_rejected(self):
        cfg = quiet_cfg(ic=[SolitonSpec(c=0.5), ConstantField(0.1)], l=20.0)
        with pytest.raises(InvalidParameterError):
            soliton_interaction_study(cfg)

    def test_runs_come_back_in_alpha_order(self):
        ic = [SolitonSpec(c=0.5, x0=12.0), SolitonSpec(c=0.2, x0=0.0)]
        cfg = RunConfig(
            n=16, t_final=0.1, l=20.0, alpha=2.0, dt="auto", ic=ic, observe_every=10**9
        )
        runs = soliton_interaction_study(cfg, alphas=(1.5, 2.0))
        assert [a for a, _ in runs] == [1.5, 2.0]
        for _, res in runs:
            assert res.final.t == pytest.approx(0.1)


class TestOracleCheck:
    def test_zero_trials(self):
        assert oracle_check(8, 0) == 0.0

    def test_size_guard(self):
        with pytest.raises(OracleSizeError):
            oracle_check(32, 1)

    def test_small_sweep_within_tolerance(self):
        assert oracle_check(4, 10, seed=123) <= 1e-12

    def test_seed_determinism(self):
        a = oracle_check(4, 5, seed=7)
        b = oracle_check(4, 5, seed=7)
        assert a == b


class TestPeakPositions:
    def test_finds_subgrid_maximum(self):
        from fzk.diagnostics import exact_soliton

        f = exact_soliton(SolitonSpec(c=1.0, x0=3.3), 0.0, 270, 20.0)
        peaks = peak_positions(f)
        assert len(peaks) == 1
        pos, height = peaks[0]
        assert pos == pytest.approx(3.3, abs=0.05)
        assert height == pytest.approx(3.0, rel=0.01)
