import math

import numpy as np
import pytest

from bloch_complexity.errors import DegeneratePair, InputError, ZeroDuration
from bloch_complexity.scenarios import (
    FIXTURES,
    FamilySpec,
    analyze,
    family_axis,
    family_hamiltonian,
    fixture_evolution,
    run_fixture,
    sweep_alpha,
)
from bloch_complexity.states import BlochVector, FieldSpec, PureState, bloch_from_state

from conftest import R2

PI = math.pi
FIG5_A = BlochVector(0, -1 / R2, 1 / R2)
FIG5_B = BlochVector(0, 1 / R2, 1 / R2)


class TestFamily:
    def test_x_to_y_optimal_is_sigma_z(self):
        h = family_hamiltonian(FamilySpec(BlochVector(1, 0, 0), BlochVector(0, 1, 0), PI / 2, 2.0))
        np.testing.assert_allclose(h.at(0.0), [0, 0, 2.0], atol=1e-15)

    def test_fig5_members(self):
        np.testing.assert_allclose(family_hamiltonian(FamilySpec(FIG5_A, FIG5_B, PI / 2)).at(0), [-1, 0, 0], atol=1e-15)
        np.testing.assert_allclose(family_hamiltonian(FamilySpec(FIG5_A, FIG5_B, 0.0)).at(0), [0, 0, 1], atol=1e-15)

    @pytest.mark.parametrize("b", [(1, 0, 0), (-1, 0, 0)])
    def test_degenerate_pair(self, b):
        with pytest.raises(DegeneratePair):
            family_axis([1, 0, 0], b, 0.3)

    def test_alpha_range(self):
        with pytest.raises(InputError):
            FamilySpec(FIG5_A, FIG5_B, 4.0)

    def test_fixtures_are_consistent(self):
        """Hard-coded target amplitudes lie on the family's Bloch pair."""
        a = bloch_from_state(FIXTURES["fig5-AB-sub"].initial).array
        b = bloch_from_state(FIXTURES["fig5-AB-sub"].target).array
        np.testing.assert_allclose(a, FIG5_A.array, atol=1e-15)
        np.testing.assert_allclose(b, FIG5_B.array, atol=1e-15)


class TestFixtures:
    @pytest.mark.parametrize("name", ["fig4-AB", "fig4-BC", "fig4-CA", "fig5-AB-opt", "fig5-CD-opt"])
    def test_optimal_rows(self, name):
        r = run_fixture(name)
        assert r.eta_ge == pytest.approx(1.0, abs=1e-9)
        assert r.eta_se_min == pytest.approx(1.0, abs=1e-9)
        assert r.kappa2 == pytest.approx(0.0, abs=1e-9)
        assert r.c == pytest.approx(0.5, abs=1e-4)
        assert r.l_c == pytest.approx(PI / R2, abs=5e-4)
        assert r.travel_time == pytest.approx(PI / 4, rel=1e-9)

    @pytest.mark.parametrize("name", ["fig5-AB-sub", "fig5-CD-sub"])
    def test_sub_optimal_rows(self, name):
        r = run_fixture(name)
        assert r.eta_ge == pytest.approx(1 / R2, abs=1e-6)
        assert r.eta_se_mean == pytest.approx(1 / R2, abs=1e-6)
        assert r.kappa2 == pytest.approx(4.0, abs=1e-8)
        assert r.c == pytest.approx(0.5, abs=1e-4)
        assert r.l_c == pytest.approx(PI, abs=5e-4)
        assert r.travel_time == pytest.approx(PI / 2, rel=1e-9)

    def test_energy_scales_time_only(self):
        r1, r3 = run_fixture("fig4-BC", samples=512), run_fixture("fig4-BC", samples=512, energy=3.0)
        assert r3.travel_time == pytest.approx(r1.travel_time / 3, rel=1e-12)
        assert r3.c == pytest.approx(r1.c, abs=1e-12)
        assert r3.l_c == pytest.approx(r1.l_c, abs=1e-12)

    def test_equal_geodesic_distance_equal_complexity(self):
        cs = [run_fixture(n).c for n in ("fig4-AB", "fig4-BC", "fig4-CA")]
        assert max(cs) - min(cs) < 1e-6

    def test_equal_lengths_equal_complexity(self):
        assert abs(run_fixture("fig5-AB-sub").c - run_fixture("fig5-CD-sub").c) < 1e-6

    def test_geodesic_iff_fig_optimal(self):
        for name in FIXTURES:
            r = run_fixture(name, samples=512)
            assert (abs(r.eta_ge - 1) < 1e-9) == (not name.endswith("sub"))

    def test_unknown(self):
        with pytest.raises(KeyError, match="unknown fixture"):
            run_fixture("bogus")

    def test_volumes_per_sample(self):
        evo = fixture_evolution("fig4-AB", samples=256)
        assert len(evo.volumes) == len(evo.trajectory)
        assert evo.volumes[0] == 0.0
        assert evo.volumes[-1] == pytest.approx(PI / 4)


class TestAnalyze:
    def test_zero_duration(self):
        with pytest.raises(ZeroDuration):
            analyze(FieldSpec.constant([0, 0, 1.0]), PureState(1, 0), 0.0)

    def test_report_dict_keys(self):
        d = run_fixture("fig4-CA", samples=64).as_dict()
        for key in ("s0", "s", "travel_time", "eta_ge", "eta_se_mean", "eta_se_min", "kappa2", "v_bar", "v_max", "c", "l_c", "quadrature_error"):
            assert key in d


class TestSweep:
    def test_five_point_argmin(self):
        res = sweep_alpha(np.linspace(0, PI, 5), [1, 0, 0], [0, 1, 0], samples=256)
        assert res.argmin_alpha == pytest.approx(PI / 2)
        assert res.min_travel_time == pytest.approx(PI / 4, abs=1e-9)
        kappas = {a: r.kappa2 for a, r in res.rows}
        assert kappas[res.argmin_alpha] == pytest.approx(0.0, abs=1e-12)
        assert all(k > 0 for a, k in kappas.items() if a != res.argmin_alpha)

    def test_alpha_zero_is_fig5_sub_optimal(self):
        res = sweep_alpha([0.0], FIG5_A, FIG5_B)
        assert len(res.rows) == 1
        row = res.rows[0][1]
        ref = run_fixture("fig5-AB-sub")
        for key in ("travel_time", "s", "eta_ge", "kappa2", "v_bar", "v_max", "c", "l_c"):
            assert getattr(row, key) == pytest.approx(getattr(ref, key), abs=1e-12)

    def test_rows_sorted_and_thread_independent(self):
        alphas = [2.0, 0.5, 1.0, 0.1]
        serial = sweep_alpha(alphas, FIG5_A, FIG5_B, samples=128)
        threaded = sweep_alpha(alphas, FIG5_A, FIG5_B, samples=128, jobs=3)
        assert [a for a, _ in serial.rows] == sorted(alphas)
        assert serial.rows == threaded.rows

    def test_reachable_everywhere(self):
        """The family keeps a.n = b.n, so every member reaches the target."""
        res = sweep_alpha(np.linspace(0, PI, 9), [0.6, 0.8, 0], [0, 0.28, 0.96], samples=128)
        times = [r.travel_time for _, r in res.rows]
        assert all(0 < t < PI + 1e-9 for t in times)

    def test_empty(self):
        with pytest.raises(InputError):
            sweep_alpha([], [1, 0, 0], [0, 1, 0])
