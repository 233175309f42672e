import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from bloch_complexity.complexity import (
    TOTAL_VOLUME,
    Shape,
    _union_area,
    accessed_volume,
    accessible_volume,
    classify_shape,
    complexity,
    complexity_length_scale,
    complexity_report,
    instantaneous_volume,
    sin_measure,
    volume_profile,
)
from bloch_complexity.errors import MaximalComplexity, PointTrajectory, ZeroDuration
from bloch_complexity.propagation import PropagationConfig, trajectory
from bloch_complexity.states import AngleTrack, FieldSpec, PureState

from conftest import M, P, R2

E = 1.0
PI = math.pi


def track(field, psi, t_end, samples=4096):
    return trajectory(FieldSpec.constant(field), psi, t_end, PropagationConfig(samples=samples)).angles


EQUATOR = PureState(1 / R2, 1 / R2)


class TestShape:
    def test_equator_is_parallel(self):
        assert classify_shape(track([0, 0, E], EQUATOR, PI / 4, 64)) is Shape.PARALLEL

    def test_meridian(self):
        assert classify_shape(track([E, 0, 0], PureState(1 / R2, 1j / R2), PI / 4, 64)) is Shape.MERIDIAN

    def test_eigenstate_is_point(self):
        assert classify_shape(track([0, 0, E], PureState(1, 0), 1.0, 64)) is Shape.POINT

    def test_generic_is_area(self):
        assert classify_shape(track([1, 0.5, 0.3], PureState(P, -1j * M), 1.0, 64)) is Shape.AREA


class TestInstantaneous:
    def test_equator_ramp(self):
        tr = track([0, 0, E], EQUATOR, PI / 4)
        for t in (0.0, 0.1, 0.5, PI / 4):
            assert instantaneous_volume(tr, t) == pytest.approx(E * t, abs=1e-12)

    def test_pole_crossing_endpoint(self):
        tr = track([-E, 0, 0], PureState(M, 1j * P), PI / (4 * E))
        assert instantaneous_volume(tr, PI / (4 * E)) == pytest.approx(PI / 4, abs=1e-12)

    def test_outside_range(self):
        tr = track([0, 0, E], EQUATOR, 1.0, 16)
        with pytest.raises(ValueError):
            instantaneous_volume(tr, 1.5)


class TestVolumes:
    @pytest.mark.parametrize(
        "field, psi",
        [([0, 0, E], PureState(1 / R2, 1 / R2)), ([E, 0, 0], PureState(1 / R2, 1j / R2)), ([0, E, 0], PureState(1, 0))],
    )
    def test_optimal_quarter_turns(self, field, psi):
        tr = track(field, psi, PI / (4 * E))
        assert accessed_volume(tr) == pytest.approx(PI / 8, abs=1e-9)
        assert accessible_volume(tr) == pytest.approx(PI / 4, abs=1e-12)

    def test_sub_optimal_upper(self):
        tr = track([0, 0, E], PureState(P, -1j * M), PI / (2 * E))
        assert accessed_volume(tr) == pytest.approx(PI / (4 * R2), abs=1e-9)
        assert accessible_volume(tr) == pytest.approx(R2 * PI / 4, abs=1e-12)

    def test_sub_optimal_lower(self):
        tr = track([0, 0, -E], PureState(M, 1j * P), PI / (2 * E))
        assert accessible_volume(tr) == pytest.approx(PI / (2 * R2), abs=1e-12)

    def test_eigenstate(self):
        tr = track([0, 0, E], PureState(0, 1), 1.0, 64)
        assert accessed_volume(tr) == 0.0
        assert accessible_volume(tr) == 0.0
        with pytest.raises(PointTrajectory):
            complexity_report(tr, 0.0)

    def test_zero_duration(self):
        with pytest.raises(ZeroDuration):
            accessed_volume(AngleTrack(np.array([0.0]), np.array([1.0]), np.array([0.0])))

    def test_sin_measure_is_monotone_antiderivative(self, rng):
        th = np.linspace(-7, 9, 4001)
        assert np.all(np.diff(sin_measure(th)) >= 0)
        for lo, hi in np.sort(rng.uniform(-7, 9, size=(20, 2)), axis=1):
            pts = [k * PI for k in range(math.ceil(lo / PI), math.floor(hi / PI) + 1)]
            want = quad(lambda x: abs(math.sin(x)), lo, hi, points=pts or None)[0]
            assert sin_measure(hi) - sin_measure(lo) == pytest.approx(want, abs=1e-10)

    def test_total_volume(self):
        assert 0.25 * (sin_measure(PI) - sin_measure(0.0)) * 2 * PI == pytest.approx(TOTAL_VOLUME)

    def test_backtracking_counts_union(self):
        """phi going 0 -> 1 -> -1 -> 0 at fixed theta: union length 2."""
        t = np.linspace(0, 4, 401)
        phi = np.interp(t, [0, 1, 3, 4], [0, 1, -1, 0])
        tr = AngleTrack(t, np.full_like(t, PI / 2), phi)
        v = volume_profile(tr)
        assert v[-1] == pytest.approx(0.5 * 2.0)
        assert np.all(np.diff(v) >= 0)

    def test_union_area_two_quadrants(self):
        du = np.array([0.0, 1.0, 2.0, -1.0])
        dv = np.array([0.0, 2.0, 1.0, -1.0])
        np.testing.assert_allclose(_union_area(du, dv), [0, 2, 3, 4])

    @settings(max_examples=50)
    @given(st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3)), min_size=1, max_size=30))
    def test_union_area_against_raster(self, pts):
        """Compare with the union measured cell by cell on the compressed grid."""
        du = np.array([0.0] + [p[0] for p in pts])
        dv = np.array([0.0] + [p[1] for p in pts])
        got = _union_area(du, dv)[-1]
        xs = np.unique(np.concatenate([du, [0.0]]))
        ys = np.unique(np.concatenate([dv, [0.0]]))
        area = 0.0
        for x0, x1 in zip(xs[:-1], xs[1:]):
            for y0, y1 in zip(ys[:-1], ys[1:]):
                cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
                covered = np.any((np.minimum(0, du) <= cx) & (cx <= np.maximum(0, du)) & (np.minimum(0, dv) <= cy) & (cy <= np.maximum(0, dv)))
                area += covered * (x1 - x0) * (y1 - y0)
        assert got == pytest.approx(area, abs=1e-9)

    @settings(max_examples=40)
    @given(st.floats(0.05, 0.95), st.floats(-1, 1), st.floats(-1, 1), st.floats(0.2, 1.0))
    def test_accessed_inside_accessible(self, frac, hx, hy, hz):
        tr = track([hx, hy, hz], PureState(P, -1j * M), frac * PI / math.sqrt(hx**2 + hy**2 + hz**2), 256)
        assert accessed_volume(tr) <= accessible_volume(tr) + 1e-6


class TestComplexity:
    def test_table_values(self):
        assert complexity(PI / 8, PI / 4) == pytest.approx(0.5)
        assert complexity(PI / (4 * R2), R2 * PI / 4) == pytest.approx(0.5)
        assert complexity(1.0, 1.0) == 0.0

    def test_length_scale(self):
        assert complexity_length_scale(PI / 2, 0.5) == pytest.approx(PI / R2)
        assert complexity_length_scale(PI / R2, 0.5) == pytest.approx(PI)
        assert complexity_length_scale(1.3, 0.0) == 1.3

    def test_length_scale_forms_agree(self):
        v_bar, v_max, s = 0.3, 0.7, 2.0
        c = complexity(v_bar, v_max)
        assert complexity_length_scale(s, c) == pytest.approx(s / math.sqrt(v_bar / v_max))

    def test_maximal(self):
        with pytest.raises(MaximalComplexity):
            complexity_length_scale(1.0, 1.0)

    @pytest.mark.parametrize("t_end", [PI / 8, PI / 4, PI / 2])
    def test_uniform_precession_half(self, t_end):
        tr = track([0, 0, E], EQUATOR, t_end)
        rep = complexity_report(tr, 2 * E * t_end)
        assert rep.c == pytest.approx(0.5, abs=1e-9)
        assert rep.l_c >= rep.s

    def test_longer_run_grows_volumes(self):
        short = track([0, 0, E], EQUATOR, PI / 8)
        long = track([0, 0, E], EQUATOR, PI / 4)
        assert accessed_volume(long) > accessed_volume(short)
        assert accessible_volume(long) > accessible_volume(short)
