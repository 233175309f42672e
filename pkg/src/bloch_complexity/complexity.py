"""Accessed and accessible volumes, complexity C and its length scale.

Volumes are measured on the unwrapped angles with the density
sqrt(g) = |sin theta| / 4. When the track degenerates to a meridian or a
parallel, the 2D measure vanishes and the line measures (1/2) d theta and
(1/2) sin(theta) d phi are used instead.

The accessed region at time t is the union of the rectangles spanned by the
start point and every point visited so far. On monotone tracks this is the
rectangle between the start and the current point.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import MaximalComplexity, PointTrajectory, ZeroDuration
from .quadrature import Estimate, simpson_estimate
from .states import AngleTrack

SHAPE_EPS = 1e-9
TOTAL_VOLUME = math.pi  # area of the full (theta, phi) chart in the sin/4 density


class Shape(str, enum.Enum):
    AREA = "Area2D"
    MERIDIAN = "MeridianLine"
    PARALLEL = "ParallelLine"
    POINT = "Point"


@dataclass(frozen=True)
class VolumeReport:
    v_bar: float
    v_max: float
    shape: Shape
    theta_range: tuple[float, float]
    phi_range: tuple[float, float]
    quadrature_error: float = 0.0


@dataclass(frozen=True)
class ComplexityReport:
    c: float
    l_c: float
    s: float
    volume: VolumeReport


def classify_shape(track: AngleTrack, eps: float = SHAPE_EPS) -> Shape:
    d_theta = float(np.ptp(track.theta_u)) if len(track.times) else 0.0
    d_phi = float(np.ptp(track.phi_u)) if len(track.times) else 0.0
    if d_theta < eps and d_phi < eps:
        return Shape.POINT
    if d_phi < eps:
        return Shape.MERIDIAN
    if d_theta < eps:
        return Shape.PARALLEL
    return Shape.AREA


def sin_measure(theta):
    """Antiderivative of |sin theta|; continuous and non-decreasing."""
    theta = np.asarray(theta, dtype=float)
    k = np.floor(theta / math.pi)
    return 2.0 * k + 1.0 - np.cos(theta - k * math.pi)


class _Staircase:
    """Union area of rectangles [0, u] x [0, v] with u, v >= 0."""

    def __init__(self):
        self.us: list[float] = []  # ascending
        self.vs: list[float] = []  # descending, paired with us
        self.area = 0.0

    def add(self, u: float, v: float) -> float:
        if u <= 0.0 or v <= 0.0:
            return self.area
        i = bisect.bisect_left(self.us, u)
        if i < len(self.us) and self.vs[i] >= v:
            return self.area  # dominated
        j = i
        while j > 0 and self.vs[j - 1] <= v:
            j -= 1
        k = i + 1 if i < len(self.us) and self.us[i] == u else i
        self.us[j:k] = [u]
        self.vs[j:k] = [v]
        prev = 0.0
        area = 0.0
        for uu, vv in zip(self.us, self.vs):
            area += (uu - prev) * vv
            prev = uu
        self.area = area
        return area


def _union_area(du: np.ndarray, dv: np.ndarray) -> np.ndarray:
    """Running union area of anchored rectangles, one per sample."""
    quads = {}
    out = np.empty(len(du))
    total = 0.0
    for i, (u, v) in enumerate(zip(du, dv)):
        key = (u >= 0.0, v >= 0.0)
        stair = quads.get(key)
        if stair is None:
            stair = quads[key] = _Staircase()
        before = stair.area
        total += stair.add(abs(u), abs(v)) - before
        out[i] = total
    return out


def _union_length(d: np.ndarray) -> np.ndarray:
    """Running length of the union of intervals [0, d_i]."""
    hi = np.maximum.accumulate(np.maximum(d, 0.0))
    lo = np.minimum.accumulate(np.minimum(d, 0.0))
    return hi - lo


def volume_profile(track: AngleTrack, shape: Shape | None = None) -> np.ndarray:
    """Instantaneous accessed volume V at every sample of the track."""
    shape = shape or classify_shape(track)
    theta, phi = np.asarray(track.theta_u), np.asarray(track.phi_u)
    if shape is Shape.POINT:
        return np.zeros(len(theta))
    if shape is Shape.MERIDIAN:
        return 0.5 * _union_length(theta - theta[0])
    if shape is Shape.PARALLEL:
        return 0.5 * abs(math.sin(float(np.mean(theta)))) * _union_length(phi - phi[0])
    g = sin_measure(theta)
    return 0.25 * _union_area(g - g[0], phi - phi[0])


def instantaneous_volume(track: AngleTrack, t: float) -> float:
    """Accessed volume at time ``t``, interpolating the track between samples."""
    times = np.asarray(track.times)
    if not (times[0] <= t <= times[-1]):
        raise ValueError(f"t={t} outside the track range [{times[0]}, {times[-1]}]")
    shape = classify_shape(track)
    k = int(np.searchsorted(times, t, side="right"))
    th = np.append(track.theta_u[:k], np.interp(t, times, track.theta_u))
    ph = np.append(track.phi_u[:k], np.interp(t, times, track.phi_u))
    sub = AngleTrack(np.append(times[:k], t), th, ph)
    return float(volume_profile(sub, shape)[-1])


def accessed_volume_estimate(track: AngleTrack) -> Estimate:
    duration = track.duration if len(track.times) else 0.0
    if duration <= 0.0:
        raise ZeroDuration("accessed volume needs a positive duration")
    est = simpson_estimate(volume_profile(track), track.times)
    return Estimate(est.value / duration, est.error / duration)


def accessed_volume(track: AngleTrack) -> float:
    """Time average of the instantaneous accessed volume."""
    return accessed_volume_estimate(track).value


def accessible_volume(track: AngleTrack) -> float:
    """Measure of the bounding box of the unwrapped track."""
    shape = classify_shape(track)
    theta, phi = np.asarray(track.theta_u), np.asarray(track.phi_u)
    if shape is Shape.POINT:
        return 0.0
    if shape is Shape.MERIDIAN:
        return 0.5 * float(np.ptp(theta))
    if shape is Shape.PARALLEL:
        return 0.5 * abs(math.sin(float(np.mean(theta)))) * float(np.ptp(phi))
    g = sin_measure(np.array([theta.min(), theta.max()]))
    return 0.25 * float(g[1] - g[0]) * float(np.ptp(phi))


def volume_report(track: AngleTrack) -> VolumeReport:
    est = accessed_volume_estimate(track)
    return VolumeReport(
        v_bar=est.value,
        v_max=accessible_volume(track),
        shape=classify_shape(track),
        theta_range=(float(np.min(track.theta_u)), float(np.max(track.theta_u))),
        phi_range=(float(np.min(track.phi_u)), float(np.max(track.phi_u))),
        quadrature_error=est.error,
    )


def complexity(v_bar: float, v_max: float) -> float:
    """(V_max - V_bar) / V_max, clipped to [0, 1]."""
    if v_max <= 1e-15:
        raise PointTrajectory("complexity is undefined for a motionless state")
    return min(max((v_max - v_bar) / v_max, 0.0), 1.0)


def complexity_length_scale(s: float, c: float) -> float:
    """s / sqrt(1 - C), equivalently s / sqrt(V_bar / V_max)."""
    if c >= 1.0 - 1e-12:
        raise MaximalComplexity("length scale diverges as C -> 1")
    if c < 0.0 or s < 0.0:
        raise ValueError("need C >= 0 and s >= 0")
    return s / math.sqrt(1.0 - c)


def complexity_report(track: AngleTrack, s: float) -> ComplexityReport:
    vol = volume_report(track)
    c = complexity(vol.v_bar, vol.v_max)
    return ComplexityReport(c=c, l_c=complexity_length_scale(s, c), s=s, volume=vol)
