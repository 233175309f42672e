"""Lengths and efficiencies of a trajectory."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DegenerateEvolution, GridTooCoarse, ZeroHamiltonian
from .quadrature import Estimate, simpson_estimate
from .states import PAULI, BlochVector, FieldSpec, PureState, Trajectory, _as_vec3, fs_geodesic_distance

LENGTH_RTOL = 1e-6
DEGENERATE_LENGTH = 1e-12


@dataclass(frozen=True)
class EfficiencyProfile:
    s0: float
    s: float
    eta_ge: float
    eta_se_samples: np.ndarray
    s_error: float = 0.0

    @property
    def eta_se_min(self) -> float:
        return float(np.min(self.eta_se_samples))

    @property
    def eta_se_max(self) -> float:
        return float(np.max(self.eta_se_samples))

    @property
    def eta_se_mean(self) -> float:
        return float(np.mean(self.eta_se_samples))

    @property
    def excess_length(self) -> float:
        return self.s - self.s0


def energy_uncertainty(field: FieldSpec, a, t: float = 0.0) -> float:
    """Delta E = sqrt(|h|^2 - (a.h)^2), independent of h0.

    Evaluated as |a x h|, which equals the above for unit a without the
    cancellation near eigenstates.
    """
    return float(np.linalg.norm(np.cross(_as_vec3(a), field.at(t))))


def _energy_uncertainty_samples(traj: Trajectory, field: FieldSpec) -> np.ndarray:
    if field.stationary:
        h = np.broadcast_to(field.at(0.0), traj.bloch.shape)
    else:
        h = np.array([field.at(t) for t in traj.times])
    return np.linalg.norm(np.cross(traj.bloch, h), axis=1)


def path_length(traj: Trajectory, field: FieldSpec) -> Estimate:
    """s = integral of 2 Delta E dt over the trajectory (Simpson, two-grid error).

    Raises GridTooCoarse when the two grids disagree by more than 1e-6
    relative.
    """
    if len(traj) < 2:
        return Estimate(0.0, 0.0)
    est = simpson_estimate(2.0 * _energy_uncertainty_samples(traj, field), traj.times)
    if est.error > LENGTH_RTOL * abs(est.value) + 1e-14:
        raise GridTooCoarse(f"path length {est.value:.6g} uncertain by {est.error:.3g}")
    return est


def geodesic_efficiency(a: PureState, b: PureState, traj: Trajectory, field: FieldSpec) -> float:
    s0 = fs_geodesic_distance(a, b)
    s = path_length(traj, field).value
    return _ratio(s0, s)


def _ratio(s0: float, s: float) -> float:
    if s < DEGENERATE_LENGTH:
        if s0 < DEGENERATE_LENGTH:
            return 1.0
        raise DegenerateEvolution(f"path length {s:.3g} but endpoints are {s0:.3g} apart")
    return s0 / s


def speed_efficiency(field: FieldSpec, a, t: float = 0.0) -> float:
    """Delta E over the spectral norm |h0| + |h|; lies in [0, 1]."""
    denom = spectral_norm(field, t)
    if denom == 0.0:
        raise ZeroHamiltonian("H = 0 has no speed efficiency")
    return min(energy_uncertainty(field, a, t) / denom, 1.0)


def spectral_norm(field: FieldSpec, t: float = 0.0) -> float:
    """Largest singular value of h0 1 + h.sigma, i.e. |h0| + |h|."""
    hn = field.norm(t)
    return max(abs(field.h0 + hn), abs(field.h0 - hn))


def efficiency_profile(traj: Trajectory, field: FieldSpec) -> EfficiencyProfile:
    a, b = traj.state(0), traj.state(len(traj) - 1)
    s0 = fs_geodesic_distance(a, b)
    length = path_length(traj, field)
    dE = _energy_uncertainty_samples(traj, field)
    if field.stationary:
        norms = np.full(len(traj), spectral_norm(field, 0.0))
    else:
        norms = np.array([spectral_norm(field, t) for t in traj.times])
    if np.any(norms == 0.0):
        raise ZeroHamiltonian("H = 0 has no speed efficiency")
    eta_se = np.minimum(dE / norms, 1.0)
    return EfficiencyProfile(s0, length.value, _ratio(s0, length.value), eta_se, length.error)


# ---------------------------------------------------------------------------
# unit-speed-efficiency generator of a prescribed path
# ---------------------------------------------------------------------------


def parallel_transport(traj: Trajectory) -> np.ndarray:
    """Amplitudes rephased so that <m|dm/dt> = 0 along the path.

    The phase integral of <psi|d psi/dt> is accumulated from the arguments of
    consecutive overlaps, which also absorbs arbitrary per-sample global
    phases in the input.
    """
    psi = np.asarray(traj.states, dtype=complex)
    ov = np.einsum("ij,ij->i", np.conj(psi[:-1]), psi[1:])
    phase = np.concatenate([[0.0], np.cumsum(np.angle(ov))])
    return psi * np.exp(-1j * phase)[:, None]


def unit_efficiency_hamiltonian(path: Trajectory, residual_tol: float = 1e-6) -> FieldSpec:
    """Traceless field that drives ``path`` with unit speed efficiency.

    Builds H = i|dm><m| - i|m><dm| from the parallel-transported path |m>,
    differentiated by second-order central differences, and interpolates the
    sampled Pauli components with cubic splines.
    """
    t = np.asarray(path.times, dtype=float)
    m = parallel_transport(path)
    dm = np.gradient(m, t, axis=0, edge_order=2)
    residual = np.abs(np.einsum("ij,ij->i", np.conj(m), dm))
    scale = max(1.0, float(np.max(np.linalg.norm(dm, axis=1))))
    if np.max(residual[1:-1], initial=0.0) > residual_tol * scale:
        raise GridTooCoarse(f"parallel-transport residual {np.max(residual):.3g} exceeds {residual_tol}")
    H = 1j * (np.einsum("ni,nj->nij", dm, np.conj(m)) - np.einsum("ni,nj->nij", m, np.conj(dm)))
    h = 0.5 * np.einsum("nij,kji->nk", H, PAULI).real
    spline = CubicSpline(t, h, axis=0)
    rate = spline.derivative()
    return FieldSpec(field=lambda tt: spline(tt), h0=0.0, stationary=False, field_rate=lambda tt: rate(tt))
