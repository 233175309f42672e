"""Curvature coefficient kappa^2 of a qubit evolution.

Two closed forms in terms of the Bloch vector a and the field h (stationary
and time-varying), plus an independent evaluation from expectation values of
the normalized Hamiltonian fluctuation operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EigenstateSingularity, MissingFieldRate
from .propagation import evolve
from .states import IDENTITY, PAULI, FieldSpec, PureState, Trajectory, _as_vec3

SINGULAR_RTOL = 1e-14
ORACLE_STEP = 1e-5


@dataclass(frozen=True)
class CurvatureSample:
    t: float
    kappa2: float

    def __post_init__(self):
        if self.kappa2 < -1e-9:
            raise ValueError(f"negative curvature {self.kappa2!r}")
        if self.kappa2 < 0:
            object.__setattr__(self, "kappa2", 0.0)


def _transverse(a: np.ndarray, h: np.ndarray) -> tuple[float, float, float]:
    ah = float(a @ h)
    hh = float(h @ h)
    c = np.cross(a, h)
    denom = float(c @ c)  # |h|^2 - (a.h)^2 for unit a
    if denom < SINGULAR_RTOL * hh or hh == 0.0:
        raise EigenstateSingularity("state is an eigenstate of the field; curvature undefined")
    return ah, hh, denom


def curvature_stationary(a, field: FieldSpec, t: float = 0.0) -> float:
    """4 (a.h)^2 / (h^2 - (a.h)^2)."""
    ah, _, denom = _transverse(_as_vec3(a), field.at(t))
    return 4.0 * ah * ah / denom


def curvature_timevarying(a, field: FieldSpec, t: float = 0.0) -> float:
    a = _as_vec3(a)
    h = field.at(t)
    hdot = field.rate(t)
    if hdot is None:
        raise MissingFieldRate("time-varying curvature needs dh/dt")
    ah, hh, denom = _transverse(a, h)
    first = 4.0 * ah * ah / denom
    mixed = float(a @ hdot) * h - ah * hdot
    hx = np.cross(h, hdot)  # |h|^2 |hdot|^2 - (h.hdot)^2
    second = (float(hx @ hx) - float(mixed @ mixed)) / denom**3
    third = 4.0 * ah * float(a @ hx) / denom**2
    return first + second + third


def _expect(op: np.ndarray, psi: np.ndarray) -> complex:
    return complex(np.conj(psi) @ op @ psi)


def _fluctuation(field: FieldSpec, psi: np.ndarray, t: float) -> tuple[np.ndarray, float]:
    """Delta h = (H - <H>) / Delta E and Delta E at time t."""
    H = np.tensordot(field.at(t), PAULI, axes=1)  # h0 cancels
    mean = _expect(H, psi).real
    var = _expect(H @ H, psi).real - mean * mean
    hn = field.norm(t)
    if var <= 0.0 or np.sqrt(var) < 1e-12 * hn or hn == 0.0:
        raise EigenstateSingularity("Delta E vanishes; curvature undefined")
    dE = float(np.sqrt(var))
    return (H - mean * IDENTITY) / dE, dE


def _state_at(traj: Trajectory, field: FieldSpec, t: float) -> PureState:
    i = int(np.argmin(np.abs(traj.times - t)))
    psi = traj.state(i)
    if traj.times[i] == t:
        return psi
    return evolve(field, psi, float(traj.times[i]), t)


def curvature_oracle_complex(field: FieldSpec, traj: Trajectory, t: float) -> complex:
    """<dh^4> - <dh^2>^2 + [<dh'^2> - <dh'>^2] + i <[dh^2, dh']>, unrounded.

    dh' is the arc-length derivative of dh, taken as a central difference in
    time divided by the speed Delta E. The imaginary part is a numerical
    residue that should vanish.
    """
    psi = _state_at(traj, field, t)
    vec = psi.vector
    dh, dE = _fluctuation(field, vec, t)
    dh2 = dh @ dh
    value = _expect(dh2 @ dh2, vec) - _expect(dh2, vec) ** 2
    if field.stationary:
        return value
    step = ORACLE_STEP / max(field.norm(t), 1e-300)
    plus, _ = _fluctuation(field, evolve(field, psi, t, t + step, step).vector, t + step)
    minus, _ = _fluctuation(field, evolve(field, psi, t, t - step, step).vector, t - step)
    dh_s = (plus - minus) / (2.0 * step) / dE
    value += _expect(dh_s @ dh_s, vec) - _expect(dh_s, vec) ** 2
    value += 1j * _expect(dh2 @ dh_s - dh_s @ dh2, vec)
    return value


def curvature_oracle(field: FieldSpec, traj: Trajectory, t: float) -> float:
    return float(curvature_oracle_complex(field, traj, t).real)


def curvature_profile(traj: Trajectory, field: FieldSpec) -> list[CurvatureSample]:
    """kappa^2 at every sample, from the Bloch-vector formulas."""
    if field.stationary:
        h = field.at(0.0)
        ah = traj.bloch @ h
        hh = float(h @ h)
        c = np.cross(traj.bloch, h)
        denom = np.einsum("ij,ij->i", c, c)
        if hh == 0.0 or np.any(denom < SINGULAR_RTOL * hh):
            raise EigenstateSingularity("state is an eigenstate of the field; curvature undefined")
        values = 4.0 * ah * ah / denom
    else:
        values = [curvature_timevarying(a, field, float(t)) for t, a in zip(traj.times, traj.bloch)]
    return [CurvatureSample(float(t), float(k)) for t, k in zip(traj.times, values)]
