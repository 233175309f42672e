"""Pure qubit states and their amplitude, Bloch-vector and angle forms.

Conventions used throughout the package:

* hbar = 1, so field strengths and energies carry units of inverse time.
* H(t) = h0 * 1 + h(t) . sigma and the Bloch vector obeys da/dt = 2 h x a.
* Canonical angles are theta in [0, pi] and phi in [0, 2 pi); at the poles
  phi is set to 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import InputError

TWO_PI = 2.0 * math.pi
POLE_TOL = 1e-12
NORM_TOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([PAULI_X, PAULI_Y, PAULI_Z])
IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class PureState:
    """Normalized qubit state c0|0> + c1|1>."""

    c0: complex
    c1: complex

    def __post_init__(self):
        object.__setattr__(self, "c0", complex(self.c0))
        object.__setattr__(self, "c1", complex(self.c1))
        norm2 = abs(self.c0) ** 2 + abs(self.c1) ** 2
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InputError(f"state is not normalized (|c0|^2+|c1|^2 = {norm2!r})")

    @classmethod
    def from_vector(cls, vec, normalize: bool = False) -> "PureState":
        vec = np.asarray(vec, dtype=complex).reshape(2)
        if normalize:
            n = np.linalg.norm(vec)
            if n == 0:
                raise InputError("cannot normalize the zero vector")
            vec = vec / n
        return cls(vec[0], vec[1])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c0, self.c1], dtype=complex)

    def overlap(self, other: "PureState") -> complex:
        """<self|other>."""
        return self.c0.conjugate() * other.c0 + self.c1.conjugate() * other.c1


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, arr) -> "BlochVector":
        if isinstance(arr, BlochVector):
            return arr
        x, y, z = (float(v) for v in np.asarray(arr, dtype=float).reshape(3))
        return cls(x, y, z)

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def dot(self, other) -> float:
        return float(np.dot(self.array, _as_vec3(other)))


@dataclass(frozen=True)
class SphericalAngles:
    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise InputError(f"theta={self.theta!r} outside [0, pi]")
        if not (0.0 <= self.phi < TWO_PI):
            raise InputError(f"phi={self.phi!r} outside [0, 2pi)")


def _as_vec3(v) -> np.ndarray:
    if isinstance(v, BlochVector):
        return v.array
    return np.asarray(v, dtype=float).reshape(3)


@dataclass(frozen=True)
class FieldSpec:
    """Hamiltonian H(t) = h0 * 1 + h(t) . sigma.

    ``field`` maps a time to the 3-vector h(t). ``field_rate`` maps a time to
    dh/dt and is only needed for time-varying curvature.
    """

    field: Callable[[float], np.ndarray]
    h0: float = 0.0
    stationary: bool = False
    field_rate: Optional[Callable[[float], np.ndarray]] = None

    @classmethod
    def constant(cls, h, h0: float = 0.0) -> "FieldSpec":
        vec = _as_vec3(h).astype(float)
        vec.setflags(write=False)
        zero = np.zeros(3)
        zero.setflags(write=False)
        return cls(
            field=lambda t, _v=vec: _v.copy(),
            h0=float(h0),
            stationary=True,
            field_rate=lambda t, _z=zero: _z.copy(),
        )

    def at(self, t: float) -> np.ndarray:
        return np.asarray(self.field(t), dtype=float).reshape(3)

    def rate(self, t: float) -> Optional[np.ndarray]:
        if self.field_rate is None:
            return None
        return np.asarray(self.field_rate(t), dtype=float).reshape(3)

    def norm(self, t: float = 0.0) -> float:
        return float(np.linalg.norm(self.at(t)))

    def matrix(self, t: float = 0.0) -> np.ndarray:
        h = self.at(t)
        return self.h0 * IDENTITY + np.tensordot(h, PAULI, axes=1)

    def with_h0(self, h0: float) -> "FieldSpec":
        return FieldSpec(self.field, float(h0), self.stationary, self.field_rate)


class TrackEvent(NamedTuple):
    time: float
    kind: str  # "pole", "theta_turn" or "phi_turn"


@dataclass(frozen=True)
class AngleTrack:
    """Continuous (unwrapped) polar and azimuthal samples of a trajectory."""

    times: np.ndarray
    theta_u: np.ndarray
    phi_u: np.ndarray
    events: tuple = ()

    @property
    def pole_events(self) -> list:
        return [e for e in self.events if e.kind == "pole"]

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    def bloch(self) -> np.ndarray:
        """Bloch vectors implied by the unwrapped samples."""
        st = np.sin(self.theta_u)
        return np.column_stack(
            [st * np.cos(self.phi_u), st * np.sin(self.phi_u), np.cos(self.theta_u)]
        )


@dataclass(frozen=True)
class Trajectory:
    """Sampled evolution: times, amplitudes (N, 2), Bloch vectors (N, 3)."""

    times: np.ndarray
    states: np.ndarray
    bloch: np.ndarray
    angles: Optional[AngleTrack] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> PureState:
        c0, c1 = self.states[i]
        return PureState(c0, c1)

    def bloch_vector(self, i: int) -> BlochVector:
        return BlochVector.from_array(self.bloch[i])


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------


def _reduce_phi(phi):
    phi = np.mod(phi, TWO_PI)
    return np.where(phi >= TWO_PI, 0.0, phi)


def angles_from_amplitudes(amps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Canonical (theta, phi) for an (N, 2) array of normalized amplitudes."""
    amps = np.asarray(amps, dtype=complex).reshape(-1, 2)
    c0, c1 = amps[:, 0], amps[:, 1]
    theta = 2.0 * np.arctan2(np.abs(c1), np.abs(c0))
    phi = _reduce_phi(np.angle(c1) - np.angle(c0))
    phi = np.where(np.sin(theta) < POLE_TOL, 0.0, phi)
    return theta, phi


def bloch_from_amplitudes(amps: np.ndarray) -> np.ndarray:
    """Bloch vectors <sigma> for an (N, 2) array of normalized amplitudes."""
    amps = np.asarray(amps, dtype=complex).reshape(-1, 2)
    c0, c1 = amps[:, 0], amps[:, 1]
    cross = np.conj(c0) * c1
    return np.column_stack(
        [2.0 * cross.real, 2.0 * cross.imag, np.abs(c0) ** 2 - np.abs(c1) ** 2]
    )


def angles_from_state(state: PureState) -> SphericalAngles:
    theta, phi = angles_from_amplitudes(state.vector)
    return SphericalAngles(float(theta[0]), float(phi[0]))


def bloch_from_state(state: PureState) -> BlochVector:
    return BlochVector.from_array(bloch_from_amplitudes(state.vector)[0])


def state_from_angles(angles: SphericalAngles) -> PureState:
    half = 0.5 * angles.theta
    return PureState(math.cos(half), complex(math.cos(angles.phi), math.sin(angles.phi)) * math.sin(half))


def angles_from_bloch(a) -> SphericalAngles:
    v = _as_vec3(a)
    v = v / np.linalg.norm(v)
    theta = math.atan2(math.hypot(v[0], v[1]), v[2])
    if math.sin(theta) < POLE_TOL:
        return SphericalAngles(theta, 0.0)
    return SphericalAngles(theta, float(_reduce_phi(math.atan2(v[1], v[0]))))


def state_from_bloch(a) -> PureState:
    return state_from_angles(angles_from_bloch(a))


# ---------------------------------------------------------------------------
# comparisons and distances
# ---------------------------------------------------------------------------


def wedge(a, b) -> float:
    """|a0 b1 - a1 b0|; equals sqrt(1 - |<a|b>|^2) for normalized states.

    Used instead of 1 - |<a|b>|^2 where that difference would cancel.
    """
    a = a.vector if isinstance(a, PureState) else np.asarray(a, dtype=complex)
    b = b.vector if isinstance(b, PureState) else np.asarray(b, dtype=complex)
    return float(abs(a[0] * b[1] - a[1] * b[0]))


def infidelity(a, b) -> float:
    """1 - |<a|b>|^2, computed without cancellation."""
    return wedge(a, b) ** 2


def physically_equal(a: PureState, b: PureState, tol: float = 1e-10) -> bool:
    """Equality up to a global phase."""
    return abs(a.overlap(b)) >= 1.0 - tol


def raw_equal(a: PureState, b: PureState, tol: float = 0.0) -> bool:
    return abs(a.c0 - b.c0) <= tol and abs(a.c1 - b.c1) <= tol


def fs_geodesic_distance(a: PureState, b: PureState) -> float:
    """Shortest path length 2 arccos|<a|b>| between two states, in [0, pi].

    Evaluated as 2 atan2(|a ^ b|, |<a|b>|), which is accurate near both ends
    of the range.
    """
    return 2.0 * math.atan2(wedge(a, b), abs(a.overlap(b)))


def random_states(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-random amplitudes, shape (n, 2)."""
    z = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def unit(v: Sequence[float]) -> np.ndarray:
    v = _as_vec3(v)
    n = np.linalg.norm(v)
    if n == 0:
        raise InputError("zero vector has no direction")
    return v / n
