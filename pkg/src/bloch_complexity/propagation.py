"""Trajectory generation: closed-form rotor, fixed-step RK4, travel times,
and continuous angle tracks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import GridTooCoarse, InputError, NeverReached, StepTooCoarse, Unreachable
from .states import (
    POLE_TOL,
    TWO_PI,
    AngleTrack,
    FieldSpec,
    PureState,
    TrackEvent,
    Trajectory,
    angles_from_amplitudes,
    bloch_from_amplitudes,
    bloch_from_state,
    infidelity,
)

# grid points per precession period when bracketing the first fidelity maximum
BRACKET_POINTS = 720
POLE_EVENT_TOL = 1e-6
TURN_TOL = 1e-10


@dataclass(frozen=True)
class PropagationConfig:
    samples: int = 4096
    integrator_step: float = 1e-3
    fidelity_tol: float = 1e-10
    renormalize_every: int = 1

    def __post_init__(self):
        if int(self.samples) != self.samples or self.samples < 3:
            raise InputError(f"samples must be an integer >= 3, got {self.samples!r}")
        if not self.integrator_step > 0:
            raise InputError(f"integrator_step must be positive, got {self.integrator_step!r}")
        if not (0 < self.fidelity_tol <= 1e-4):
            raise InputError(f"fidelity_tol must lie in (0, 1e-4], got {self.fidelity_tol!r}")
        if int(self.renormalize_every) != self.renormalize_every or self.renormalize_every < 1:
            raise InputError("renormalize_every must be a positive integer")

    def grid(self, t_end: float, t_start: float = 0.0) -> np.ndarray:
        """``samples`` intervals, i.e. ``samples + 1`` points."""
        return np.linspace(t_start, t_end, int(self.samples) + 1)


# ---------------------------------------------------------------------------
# closed-form propagation
# ---------------------------------------------------------------------------


def rotor_amplitudes(field: FieldSpec, psi0: PureState, times) -> np.ndarray:
    """exp(-i H t) psi0 for every t in ``times``; shape (N, 2).

    Uses exp(-i h.sigma t) = cos(|h| t) 1 - i sin(|h| t) (h/|h|).sigma.
    """
    if not field.stationary:
        raise InputError("rotor propagation requires a stationary field")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    h = field.at(0.0)
    hn = float(np.linalg.norm(h))
    c0, c1 = psi0.c0, psi0.c1
    global_phase = np.exp(-1j * field.h0 * times)
    if hn == 0.0:
        out = np.empty((len(times), 2), dtype=complex)
        out[:, 0] = c0
        out[:, 1] = c1
        return out * global_phase[:, None]
    nx, ny, nz = h / hn
    cos = np.cos(hn * times)
    sin = np.sin(hn * times)
    # (n . sigma) psi
    s0 = nz * c0 + (nx - 1j * ny) * c1
    s1 = (nx + 1j * ny) * c0 - nz * c1
    out = np.column_stack([cos * c0 - 1j * sin * s0, cos * c1 - 1j * sin * s1])
    return out * global_phase[:, None]


def propagate_stationary(field: FieldSpec, psi0: PureState, t: float) -> PureState:
    amps = rotor_amplitudes(field, psi0, [t])[0]
    return PureState.from_vector(amps / np.linalg.norm(amps))


def rotate_bloch(a: np.ndarray, axis: np.ndarray, angles) -> np.ndarray:
    """Rodrigues rotation of ``a`` about unit ``axis`` by each angle; (N, 3)."""
    angles = np.atleast_1d(np.asarray(angles, dtype=float))[:, None]
    par = np.dot(axis, a) * axis
    perp = a - par
    return par + np.cos(angles) * perp + np.sin(angles) * np.cross(axis, a)


# ---------------------------------------------------------------------------
# numerical propagation
# ---------------------------------------------------------------------------


def _hamiltonian_entries(field: FieldSpec, t: float):
    hx, hy, hz = field.at(t)
    h0 = field.h0
    return h0 + hz, complex(hx, -hy), complex(hx, hy), h0 - hz


def _rk4_matrix(field: FieldSpec, dt: float) -> np.ndarray:
    """One classic RK4 step for a constant H as a 2x2 matrix.

    For a linear autonomous system RK4 reduces exactly to the degree-4 Taylor
    polynomial of exp(-i H dt).
    """
    a = -1j * dt * field.matrix(0.0)
    term = np.eye(2, dtype=complex)
    total = term.copy()
    for k in range(1, 5):
        term = term @ a / k
        total = total + term
    return total


def propagate_numeric(field: FieldSpec, psi0: PureState, t_grid, cfg: PropagationConfig | None = None) -> Trajectory:
    """Integrate i d(psi)/dt = H(t) psi with fixed-step RK4 onto ``t_grid``.

    Each grid interval is split into equal substeps no longer than
    ``cfg.integrator_step``.
    """
    cfg = cfg or PropagationConfig()
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if np.any(np.diff(t_grid) < 0):
        raise InputError("time grid must be monotone non-decreasing")
    hmax = max(float(np.linalg.norm(field.at(t))) for t in t_grid)
    if cfg.integrator_step * hmax >= 0.5:
        raise StepTooCoarse(f"step {cfg.integrator_step} too coarse for |h| = {hmax}")

    out = np.empty((len(t_grid), 2), dtype=complex)
    a, b = psi0.c0, psi0.c1
    out[0] = a, b
    step_count = 0
    cache: dict[float, np.ndarray] = {}
    for i in range(1, len(t_grid)):
        t0, t1 = t_grid[i - 1], t_grid[i]
        span = t1 - t0
        if span == 0.0:
            out[i] = a, b
            continue
        n = max(1, math.ceil(span / cfg.integrator_step - 1e-9))
        dt = span / n
        if field.stationary:
            m = cache.get(dt)
            if m is None:
                m = cache[dt] = _rk4_matrix(field, dt)
            m00, m01, m10, m11 = complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1])
        for k in range(n):
            if field.stationary:
                a, b = m00 * a + m01 * b, m10 * a + m11 * b
            else:
                t = t0 + k * dt
                a, b = _rk4_step(field, t, dt, a, b)
            step_count += 1
            if step_count % cfg.renormalize_every == 0:
                norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
                a, b = a / norm, b / norm
        out[i] = a, b
    return make_trajectory(t_grid, out)


def _rk4_step(field: FieldSpec, t: float, dt: float, a: complex, b: complex):
    def deriv(tt, x, y):
        h00, h01, h10, h11 = _hamiltonian_entries(field, tt)
        return -1j * (h00 * x + h01 * y), -1j * (h10 * x + h11 * y)

    k1a, k1b = deriv(t, a, b)
    k2a, k2b = deriv(t + dt / 2, a + dt / 2 * k1a, b + dt / 2 * k1b)
    k3a, k3b = deriv(t + dt / 2, a + dt / 2 * k2a, b + dt / 2 * k2b)
    k4a, k4b = deriv(t + dt, a + dt * k3a, b + dt * k3b)
    return (
        a + dt / 6 * (k1a + 2 * k2a + 2 * k3a + k4a),
        b + dt / 6 * (k1b + 2 * k2b + 2 * k3b + k4b),
    )


def evolve(field: FieldSpec, psi0: PureState, t0: float, t1: float, step: float = 1e-3) -> PureState:
    """State at ``t1`` starting from ``psi0`` at ``t0`` (either direction)."""
    if field.stationary:
        return propagate_stationary(field, psi0, t1 - t0)
    span = t1 - t0
    if span == 0.0:
        return psi0
    n = max(1, math.ceil(abs(span) / step - 1e-9))
    dt = span / n
    a, b = psi0.c0, psi0.c1
    for k in range(n):
        a, b = _rk4_step(field, t0 + k * dt, dt, a, b)
    norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    return PureState(a / norm, b / norm)


def trajectory(field: FieldSpec, psi0: PureState, t_end: float, cfg: PropagationConfig | None = None) -> Trajectory:
    """Sampled trajectory over [0, t_end] with unwrapped angles.

    Uses the rotor when stationary, RK4 otherwise.
    """
    cfg = cfg or PropagationConfig()
    grid = cfg.grid(t_end)
    if field.stationary:
        return make_trajectory(grid, rotor_amplitudes(field, psi0, grid), unwrap=True)
    traj = propagate_numeric(field, psi0, grid, cfg)
    return Trajectory(traj.times, traj.states, traj.bloch, unwrap_angles(traj))


def make_trajectory(times, amps, unwrap: bool = False) -> Trajectory:
    """Trajectory from sampled amplitudes; ``unwrap`` also builds the AngleTrack."""
    times = np.asarray(times, dtype=float)
    amps = np.asarray(amps, dtype=complex)
    bloch = bloch_from_amplitudes(amps)
    base = Trajectory(times, amps, bloch)
    return Trajectory(times, amps, bloch, unwrap_angles(base)) if unwrap else base


# ---------------------------------------------------------------------------
# travel time
# ---------------------------------------------------------------------------


def travel_time(field: FieldSpec, psi0: PureState, target: PureState, cfg: PropagationConfig | None = None) -> float:
    """Earliest t > 0 at which the precessing state meets ``target``.

    The first maximum of the overlap a(t).b is bracketed on a grid of
    BRACKET_POINTS points per period pi/|h|, then located as the root of its
    time derivative 2|h| (n x a(t)).b.
    """
    cfg = cfg or PropagationConfig()
    if not field.stationary:
        raise InputError("travel_time requires a stationary field")
    h = field.at(0.0)
    hn = float(np.linalg.norm(h))
    if hn == 0.0:
        raise Unreachable("zero field: the state never moves")
    n = h / hn
    a = bloch_from_state(psi0).array
    b = bloch_from_state(target).array
    if abs(np.dot(a, n) - np.dot(b, n)) > 1e-9:
        raise Unreachable(f"a.n = {np.dot(a, n):.12g} differs from b.n = {np.dot(b, n):.12g}")
    period = math.pi / hn

    perp = a - np.dot(a, n) * n
    if np.linalg.norm(perp) < 1e-12 or infidelity(psi0.vector, target.vector) < cfg.fidelity_tol:
        # t > 0 required: an eigenstate, or a target equal to the start, recurs after one period
        return period

    grid = np.linspace(0.0, 1.05 * period, int(1.05 * BRACKET_POINTS) + 1)

    def slope(t):
        at = rotate_bloch(a, n, 2.0 * hn * np.atleast_1d(t))
        return 2.0 * hn * np.cross(n, at) @ b

    g = slope(grid)
    idx = np.nonzero((g[:-1] > 0.0) & (g[1:] <= 0.0))[0]
    if len(idx) == 0:
        raise NeverReached("no overlap maximum inside one precession period")
    k = int(idx[0])
    fa, fb = float(slope(grid[k])[0]), float(slope(grid[k + 1])[0])
    if fa * fb >= 0.0:
        # an endpoint sits on the root to rounding
        t_star = float(grid[k + 1] if abs(fb) <= abs(fa) else grid[k])
    else:
        t_star = brentq(lambda t: float(slope(t)[0]), grid[k], grid[k + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    fid = abs(target.overlap(propagate_stationary(field, psi0, t_star)))
    if fid < 1.0 - math.sqrt(cfg.fidelity_tol):
        raise NeverReached(f"best fidelity {fid:.12g} over one period is below threshold")
    return t_star


# ---------------------------------------------------------------------------
# angle unwrapping
# ---------------------------------------------------------------------------


def _nearest(value: float, base: float) -> float:
    """base + 2 pi k closest to value."""
    return base + TWO_PI * round((value - base) / TWO_PI)


def unwrap_angles(traj: Trajectory) -> AngleTrack:
    """Continuous (theta, phi) along a trajectory.

    Each sample picks, among the representations (theta + 2 pi m, phi + 2 pi k)
    and (-theta + 2 pi m, phi + pi + 2 pi k) of its Bloch vector, the one
    closest to the previous sample. Passing through a pole therefore carries
    theta beyond [0, pi] while phi stays put. At the poles phi is held.
    """
    times = np.asarray(traj.times, dtype=float)
    n = len(times)
    theta_c, phi_c = angles_from_amplitudes(traj.states)
    if n == 0:
        return AngleTrack(times, theta_c, phi_c, ())
    if n > 1:
        cosang = np.einsum("ij,ij->i", traj.bloch[:-1], traj.bloch[1:])
        if np.any(cosang < math.cos(math.pi / 4)):
            raise GridTooCoarse("consecutive Bloch vectors subtend more than pi/4")

    at_pole = np.sin(theta_c) < POLE_TOL
    theta_u = np.empty(n)
    phi_u = np.empty(n)
    off = np.nonzero(~at_pole)[0]
    first = int(off[0]) if len(off) else n
    # leading pole samples borrow the azimuth of the first off-pole sample
    lead_phi = float(phi_c[first]) if first < n else 0.0
    theta_u[:first] = theta_c[:first]
    phi_u[:first] = lead_phi
    if first == 0:
        theta_u[0], phi_u[0] = theta_c[0], phi_c[0]
        start = 1
    else:
        start = first

    for i in range(start, n):
        tp, pp = theta_u[i - 1], phi_u[i - 1]
        th, ph = float(theta_c[i]), float(phi_c[i])
        if at_pole[i]:
            theta_u[i] = _nearest(tp, th)
            phi_u[i] = pp
            continue
        t1 = _nearest(tp, th)
        p1 = _nearest(pp, ph)
        t2 = _nearest(tp, -th)
        p2 = _nearest(pp, ph + math.pi)
        if (t2 - tp) ** 2 + (p2 - pp) ** 2 < (t1 - tp) ** 2 + (p1 - pp) ** 2:
            theta_u[i], phi_u[i] = t2, p2
        else:
            theta_u[i], phi_u[i] = t1, p1

    if n > 1 and (np.max(np.abs(np.diff(theta_u))) >= math.pi / 2 or np.max(np.abs(np.diff(phi_u))) >= math.pi / 2):
        raise GridTooCoarse("unwrapped angles jump by more than pi/2 between samples")
    return AngleTrack(times, theta_u, phi_u, tuple(_track_events(times, theta_u, phi_u)))


def _track_events(times, theta_u, phi_u) -> list:
    events = []
    q = theta_u / math.pi
    for i in range(1, len(times)):
        lo, hi = sorted((q[i - 1], q[i]))
        for level in range(math.floor(lo) + 1, math.ceil(hi)):
            # strict crossing of theta = level * pi inside the interval
            frac = (level - q[i - 1]) / (q[i] - q[i - 1])
            events.append(TrackEvent(float(times[i - 1] + frac * (times[i] - times[i - 1])), "pole"))
    # samples sitting on a pole with neighbours on either side
    for i in range(1, len(times) - 1):
        if abs(math.sin(theta_u[i])) < POLE_EVENT_TOL:
            level = round(q[i])
            if abs(q[i] - level) * math.pi < POLE_EVENT_TOL and (q[i - 1] - level) * (q[i + 1] - level) < 0:
                if not any(abs(e.time - times[i]) <= (times[i + 1] - times[i - 1]) for e in events if e.kind == "pole"):
                    events.append(TrackEvent(float(times[i]), "pole"))
    for kind, series in (("theta_turn", theta_u), ("phi_turn", phi_u)):
        d = np.diff(series)
        sign = 0
        for i, step in enumerate(d):
            if abs(step) <= TURN_TOL:
                continue
            s = 1 if step > 0 else -1
            if sign and s != sign:
                events.append(TrackEvent(float(times[i]), kind))
            sign = s
    events.sort(key=lambda e: e.time)
    return events
