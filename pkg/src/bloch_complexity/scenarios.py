"""The one-parameter Hamiltonian family, the canonical fixtures, metric
reports and alpha sweeps."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Optional

import numpy as np

from .complexity import complexity_report, volume_profile
from .curvature import curvature_profile
from .errors import DegeneratePair, InputError, ZeroDuration
from .metrics import efficiency_profile
from .propagation import PropagationConfig, travel_time, trajectory
from .states import BlochVector, FieldSpec, PureState, Trajectory, _as_vec3, state_from_bloch

DEFAULT_SAMPLES = 4096

_R2 = math.sqrt(2.0)
_P = math.sqrt(2.0 + _R2) / 2.0  # cos(pi/8)
_M = math.sqrt(2.0 - _R2) / 2.0  # sin(pi/8)


@dataclass(frozen=True)
class FamilySpec:
    a_hat: BlochVector
    b_hat: BlochVector
    alpha: float
    energy: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.alpha <= math.pi):
            raise InputError(f"alpha={self.alpha!r} outside [0, pi]")
        if not self.energy > 0:
            raise InputError(f"energy must be positive, got {self.energy!r}")


def family_axis(a_hat, b_hat, alpha: float) -> np.ndarray:
    """cos(alpha) (a+b)/|a+b| + sin(alpha) (a x b)/|a x b|."""
    a, b = _as_vec3(a_hat), _as_vec3(b_hat)
    s, c = a + b, np.cross(a, b)
    ns, nc = np.linalg.norm(s), np.linalg.norm(c)
    if ns <= 1e-12 or nc <= 1e-12:
        raise DegeneratePair("source and target Bloch vectors are parallel or antiparallel")
    return math.cos(alpha) * s / ns + math.sin(alpha) * c / nc


def family_hamiltonian(spec: FamilySpec) -> FieldSpec:
    return FieldSpec.constant(spec.energy * family_axis(spec.a_hat, spec.b_hat, spec.alpha))


@dataclass(frozen=True)
class Fixture:
    name: str
    initial: PureState
    target: PureState
    field: np.ndarray  # in units of E
    label: str


FIXTURES = {
    f.name: f
    for f in [
        Fixture("fig4-AB", PureState(1 / _R2, 1 / _R2), PureState(1 / _R2, 1j / _R2), np.array([0.0, 0.0, 1.0]), "E sz, time optimal"),
        Fixture("fig4-BC", PureState(1 / _R2, 1j / _R2), PureState(1, 0), np.array([1.0, 0.0, 0.0]), "E sx, time optimal"),
        Fixture("fig4-CA", PureState(1, 0), PureState(1 / _R2, 1 / _R2), np.array([0.0, 1.0, 0.0]), "E sy, time optimal"),
        Fixture("fig5-AB-opt", PureState(_P, -1j * _M), PureState(_P, 1j * _M), np.array([-1.0, 0.0, 0.0]), "-E sx, time optimal"),
        Fixture("fig5-AB-sub", PureState(_P, -1j * _M), PureState(_P, 1j * _M), np.array([0.0, 0.0, 1.0]), "E sz, time sub-optimal"),
        Fixture("fig5-CD-opt", PureState(_M, 1j * _P), PureState(_M, -1j * _P), np.array([-1.0, 0.0, 0.0]), "-E sx, time optimal"),
        Fixture("fig5-CD-sub", PureState(_M, 1j * _P), PureState(_M, -1j * _P), np.array([0.0, 0.0, -1.0]), "-E sz, time sub-optimal"),
    ]
}


@dataclass(frozen=True)
class MetricReport:
    s0: float
    s: float
    travel_time: float
    eta_ge: float
    eta_se_mean: float
    eta_se_min: float
    eta_se_max: float
    kappa2: float
    v_bar: float
    v_max: float
    c: float
    l_c: float
    quadrature_error: float
    shape: str

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Evolution:
    report: MetricReport
    trajectory: Trajectory
    volumes: np.ndarray  # instantaneous accessed volume per sample


def analyze(field: FieldSpec, psi0: PureState, t_end: float, samples: int = DEFAULT_SAMPLES) -> Evolution:
    """Propagate over [0, t_end] and compute the full metric suite."""
    if not t_end > 0:
        raise ZeroDuration(f"evolution time must be positive, got {t_end!r}")
    cfg = PropagationConfig(samples=samples)
    traj = trajectory(field, psi0, t_end, cfg)
    eff = efficiency_profile(traj, field)
    kappa = np.array([k.kappa2 for k in curvature_profile(traj, field)])
    comp = complexity_report(traj.angles, eff.s)
    vol = comp.volume
    report = MetricReport(
        s0=eff.s0,
        s=eff.s,
        travel_time=float(t_end),
        eta_ge=eff.eta_ge,
        eta_se_mean=eff.eta_se_mean,
        eta_se_min=eff.eta_se_min,
        eta_se_max=eff.eta_se_max,
        kappa2=float(np.mean(kappa)),
        v_bar=vol.v_bar,
        v_max=vol.v_max,
        c=comp.c,
        l_c=comp.l_c,
        quadrature_error=max(eff.s_error, vol.quadrature_error),
        shape=vol.shape.value,
    )
    return Evolution(report, traj, volume_profile(traj.angles, vol.shape))


def analyze_transfer(field: FieldSpec, psi0: PureState, target: PureState, samples: int = DEFAULT_SAMPLES) -> Evolution:
    """Like ``analyze`` with the duration set by the travel time to ``target``."""
    t = travel_time(field, psi0, target, PropagationConfig(samples=samples))
    return analyze(field, psi0, t, samples)


def run_fixture(name: str, samples: int = DEFAULT_SAMPLES, energy: float = 1.0) -> MetricReport:
    return fixture_evolution(name, samples, energy).report


def fixture_evolution(name: str, samples: int = DEFAULT_SAMPLES, energy: float = 1.0) -> Evolution:
    try:
        fx = FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}") from None
    field = FieldSpec.constant(energy * fx.field)
    return analyze_transfer(field, fx.initial, fx.target, samples)


@dataclass(frozen=True)
class SweepResult:
    rows: list  # (alpha, MetricReport), ascending alpha
    argmin_alpha: float
    min_travel_time: float


def sweep_alpha(
    alphas: Iterable[float],
    a_hat,
    b_hat,
    energy: float = 1.0,
    samples: int = DEFAULT_SAMPLES,
    initial: Optional[PureState] = None,
    target: Optional[PureState] = None,
    jobs: int = 1,
) -> SweepResult:
    """Metrics for H(alpha) at every alpha, plus the travel-time minimizer.

    ``initial`` and ``target`` default to the states with Bloch vectors
    ``a_hat`` and ``b_hat``.
    """
    alphas = sorted(float(a) for a in alphas)
    if not alphas:
        raise InputError("alpha grid is empty")
    a_vec, b_vec = BlochVector.from_array(a_hat), BlochVector.from_array(b_hat)
    family_axis(a_vec, b_vec, 0.0)  # reject degenerate pairs up front
    psi_a = initial or state_from_bloch(a_vec)
    psi_b = target or state_from_bloch(b_vec)

    def one(alpha):
        field = family_hamiltonian(FamilySpec(a_vec, b_vec, alpha, energy))
        return alpha, analyze_transfer(field, psi_a, psi_b, samples).report

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(one, alphas))
    else:
        rows = [one(a) for a in alphas]
    best = min(rows, key=lambda r: r[1].travel_time)
    return SweepResult(rows, best[0], best[1].travel_time)
