"""Flat ``key = value`` run configuration.

Example::

    # sub-optimal transfer of the fig. 5 pair
    initial_state.c0 = sqrt(2+sqrt(2))/2
    initial_state.c1 = -1j*sqrt(2-sqrt(2))/2
    target_state.c0 = sqrt(2+sqrt(2))/2
    target_state.c1 = 1j*sqrt(2-sqrt(2))/2
    hamiltonian.hz = 1
    t_end = auto
    samples = 4096

Values are numbers or small arithmetic expressions over ``pi``, ``sqrt``,
``sin``, ``cos``, ``exp`` and complex literals such as ``1j``.
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import InputError
from .scenarios import FamilySpec, family_axis, family_hamiltonian
from .states import BlochVector, FieldSpec, PureState, SphericalAngles, state_from_angles, state_from_bloch

FORMATS = ("table", "csv", "json")

KNOWN_KEYS = {
    "initial_state.c0", "initial_state.c1", "initial_state.theta", "initial_state.phi",
    "target_state.c0", "target_state.c1", "target_state.theta", "target_state.phi",
    "hamiltonian.h0", "hamiltonian.hx", "hamiltonian.hy", "hamiltonian.hz",
    "hamiltonian.family.a_hat", "hamiltonian.family.b_hat",
    "hamiltonian.family.alpha", "hamiltonian.family.energy",
    "t_end", "samples", "format", "jobs",
    "sweep.alpha", "sweep.alpha_grid",
}


class ConfigError(InputError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_NAMES = {"pi": math.pi, "e": math.e, "j": 1j}
_FUNCS = {"sqrt": np.emath.sqrt, "sin": np.sin, "cos": np.cos, "exp": np.exp}


def evaluate(text: str) -> complex:
    """Evaluate a numeric expression without ``eval``."""

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
            return node.value
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](walk(node.operand))
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS and len(node.args) == 1:
            return complex(_FUNCS[node.func.id](walk(node.args[0])))
        raise ValueError(f"unsupported expression element {ast.dump(node)[:40]}")

    return complex(walk(ast.parse(text.strip(), mode="eval")))


def parse_lines(text: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(key, "unknown key")
        if key in entries:
            raise ConfigError(key, "given more than once")
        entries[key] = value
    return entries


@dataclass(frozen=True)
class RunConfig:
    initial_state: PureState
    field: FieldSpec
    target_state: Optional[PureState] = None
    t_end: Union[float, str] = "auto"
    samples: int = 4096
    format: str = "table"
    family: Optional[FamilySpec] = None
    alphas: Optional[list] = None
    jobs: int = 1
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_file(cls, path, require_alpha: bool = True) -> "RunConfig":
        return cls.from_text(Path(path).read_text(), require_alpha)

    @classmethod
    def from_text(cls, text: str, require_alpha: bool = True) -> "RunConfig":
        return _build(parse_lines(text), require_alpha)


def _real(entries, key, default=None) -> Optional[float]:
    if key not in entries:
        return default
    try:
        value = evaluate(entries[key])
    except (ValueError, SyntaxError, ZeroDivisionError, TypeError) as exc:
        raise ConfigError(key, f"cannot evaluate {entries[key]!r} ({exc})") from None
    if abs(value.imag) > 1e-12:
        raise ConfigError(key, "expected a real number")
    return value.real


def _complex(entries, key) -> complex:
    try:
        return evaluate(entries[key])
    except (ValueError, SyntaxError, ZeroDivisionError, TypeError) as exc:
        raise ConfigError(key, f"cannot evaluate {entries[key]!r} ({exc})") from None


def _vector(entries, key) -> np.ndarray:
    parts = [p for p in entries[key].split(",") if p.strip()]
    if len(parts) != 3:
        raise ConfigError(key, "expected three comma-separated components")
    vec = np.array([_real({key: p}, key) for p in parts])
    n = np.linalg.norm(vec)
    if n == 0:
        raise ConfigError(key, "zero vector")
    return vec / n


def _state(entries, prefix) -> Optional[PureState]:
    amp = [k for k in (f"{prefix}.c0", f"{prefix}.c1") if k in entries]
    ang = [k for k in (f"{prefix}.theta", f"{prefix}.phi") if k in entries]
    if amp and ang:
        raise ConfigError(prefix, "give either amplitudes (c0, c1) or angles (theta, phi), not both")
    if amp:
        if len(amp) != 2:
            raise ConfigError(prefix, "both c0 and c1 are required")
        vec = np.array([_complex(entries, f"{prefix}.c0"), _complex(entries, f"{prefix}.c1")])
        if np.linalg.norm(vec) == 0:
            raise ConfigError(prefix, "zero amplitude vector")
        return PureState.from_vector(vec, normalize=True)
    if ang:
        if len(ang) != 2:
            raise ConfigError(prefix, "both theta and phi are required")
        theta = _real(entries, f"{prefix}.theta")
        phi = _real(entries, f"{prefix}.phi") % (2 * math.pi)
        try:
            return state_from_angles(SphericalAngles(theta, phi))
        except InputError as exc:
            raise ConfigError(f"{prefix}.theta", str(exc)) from None
    return None


def _alphas(entries) -> Optional[list]:
    if "sweep.alpha" in entries and "sweep.alpha_grid" in entries:
        raise ConfigError("sweep.alpha", "give either sweep.alpha or sweep.alpha_grid")
    if "sweep.alpha" in entries:
        parts = [p for p in entries["sweep.alpha"].split(",") if p.strip()]
        return [_real({"sweep.alpha": p}, "sweep.alpha") for p in parts]
    if "sweep.alpha_grid" in entries:
        parts = [p for p in entries["sweep.alpha_grid"].split(",") if p.strip()]
        if len(parts) != 3:
            raise ConfigError("sweep.alpha_grid", "expected 'start, stop, count'")
        start, stop, count = (_real({"k": p}, "k") for p in parts)
        if count != int(count) or count < 0:
            raise ConfigError("sweep.alpha_grid", "count must be a non-negative integer")
        return list(np.linspace(start, stop, int(count)))
    return None


def _build(entries: dict, require_alpha: bool) -> RunConfig:
    const_keys = [k for k in entries if k.startswith("hamiltonian.") and not k.startswith("hamiltonian.family.")]
    family_keys = [k for k in entries if k.startswith("hamiltonian.family.")]
    if const_keys and family_keys:
        raise ConfigError("hamiltonian", "give either constant components or a family, not both")
    if not const_keys and not family_keys:
        raise ConfigError("hamiltonian", "no Hamiltonian given")

    family = None
    if family_keys:
        for key in ("hamiltonian.family.a_hat", "hamiltonian.family.b_hat"):
            if key not in entries:
                raise ConfigError(key, "required for a family Hamiltonian")
        a_hat = _vector(entries, "hamiltonian.family.a_hat")
        b_hat = _vector(entries, "hamiltonian.family.b_hat")
        family_axis(a_hat, b_hat, 0.0)  # DegeneratePair
        alpha = _real(entries, "hamiltonian.family.alpha")
        if alpha is None:
            if require_alpha:
                raise ConfigError("hamiltonian.family.alpha", "required")
            alpha = math.pi / 2
        energy = _real(entries, "hamiltonian.family.energy", 1.0)
        try:
            family = FamilySpec(BlochVector.from_array(a_hat), BlochVector.from_array(b_hat), alpha, energy)
        except InputError as exc:
            raise ConfigError("hamiltonian.family", str(exc)) from None
        field_spec = family_hamiltonian(family)
    else:
        h = [_real(entries, f"hamiltonian.h{c}", 0.0) for c in "xyz"]
        field_spec = FieldSpec.constant(h, _real(entries, "hamiltonian.h0", 0.0))

    initial = _state(entries, "initial_state")
    target = _state(entries, "target_state")
    if family is not None:
        initial = initial or state_from_bloch(family.a_hat)
        target = target or state_from_bloch(family.b_hat)
    if initial is None:
        raise ConfigError("initial_state", "required")

    t_raw = entries.get("t_end", "auto")
    if t_raw.strip().lower() == "auto":
        if target is None:
            raise ConfigError("t_end", "'auto' needs a target_state")
        t_end: Union[float, str] = "auto"
    else:
        t_end = _real(entries, "t_end")
        if t_end < 0:
            raise ConfigError("t_end", "must be non-negative")

    samples = _real(entries, "samples", 4096)
    if samples != int(samples) or samples < 3:
        raise ConfigError("samples", "must be an integer >= 3")
    fmt = entries.get("format", "table").strip().lower()
    if fmt not in FORMATS:
        raise ConfigError("format", f"must be one of {', '.join(FORMATS)}")
    jobs = _real(entries, "jobs", 1)
    if jobs != int(jobs) or jobs < 1:
        raise ConfigError("jobs", "must be a positive integer")

    return RunConfig(
        initial_state=initial,
        field=field_spec,
        target_state=target,
        t_end=t_end,
        samples=int(samples),
        format=fmt,
        family=family,
        alphas=_alphas(entries),
        jobs=int(jobs),
        raw=entries,
    )
