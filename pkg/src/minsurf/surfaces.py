"""The degree-n polynomial minimal surface family.

A family member is the pair (n, omega) with n >= 3 and omega >= 0:

    X = -P_n + omega P_{n-2}
    Y =  Q_n + omega Q_{n-2}
    Z =  (2 sqrt(n (n-2) omega) / (n-1)) P_{n-1}

Its harmonic-conjugate partner swaps the roles of P and Q coordinate
by coordinate, and the one-parameter blend
cos(t) * base + sin(t) * conjugate sweeps an isometric deformation
between the two. The cubic member is the classical Enneper surface.

All jets are assembled analytically from the closed derivative rules
of the P/Q pair; a single recurrence sweep per point supplies every
degree each variant needs, so the base and conjugate values used by
the certification suites are consistent to the last bit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._backend import kernels
from .errors import DegeneratePlanarWarning, DegreeTooLowError, NegativeOmegaError

__all__ = [
    "MIN_DEGREE",
    "DEFAULT_FAMILY_PHASES",
    "SurfaceSpec",
    "SurfacePoint",
    "SurfaceJet",
    "Variant",
    "Selector",
    "BASE",
    "CONJUGATE",
    "family",
    "make_surface",
    "eval_surface",
    "eval_conjugate",
    "eval_family",
    "surface_jet",
    "eval_many",
    "jet_many",
    "enneper_closed_form",
    "quintic_closed_form",
]

MIN_DEGREE = 3

# Deformation phases used for the frame sequence and the family sweeps.
DEFAULT_FAMILY_PHASES = (
    0.0,
    math.pi / 10.0,
    math.pi / 5.0,
    3.0 * math.pi / 10.0,
    2.0 * math.pi / 5.0,
    math.pi / 2.0,
)


@dataclass(frozen=True)
class SurfaceSpec:
    """Immutable description of one family member."""

    n: int
    omega: float
    z_coefficient: float

    @property
    def is_planar(self) -> bool:
        """True when omega = 0 and the image degenerates to a plane."""
        return self.omega == 0.0


@dataclass(frozen=True)
class SurfacePoint:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array((self.x, self.y, self.z))


@dataclass(frozen=True)
class SurfaceJet:
    """Position with first and second partials at one parameter point."""

    position: np.ndarray
    d_u: np.ndarray
    d_v: np.ndarray
    d_uu: np.ndarray
    d_uv: np.ndarray
    d_vv: np.ndarray


class Variant(Enum):
    BASE = "base"
    CONJUGATE = "conjugate"
    FAMILY = "family"


@dataclass(frozen=True)
class Selector:
    """Which member of {base, conjugate, blend-at-phase-t} to evaluate."""

    variant: Variant
    phase: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.phase):
            raise ValueError("selector phase must be finite")

    @property
    def name(self) -> str:
        return self.variant.value


BASE = Selector(Variant.BASE)
CONJUGATE = Selector(Variant.CONJUGATE)


def family(phase: float) -> Selector:
    """Selector for the blend cos(t) * base + sin(t) * conjugate."""
    return Selector(Variant.FAMILY, float(phase))


def make_surface(n: int, omega: float) -> SurfaceSpec:
    """Validate (n, omega) and build a spec with the height coefficient cached.

    The positive square root is always taken for the height coefficient;
    the opposite sign only mirrors the surface. omega = 0 is accepted but
    flagged with a DegeneratePlanarWarning: every identity still holds,
    the image just flattens into the plane z = 0.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"degree must be an integer, got {type(n).__name__}")
    n = int(n)
    if n < MIN_DEGREE:
        raise DegreeTooLowError(f"degree must be >= {MIN_DEGREE}, got {n}")
    omega = float(omega)
    if not math.isfinite(omega):
        raise ValueError("omega must be finite")
    if omega < 0.0:
        raise NegativeOmegaError(f"omega must be >= 0, got {omega}")
    if omega == 0.0:
        warnings.warn(
            "omega = 0 collapses the height coordinate (planar image)",
            DegeneratePlanarWarning,
            stacklevel=2,
        )
    zc = 2.0 * math.sqrt(n * (n - 2) * omega) / (n - 1)
    return SurfaceSpec(n, omega, zc)


_QUARTER = math.pi / 2.0
_HALF = math.pi
_THREE_QUARTER = 3.0 * (math.pi / 2.0)


def _blend(selector: Selector) -> tuple[float, float]:
    """(cos t, sin t) for the selector, snapped exactly at quadrant phases.

    The snap makes phase 0 evaluate bit-identically to the base surface
    and phase pi/2 to the conjugate, which the frame exporter and the
    endpoint invariants rely on.
    """
    if selector.variant is Variant.BASE:
        return 1.0, 0.0
    if selector.variant is Variant.CONJUGATE:
        return 0.0, 1.0
    t = math.fmod(selector.phase, math.tau)
    if t < 0.0:
        t += math.tau
    if t == 0.0:
        return 1.0, 0.0
    if t == _QUARTER:
        return 0.0, 1.0
    if t == _HALF:
        return -1.0, 0.0
    if t == _THREE_QUARTER:
        return 0.0, -1.0
    return math.cos(t), math.sin(t)


def _as_flat(values) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64).ravel()
    if not np.all(np.isfinite(arr)):
        raise ValueError("parameter values must be finite")
    return arr


def eval_many(spec: SurfaceSpec, selector: Selector, u, v) -> np.ndarray:
    """Positions at flattened parameter arrays, shape (m, 3)."""
    u = _as_flat(u)
    v = _as_flat(v)
    if u.shape != v.shape:
        raise ValueError("u and v must have the same length")
    ct, st = _blend(selector)
    return kernels.surface_points(spec.n, spec.omega, spec.z_coefficient, ct, st, u, v)


def jet_many(spec: SurfaceSpec, selector: Selector, u, v) -> np.ndarray:
    """Second-order jets at flattened parameter arrays, shape (m, 18).

    Columns: position, d_u, d_v, d_uu, d_uv, d_vv (three each).
    """
    u = _as_flat(u)
    v = _as_flat(v)
    if u.shape != v.shape:
        raise ValueError("u and v must have the same length")
    ct, st = _blend(selector)
    return kernels.surface_jets(spec.n, spec.omega, spec.z_coefficient, ct, st, u, v)


def _point(spec: SurfaceSpec, selector: Selector, u: float, v: float) -> SurfacePoint:
    row = eval_many(spec, selector, np.array([u]), np.array([v]))[0]
    return SurfacePoint(float(row[0]), float(row[1]), float(row[2]))


def eval_surface(spec: SurfaceSpec, u: float, v: float) -> SurfacePoint:
    """Base surface position."""
    return _point(spec, BASE, u, v)


def eval_conjugate(spec: SurfaceSpec, u: float, v: float) -> SurfacePoint:
    """Conjugate surface position."""
    return _point(spec, CONJUGATE, u, v)


def eval_family(spec: SurfaceSpec, t: float, u: float, v: float) -> SurfacePoint:
    """Blend position cos(t) * base + sin(t) * conjugate."""
    return _point(spec, family(t), u, v)


def surface_jet(spec: SurfaceSpec, selector: Selector, u: float, v: float) -> SurfaceJet:
    """Analytic jet of the selected variant at one point."""
    row = jet_many(spec, selector, np.array([u]), np.array([v]))[0]
    return SurfaceJet(
        position=row[0:3].copy(),
        d_u=row[3:6].copy(),
        d_v=row[6:9].copy(),
        d_uu=row[9:12].copy(),
        d_uv=row[12:15].copy(),
        d_vv=row[15:18].copy(),
    )


def enneper_closed_form(omega: float, u: float, v: float) -> SurfacePoint:
    """Cubic (Enneper) member written out longhand, as a cross-check."""
    x = -(u**3 - 3.0 * u * v**2) + omega * u
    y = -(v**3 - 3.0 * v * u**2) + omega * v
    z = math.sqrt(3.0 * omega) * (u**2 - v**2)
    return SurfacePoint(x, y, z)


def quintic_closed_form(omega: float, u: float, v: float) -> SurfacePoint:
    """Quintic member written out longhand, as a cross-check."""
    x = -(u**5 - 10.0 * u**3 * v**2 + 5.0 * u * v**4) + omega * u * (u**2 - 3.0 * v**2)
    y = (5.0 * u**4 * v - 10.0 * u**2 * v**3 + v**5) + omega * v * (3.0 * u**2 - v**2)
    z = (math.sqrt(15.0 * omega) / 2.0) * (u**4 - 6.0 * u**2 * v**2 + v**4)
    return SurfacePoint(x, y, z)
