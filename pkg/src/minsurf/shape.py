"""Symmetry classification and shape certification.

Surfaces fall into four classes by degree mod 4, each with its own set
of mirror planes. Plane symmetry is tested through parameter
involutions: reflect(r(u, v)) must equal r applied to the involuted
parameters, which turns each claimed symmetry into an exact
floating-point identity (sign flips and swaps only) instead of a
point-set comparison.

Self-intersections are found by sampling, hashing sample positions into
a uniform spatial grid, refining near-coincident pairs with damped
Gauss-Newton on |r(a) - r(b)|^2, and deduplicating the converged hits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._backend import kernels
from .errors import ClassMismatchError
from .meshes import DomainRect
from .surfaces import BASE, Selector, SurfaceSpec, _blend, eval_many

__all__ = [
    "SymLabel",
    "SymmetryClass",
    "Plane",
    "SymmetryCase",
    "LineFit",
    "LineReport",
    "SelfIntersectionHit",
    "classify",
    "expected_symmetries",
    "verify_symmetry",
    "check_straight_lines",
    "find_self_intersections",
    "hits_on_symmetry_planes",
    "plane_distance",
    "render_analysis_report",
]


class SymLabel(Enum):
    FOUR_K_MINUS_1 = "4k-1"
    FOUR_K = "4k"
    FOUR_K_PLUS_1 = "4k+1"
    FOUR_K_PLUS_2 = "4k+2"


@dataclass(frozen=True)
class SymmetryClass:
    label: SymLabel
    k: int

    @property
    def degree(self) -> int:
        return {
            SymLabel.FOUR_K_MINUS_1: 4 * self.k - 1,
            SymLabel.FOUR_K: 4 * self.k,
            SymLabel.FOUR_K_PLUS_1: 4 * self.k + 1,
            SymLabel.FOUR_K_PLUS_2: 4 * self.k + 2,
        }[self.label]


def classify(n: int) -> SymmetryClass:
    """Class of degree n; total and a pure function of n mod 4."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise TypeError(f"degree must be an integer, got {type(n).__name__}")
    n = int(n)
    if n < 3:
        raise ValueError(f"degree must be >= 3, got {n}")
    r = n % 4
    if r == 3:
        return SymmetryClass(SymLabel.FOUR_K_MINUS_1, (n + 1) // 4)
    if r == 0:
        return SymmetryClass(SymLabel.FOUR_K, n // 4)
    if r == 1:
        return SymmetryClass(SymLabel.FOUR_K_PLUS_1, (n - 1) // 4)
    return SymmetryClass(SymLabel.FOUR_K_PLUS_2, (n - 2) // 4)


class Plane(Enum):
    X_ZERO = "X=0"
    Y_ZERO = "Y=0"
    Z_ZERO = "Z=0"
    X_EQ_Y = "X=Y"
    X_EQ_NEG_Y = "X=-Y"


_REFLECTIONS = {
    Plane.X_ZERO: np.diag([-1.0, 1.0, 1.0]),
    Plane.Y_ZERO: np.diag([1.0, -1.0, 1.0]),
    Plane.Z_ZERO: np.diag([1.0, 1.0, -1.0]),
    Plane.X_EQ_Y: np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
    Plane.X_EQ_NEG_Y: np.array([[0.0, -1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
}

_INVOLUTIONS = {
    "(-u, v)": lambda u, v: (-u, v),
    "(u, -v)": lambda u, v: (u, -v),
    "(-u, -v)": lambda u, v: (-u, -v),
    "(v, u)": lambda u, v: (v, u),
    "(-v, -u)": lambda u, v: (-v, -u),
}


@dataclass(frozen=True)
class SymmetryCase:
    """A mirror plane paired with the parameter involution realizing it."""

    plane: Plane
    involution: str

    def apply_involution(self, u, v):
        return _INVOLUTIONS[self.involution](u, v)

    @property
    def reflection(self) -> np.ndarray:
        return _REFLECTIONS[self.plane].copy()


_EXPECTED = {
    SymLabel.FOUR_K_MINUS_1: (
        SymmetryCase(Plane.X_ZERO, "(-u, v)"),
        SymmetryCase(Plane.Y_ZERO, "(u, -v)"),
    ),
    SymLabel.FOUR_K: (
        SymmetryCase(Plane.Z_ZERO, "(-u, -v)"),
        SymmetryCase(Plane.Y_ZERO, "(u, -v)"),
    ),
    SymLabel.FOUR_K_PLUS_1: (
        SymmetryCase(Plane.X_ZERO, "(-u, v)"),
        SymmetryCase(Plane.Y_ZERO, "(u, -v)"),
        SymmetryCase(Plane.X_EQ_NEG_Y, "(v, u)"),
        SymmetryCase(Plane.X_EQ_Y, "(-v, -u)"),
    ),
    SymLabel.FOUR_K_PLUS_2: (
        SymmetryCase(Plane.Z_ZERO, "(-u, -v)"),
        SymmetryCase(Plane.Y_ZERO, "(u, -v)"),
    ),
}


def expected_symmetries(cls: SymmetryClass) -> list[SymmetryCase]:
    """Mirror planes claimed for the class, with their involutions.

    The involution pairings are derived from the parity of the P/Q pair
    under sign flips and swaps; verify_symmetry validates them
    numerically before any report trusts them.
    """
    return list(_EXPECTED[cls.label])


def verify_symmetry(spec: SurfaceSpec, case: SymmetryCase, u_axis, v_axis) -> float:
    """Max relative gap between reflect(r(u, v)) and r(involution(u, v))."""
    cls = classify(spec.n)
    if case not in _EXPECTED[cls.label]:
        raise ClassMismatchError(
            f"symmetry {case.plane.value} with {case.involution} is not "
            f"expected for degree {spec.n} (class {cls.label.value})"
        )
    uu, vv = np.meshgrid(
        np.asarray(u_axis, dtype=np.float64),
        np.asarray(v_axis, dtype=np.float64),
        indexing="ij",
    )
    uu, vv = uu.ravel(), vv.ravel()
    direct = eval_many(spec, BASE, uu, vv)
    iu, iv = case.apply_involution(uu, vv)
    mapped = eval_many(spec, BASE, iu, iv)
    reflected = direct @ case.reflection.T
    gap = np.abs(reflected - mapped).max(axis=1)
    scale = np.maximum(1.0, np.abs(direct).max(axis=1))
    return float((gap / scale).max())


@dataclass(frozen=True)
class LineFit:
    direction: np.ndarray
    anchor: np.ndarray
    collinearity_residual: float


@dataclass(frozen=True)
class LineReport:
    diagonal: LineFit
    antidiagonal: LineFit
    angle_rad: float
    max_abs_z: float
    coordinate_scale: float


def _fit_line(points: np.ndarray) -> LineFit:
    anchor = points[0]
    chord = points[-1] - anchor
    length = float(np.linalg.norm(chord))
    direction = chord / length
    rel = points - anchor
    along = rel @ direction
    dev = rel - along[:, None] * direction
    residual = float(np.linalg.norm(dev, axis=1).max()) / max(1.0, length)
    return LineFit(direction, anchor.copy(), residual)


def check_straight_lines(spec: SurfaceSpec, samples: int = 101) -> LineReport:
    """Check the two diagonal parameter lines map to straight lines.

    Samples r(t, t) and r(t, -t) for t over [-2, 2], fits a line through
    the first and last sample of each, and reports the worst normalized
    deviation, the angle between the two directions, and the height
    extent (the lines are claimed to lie in the plane z = 0).
    """
    cls = classify(spec.n)
    if cls.label is not SymLabel.FOUR_K_MINUS_1:
        raise ClassMismatchError(
            f"straight diagonal lines are only expected for class 4k-1, "
            f"degree {spec.n} is {cls.label.value}"
        )
    if samples < 3:
        raise ValueError("need at least 3 samples")
    t = np.linspace(-2.0, 2.0, samples)
    diag_pts = eval_many(spec, BASE, t, t)
    anti_pts = eval_many(spec, BASE, t, -t)
    diag = _fit_line(diag_pts)
    anti = _fit_line(anti_pts)
    dot = float(np.clip(diag.direction @ anti.direction, -1.0, 1.0))
    angle = math.acos(dot)
    max_abs_z = float(
        max(np.abs(diag_pts[:, 2]).max(), np.abs(anti_pts[:, 2]).max())
    )
    scale = float(max(np.abs(diag_pts).max(), np.abs(anti_pts).max()))
    return LineReport(diag, anti, angle, max_abs_z, scale)


@dataclass(frozen=True)
class SelfIntersectionHit:
    """Two distinct parameter points whose images coincide after refinement."""

    pt_a: tuple[float, float]
    pt_b: tuple[float, float]
    position: np.ndarray
    separation: float
    plane_distance: float


def plane_distance(position, planes) -> float:
    """Distance from a point to the nearest of the given mirror planes,
    normalized by max(1, |position|)."""
    x, y, z = (float(position[0]), float(position[1]), float(position[2]))
    dists = []
    for plane in planes:
        if plane is Plane.X_ZERO:
            dists.append(abs(x))
        elif plane is Plane.Y_ZERO:
            dists.append(abs(y))
        elif plane is Plane.Z_ZERO:
            dists.append(abs(z))
        elif plane is Plane.X_EQ_Y:
            dists.append(abs(x - y) / math.sqrt(2.0))
        elif plane is Plane.X_EQ_NEG_Y:
            dists.append(abs(x + y) / math.sqrt(2.0))
        else:
            raise ValueError(f"unknown plane {plane!r}")
    norm = math.sqrt(x * x + y * y + z * z)
    return min(dists) / max(1.0, norm)


def _candidate_pairs(positions, uu, vv, cell_edge, delta_param, domain):
    """Representative near-coincident sample pairs from a spatial hash.

    Pairs must share a hash cell or sit in adjacent cells and be farther
    than delta_param apart in parameter space. To keep refinement work
    bounded, only the closest pair per (parameter-cell, parameter-cell)
    bucket (cells of size delta_param) is retained; the refinement
    re-discovers the rest of each intersection branch bucket by bucket.
    """
    cells = np.floor(positions / cell_edge).astype(np.int64)
    cells -= cells.min(axis=0)
    spans = cells.max(axis=0) + 2
    if int(spans[0]) * int(spans[1]) * int(spans[2]) >= 2**62:
        raise ValueError("delta_pos is too small for the sampled extent")
    key = (cells[:, 0] * spans[1] + cells[:, 1]) * spans[2] + cells[:, 2]
    order = np.argsort(key, kind="stable")
    skey = key[order]

    bu = np.floor((uu - domain.u_min) / delta_param).astype(np.int64)
    bv = np.floor((vv - domain.v_min) / delta_param).astype(np.int64)
    nb = max(int(bu.max()), int(bv.max())) + 2
    if nb**4 >= 2**62:
        raise ValueError("delta_param is too small for the domain")

    best = {}
    offsets = [
        (dx * spans[1] + dy) * spans[2] + dz
        for dx in (-1, 0, 1)
        for dy in (-1, 0, 1)
        for dz in (-1, 0, 1)
    ]
    for off in offsets:
        target = key + off
        lo = np.searchsorted(skey, target, side="left")
        hi = np.searchsorted(skey, target, side="right")
        counts = hi - lo
        total = int(counts.sum())
        if total == 0:
            continue
        src = np.repeat(np.arange(key.size), counts)
        within = np.arange(total) - np.repeat(counts.cumsum() - counts, counts)
        dst = order[np.repeat(lo, counts) + within]
        keep = src < dst
        src, dst = src[keep], dst[keep]
        if src.size == 0:
            continue
        dpar = np.hypot(uu[src] - uu[dst], vv[src] - vv[dst])
        keep = dpar > delta_param
        src, dst = src[keep], dst[keep]
        if src.size == 0:
            continue
        sep = np.linalg.norm(positions[src] - positions[dst], axis=1)
        bucket = (
            (bu[src].astype(np.int64) * nb + bv[src]) * nb + bu[dst]
        ) * nb + bv[dst]
        rank = np.lexsort((dst, src, sep, bucket))
        bsorted = bucket[rank]
        first = np.ones(bsorted.size, dtype=bool)
        first[1:] = bsorted[1:] != bsorted[:-1]
        for r in rank[first]:
            b = int(bucket[r])
            cand = (float(sep[r]), int(src[r]), int(dst[r]))
            if b not in best or cand < best[b]:
                best[b] = cand
    if not best:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    pairs = sorted((i, j) for _, i, j in best.values())
    arr = np.array(pairs, dtype=np.int64)
    return arr[:, 0], arr[:, 1]


def find_self_intersections(
    spec: SurfaceSpec,
    selector: Selector,
    domain: DomainRect,
    grid_res: int,
    delta_param: float | None = None,
    delta_pos: float | None = None,
) -> list[SelfIntersectionHit]:
    """Locate self-intersection points of the selected surface.

    Pipeline: sample a grid_res x grid_res grid, hash positions into
    cells of edge 4 * delta_pos, collect candidate pairs from same or
    adjacent cells with parameter separation above delta_param, refine
    each by damped Gauss-Newton on |r(a) - r(b)|^2, keep pairs that
    converge below delta_pos * 1e-3, and deduplicate hits whose
    positions coincide within delta_pos. Hits are sorted by position.

    Defaults: delta_param = 0.05 * domain width,
    delta_pos = 1e-3 * bounding-box diagonal of the samples.
    """
    if grid_res < 32:
        raise ValueError("grid_res must be >= 32")
    u_axis = np.linspace(domain.u_min, domain.u_max, grid_res)
    v_axis = np.linspace(domain.v_min, domain.v_max, grid_res)
    uu, vv = np.meshgrid(u_axis, v_axis, indexing="ij")
    uu, vv = uu.ravel(), vv.ravel()
    positions = eval_many(spec, selector, uu, vv)

    lo = positions.min(axis=0)
    hi = positions.max(axis=0)
    diag = float(np.linalg.norm(hi - lo))
    if delta_pos is None:
        delta_pos = 1e-3 * diag
    if delta_param is None:
        delta_param = 0.05 * max(domain.u_width, domain.v_width)
    if delta_pos <= 0.0 or delta_param <= 0.0:
        raise ValueError("delta_pos and delta_param must be positive")

    ia, ib = _candidate_pairs(
        positions, uu, vv, 4.0 * delta_pos, delta_param, domain
    )
    if ia.size == 0:
        return []

    ct, st = _blend(selector)  # same phase snapping as evaluation
    rua, rva, rub, rvb, sep = kernels.refine_pairs(
        spec.n,
        spec.omega,
        spec.z_coefficient,
        ct,
        st,
        uu[ia].copy(),
        vv[ia].copy(),
        uu[ib].copy(),
        vv[ib].copy(),
    )

    converged = sep < delta_pos * 1e-3
    dpar = np.hypot(rua - rub, rva - rvb)
    keep = (
        converged
        & (dpar > delta_param)
        & np.isfinite(sep)
        & np.isfinite(rua)
        & np.isfinite(rva)
        & np.isfinite(rub)
        & np.isfinite(rvb)
    )
    if not np.any(keep):
        return []
    rua, rva, rub, rvb, sep = (
        rua[keep],
        rva[keep],
        rub[keep],
        rvb[keep],
        sep[keep],
    )
    pa = eval_many(spec, selector, rua, rva)
    pb = eval_many(spec, selector, rub, rvb)
    mid = 0.5 * (pa + pb)

    order = np.lexsort((mid[:, 2], mid[:, 1], mid[:, 0]))
    planes = [case.plane for case in expected_symmetries(classify(spec.n))]
    hits: list[SelfIntersectionHit] = []
    accepted: list[np.ndarray] = []
    for idx in order:
        p = mid[idx]
        if any(float(np.linalg.norm(p - q)) < delta_pos for q in accepted):
            continue
        accepted.append(p)
        hits.append(
            SelfIntersectionHit(
                pt_a=(float(rua[idx]), float(rva[idx])),
                pt_b=(float(rub[idx]), float(rvb[idx])),
                position=p.copy(),
                separation=float(sep[idx]),
                plane_distance=plane_distance(p, planes),
            )
        )
    return hits


def hits_on_symmetry_planes(hits, cases, tol: float):
    """True when every hit sits within tol of one of the cases' planes.

    Returns (ok, worst_hit); worst_hit is the offender with the largest
    normalized plane distance, or None for an empty hit list.
    """
    planes = [case.plane for case in cases]
    ok = True
    worst = None
    worst_d = -1.0
    for hit in hits:
        d = plane_distance(hit.position, planes)
        if d > worst_d:
            worst_d = d
            worst = hit
        if d > tol:
            ok = False
    return ok, worst


def render_analysis_report(
    spec: SurfaceSpec,
    cls: SymmetryClass,
    symmetry_residuals,
    line_report: LineReport | None,
    hits,
    plane_tol: float,
    enforced: bool,
) -> str:
    """Plain-text analysis report: classification, symmetry residuals,
    line report and the self-intersection hit table."""
    out = []
    out.append(f"degree: {spec.n}")
    out.append(f"omega: {format(spec.omega, '.17g')}")
    out.append(f"class: {cls.label.value} (k={cls.k})")
    out.append("symmetries:")
    for case, residual in symmetry_residuals:
        out.append(
            f"  plane {case.plane.value:<4}  involution {case.involution:<9}"
            f"  residual {residual:.6e}"
        )
    if line_report is not None:
        out.append("straight lines:")
        for name, fit in (
            ("u=v ", line_report.diagonal),
            ("u=-v", line_report.antidiagonal),
        ):
            d = fit.direction
            out.append(
                f"  {name}  direction ({d[0]:.12f}, {d[1]:.12f}, {d[2]:.12f})"
                f"  residual {fit.collinearity_residual:.6e}"
            )
        out.append(f"  mutual angle: {math.degrees(line_report.angle_rad):.12f} deg")
        out.append(f"  max |z|: {line_report.max_abs_z:.6e}")
    out.append(f"self-intersection hits: {len(hits)}")
    if hits:
        worst = max(h.plane_distance for h in hits)
        status = "enforced" if enforced else "informational"
        out.append(
            f"  max plane distance: {worst:.6e} (tol {plane_tol:.1e}, {status})"
        )
        out.append(
            "  "
            + " ".join(
                f"{h:>12}"
                for h in ("u_a", "v_a", "u_b", "v_b", "x", "y", "z", "sep", "planedist")
            )
        )
        for h in hits:
            row = (
                h.pt_a[0], h.pt_a[1], h.pt_b[0], h.pt_b[1],
                h.position[0], h.position[1], h.position[2],
            )
            out.append(
                "  "
                + " ".join(f"{val:>12.5g}" for val in row)
                + f" {h.separation:>12.3e} {h.plane_distance:>12.3e}"
            )
    return "\n".join(out) + "\n"
