"""Fundamental forms, curvature, and the grid certification suites.

Everything here consumes analytic jets. Mean and Gaussian curvature are
computed from analytic second derivatives only; finite differences are
relegated to the cross-check ``fd_jet_check``, because the certification
tolerances sit far below finite-difference noise.

All residuals are relative, normalized by max(local magnitudes, 1),
since surface values scale like |u|^n. Grid sweeps use plain maxima
over precomputed arrays, so results are deterministic regardless of
evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .surfaces import (
    BASE,
    CONJUGATE,
    DEFAULT_FAMILY_PHASES,
    Selector,
    SurfaceJet,
    SurfaceSpec,
    Variant,
    family,
    jet_many,
)

__all__ = [
    "EPS_SINGULAR",
    "FundamentalForms",
    "CurvatureReport",
    "IsothermalResidual",
    "FamilyIsometryReport",
    "VerifyTolerances",
    "SuiteResult",
    "VerificationReport",
    "first_form",
    "curvatures",
    "isothermal_residual",
    "cauchy_riemann_residual",
    "family_isometry_check",
    "fd_jet_check",
    "grid_geometry",
    "grid_normals",
    "run_verification",
    "format_records",
]

# Threshold on the scale-invariant degeneracy ratio (EG - F^2) / (E + G)^2.
# The metric collapses exactly at the origin branch point (degree >= 4);
# a relative threshold avoids false positives where the metric is merely
# small or large.
EPS_SINGULAR = 1e-14


@dataclass(frozen=True)
class FundamentalForms:
    """Coefficients of the first (and optionally second) fundamental form."""

    e: float
    f: float
    g: float
    l: float = 0.0
    m: float = 0.0
    nn: float = 0.0
    area_element: float = 0.0


@dataclass(frozen=True)
class CurvatureReport:
    """Curvatures and unit normal; fields are NaN/zero when singular."""

    mean: float
    gaussian: float
    unit_normal: np.ndarray
    singular: bool


class IsothermalResidual(NamedTuple):
    f_rel: float
    eg_rel: float
    singular: bool


@dataclass(frozen=True)
class FamilyIsometryReport:
    form_deviation: float
    gaussian_deviation: float
    skipped: int


class _Geometry(NamedTuple):
    """Per-grid-point geometry arrays (flattened grid)."""

    e: np.ndarray
    f: np.ndarray
    g: np.ndarray
    l: np.ndarray
    m: np.ndarray
    nn: np.ndarray
    mean: np.ndarray
    gaussian: np.ndarray
    normal: np.ndarray
    singular: np.ndarray


def _geometry_from_jets(jets: np.ndarray) -> _Geometry:
    du = jets[:, 3:6]
    dv = jets[:, 6:9]
    duu = jets[:, 9:12]
    duv = jets[:, 12:15]
    dvv = jets[:, 15:18]
    e = np.einsum("ij,ij->i", du, du)
    f = np.einsum("ij,ij->i", du, dv)
    g = np.einsum("ij,ij->i", dv, dv)
    w2 = e * g - f * f
    singular = w2 <= EPS_SINGULAR * (e + g) ** 2
    cross = np.cross(du, dv)
    wn = np.sqrt(np.einsum("ij,ij->i", cross, cross))
    safe = np.where(singular, 1.0, wn)
    normal = cross / safe[:, None]
    normal[singular] = 0.0
    l = np.einsum("ij,ij->i", duu, normal)
    m = np.einsum("ij,ij->i", duv, normal)
    nn = np.einsum("ij,ij->i", dvv, normal)
    with np.errstate(divide="ignore", invalid="ignore"):
        mean = (e * nn - 2.0 * f * m + g * l) / (2.0 * w2)
        gaussian = (l * nn - m * m) / w2
    mean[singular] = np.nan
    gaussian[singular] = np.nan
    return _Geometry(e, f, g, l, m, nn, mean, gaussian, normal, singular)


def grid_geometry(spec: SurfaceSpec, selector: Selector, u, v) -> _Geometry:
    """Forms, curvatures and normals over flattened parameter arrays."""
    return _geometry_from_jets(jet_many(spec, selector, u, v))


def grid_normals(spec: SurfaceSpec, selector: Selector, u, v):
    """Unit normals over a grid; zero vector at singular points."""
    geo = grid_geometry(spec, selector, u, v)
    return geo.normal, geo.singular


def first_form(jet: SurfaceJet) -> FundamentalForms:
    """First fundamental form coefficients E, F, G at one point."""
    e = float(jet.d_u @ jet.d_u)
    f = float(jet.d_u @ jet.d_v)
    g = float(jet.d_v @ jet.d_v)
    area = math.sqrt(max(e * g - f * f, 0.0))
    return FundamentalForms(e=e, f=f, g=g, area_element=area)


def curvatures(jet: SurfaceJet) -> CurvatureReport:
    """Mean/Gaussian curvature and unit normal at one point.

    Singularity (vanishing area element, flagged relative to E + G) is a
    state, not an error: the report carries NaN curvatures and a zero
    normal there.
    """
    jets = np.concatenate(
        (jet.position, jet.d_u, jet.d_v, jet.d_uu, jet.d_uv, jet.d_vv)
    )[None, :]
    geo = _geometry_from_jets(jets)
    return CurvatureReport(
        mean=float(geo.mean[0]),
        gaussian=float(geo.gaussian[0]),
        unit_normal=geo.normal[0].copy(),
        singular=bool(geo.singular[0]),
    )


def minimality_residual(mean, gaussian):
    """Curvature-scaled residual |H| / (1 + |K|); NaN-free off singular points."""
    return np.abs(mean) / (1.0 + np.abs(gaussian))


def isothermal_residual(
    spec: SurfaceSpec, selector: Selector, u: float, v: float
) -> IsothermalResidual:
    """|F| and |E - G| relative to max(E, G); zero with flag when degenerate."""
    geo = grid_geometry(spec, selector, np.array([u]), np.array([v]))
    e, f, g = float(geo.e[0]), float(geo.f[0]), float(geo.g[0])
    denom = max(e, g)
    if denom <= 0.0:
        return IsothermalResidual(0.0, 0.0, True)
    return IsothermalResidual(
        abs(f) / denom, abs(e - g) / denom, bool(geo.singular[0])
    )


def _cr_residual_arrays(spec: SurfaceSpec, u, v) -> np.ndarray:
    """Conjugacy residuals per coordinate, shape (m, 3)."""
    jb = jet_many(spec, BASE, u, v)
    jc = jet_many(spec, CONJUGATE, u, v)
    out = np.empty((jb.shape[0], 3))
    for c in range(3):
        cu, cv = jb[:, 3 + c], jb[:, 6 + c]
        su, sv = jc[:, 3 + c], jc[:, 6 + c]
        scale = np.maximum(
            1.0,
            np.maximum(
                np.maximum(np.abs(cu), np.abs(cv)),
                np.maximum(np.abs(su), np.abs(sv)),
            ),
        )
        out[:, c] = np.maximum(np.abs(cu - sv), np.abs(cv + su)) / scale
    return out


def cauchy_riemann_residual(spec: SurfaceSpec, u: float, v: float) -> np.ndarray:
    """Per-coordinate conjugacy residuals at one point, shape (3,).

    Coordinate c of the base surface and coordinate c of the conjugate
    must satisfy d c/du = d c_s/dv and d c/dv = -d c_s/du.
    """
    return _cr_residual_arrays(spec, np.array([u]), np.array([v]))[0]


def family_isometry_check(
    spec: SurfaceSpec, t: float, u_axis, v_axis
) -> FamilyIsometryReport:
    """Deviation of the phase-t metric and Gaussian curvature from phase 0.

    Singular points (shared by every phase) are excluded and counted.
    """
    uu, vv = _mesh(u_axis, v_axis)
    g0 = grid_geometry(spec, BASE, uu, vv)
    gt = grid_geometry(spec, family(t), uu, vv)
    mask = ~(g0.singular | gt.singular)
    skipped = int(np.count_nonzero(~mask))
    if not np.any(mask):
        return FamilyIsometryReport(0.0, 0.0, skipped)
    denom = np.maximum(g0.e[mask], g0.g[mask])
    denom = np.maximum(denom, 1e-300)
    form_dev = np.maximum(
        np.abs(gt.e[mask] - g0.e[mask]),
        np.maximum(np.abs(gt.f[mask] - g0.f[mask]), np.abs(gt.g[mask] - g0.g[mask])),
    ) / denom
    kd = np.maximum(np.abs(g0.gaussian[mask]), np.abs(gt.gaussian[mask]))
    kd = np.maximum(kd, 1e-300)
    gauss_dev = np.abs(gt.gaussian[mask] - g0.gaussian[mask]) / kd
    return FamilyIsometryReport(
        float(form_dev.max()), float(gauss_dev.max()), skipped
    )


def fd_jet_check(
    spec: SurfaceSpec, selector: Selector, u: float, v: float, h: float | None = None
) -> float:
    """Max relative gap between analytic partials and central differences.

    First partials are differenced from positions. Second partials are
    differenced from the analytic first partials: at the default step the
    double-difference of positions is roundoff-bound, while differencing
    the first-order jet checks the same derivative chain with full
    precision.
    """
    if h is None:
        h = 1e-5 * max(1.0, abs(u), abs(v))
    if h <= 0.0:
        raise ValueError("step h must be positive")

    us = np.array([u + h, u - h, u, u, u])
    vs = np.array([v, v, v + h, v - h, v])
    rows = jet_many(spec, selector, us, vs)
    pos = rows[:, 0:3]
    fd_du = (pos[0] - pos[1]) / (2.0 * h)
    fd_dv = (pos[2] - pos[3]) / (2.0 * h)
    fd_duu = (rows[0, 3:6] - rows[1, 3:6]) / (2.0 * h)
    fd_duv = (rows[2, 3:6] - rows[3, 3:6]) / (2.0 * h)
    fd_dvv = (rows[2, 6:9] - rows[3, 6:9]) / (2.0 * h)

    an = rows[4]
    an_first = an[3:9]
    an_second = an[9:18]
    scale1 = max(1.0, float(np.abs(an_first).max()))
    scale2 = max(1.0, float(np.abs(an_second).max()))
    err1 = max(
        float(np.abs(fd_du - an[3:6]).max()), float(np.abs(fd_dv - an[6:9]).max())
    )
    err2 = max(
        float(np.abs(fd_duu - an[9:12]).max()),
        float(np.abs(fd_duv - an[12:15]).max()),
        float(np.abs(fd_dvv - an[15:18]).max()),
    )
    return max(err1 / scale1, err2 / scale2)


# --- certification sweep -------------------------------------------------


@dataclass(frozen=True)
class VerifyTolerances:
    minimality: float = 1e-8
    isothermal: float = 1e-10
    cauchy_riemann: float = 1e-12
    isometry_form: float = 1e-9
    isometry_gauss: float = 1e-8
    jet_fd: float = 1e-6
    jet_fd_high_degree: float = 1e-5  # degrees >= 10


@dataclass
class SuiteResult:
    name: str
    checked: int
    skipped: int
    worst: float
    worst_at: str
    tolerance: float
    passed: bool


@dataclass
class VerificationReport:
    suites: list[SuiteResult] = field(default_factory=list)
    records: list[tuple] = field(default_factory=list)
    singular_points: list[tuple[float, float]] = field(default_factory=list)
    passed: bool = True


def _mesh(u_axis, v_axis):
    u_axis = np.asarray(u_axis, dtype=np.float64)
    v_axis = np.asarray(v_axis, dtype=np.float64)
    uu, vv = np.meshgrid(u_axis, v_axis, indexing="ij")
    return uu.ravel(), vv.ravel()


def _selector_phase(sel: Selector) -> float:
    if sel.variant is Variant.BASE:
        return 0.0
    if sel.variant is Variant.CONJUGATE:
        return math.pi / 2.0
    return sel.phase


def run_verification(
    spec: SurfaceSpec,
    u_axis,
    v_axis,
    phases=DEFAULT_FAMILY_PHASES,
    tol: VerifyTolerances = VerifyTolerances(),
) -> VerificationReport:
    """Run every certification suite for one surface over one grid.

    Suites: minimality, isothermality, conjugacy (base vs conjugate
    first partials), family isometry against phase 0, and analytic jets
    against central differences at seeded random points.
    """
    report = VerificationReport()
    uu, vv = _mesh(u_axis, v_axis)
    selectors = [BASE, CONJUGATE] + [family(t) for t in phases]
    geoms = {sel: grid_geometry(spec, sel, uu, vv) for sel in selectors}

    singular_mask = geoms[BASE].singular
    sing_pts = sorted(
        {(float(a), float(b)) for a, b in zip(uu[singular_mask], vv[singular_mask])}
    )
    report.singular_points = sing_pts

    def add_suite(name, tolerance, worsts):
        # worsts: iterable of (selector, residual_array, mask) already computed
        worst = -1.0
        worst_at = "-"
        checked = 0
        skipped = 0
        for sel, values, mask in worsts:
            t = _selector_phase(sel)
            checked += int(np.count_nonzero(mask))
            skipped += int(np.count_nonzero(~mask))
            vals = np.where(mask, values, -1.0)
            if vals.size and vals.max() > worst:
                i = int(vals.argmax())
                worst = float(vals[i])
                worst_at = f"{sel.name} t={t:.6g} u={uu[i]:.6g} v={vv[i]:.6g}"
            over = mask & (values > tolerance)
            for i in np.flatnonzero(over):
                report.records.append(
                    (sel.name, t, float(uu[i]), float(vv[i]), name, float(values[i]))
                )
        worst = max(worst, 0.0)
        result = SuiteResult(name, checked, skipped, worst, worst_at, tolerance, worst <= tolerance)
        report.suites.append(result)
        return result

    # minimality: |H| scaled by the local curvature magnitude
    add_suite(
        "minimality",
        tol.minimality,
        [
            (sel, np.nan_to_num(minimality_residual(g.mean, g.gaussian), nan=0.0), ~g.singular)
            for sel, g in geoms.items()
        ],
    )

    # isothermality: F and E - G relative to max(E, G)
    iso = []
    for sel, g in geoms.items():
        denom = np.maximum(np.maximum(g.e, g.g), 1e-300)
        res = np.maximum(np.abs(g.f), np.abs(g.e - g.g)) / denom
        iso.append((sel, res, ~g.singular))
    add_suite("isothermal", tol.isothermal, iso)

    # conjugacy of base and conjugate, per coordinate
    cr = _cr_residual_arrays(spec, uu, vv).max(axis=1)
    add_suite(
        "cauchy_riemann",
        tol.cauchy_riemann,
        [(BASE, cr, np.ones_like(cr, dtype=bool))],
    )

    # family isometry against phase 0
    g0 = geoms[BASE]
    form_rows = []
    gauss_rows = []
    for t in phases:
        gt = geoms[family(t)]
        mask = ~(g0.singular | gt.singular)
        denom = np.maximum(np.maximum(g0.e, g0.g), 1e-300)
        form = np.maximum(
            np.abs(gt.e - g0.e), np.maximum(np.abs(gt.f - g0.f), np.abs(gt.g - g0.g))
        ) / denom
        kd = np.maximum(np.maximum(np.abs(g0.gaussian), np.abs(gt.gaussian)), 1e-300)
        gauss = np.abs(gt.gaussian - g0.gaussian) / kd
        form_rows.append((family(t), form, mask))
        gauss_rows.append((family(t), np.nan_to_num(gauss, nan=0.0), mask))
    add_suite("isometry_form", tol.isometry_form, form_rows)
    add_suite("isometry_gauss", tol.isometry_gauss, gauss_rows)

    # analytic jets against central differences at seeded random points
    rng = np.random.default_rng(10 * spec.n + 7)
    lo_u, hi_u = float(np.min(u_axis)), float(np.max(u_axis))
    lo_v, hi_v = float(np.min(v_axis)), float(np.max(v_axis))
    pts = rng.uniform((lo_u, lo_v), (hi_u, hi_v), size=(25, 2))
    fd_tol = tol.jet_fd if spec.n < 10 else tol.jet_fd_high_degree
    worst_fd = -1.0
    worst_at = "-"
    for sel in selectors:
        t = _selector_phase(sel)
        for pu, pv in pts:
            err = fd_jet_check(spec, sel, float(pu), float(pv))
            if err > worst_fd:
                worst_fd = err
                worst_at = f"{sel.name} t={t:.6g} u={pu:.6g} v={pv:.6g}"
            if err > fd_tol:
                report.records.append(
                    (sel.name, t, float(pu), float(pv), "jet_fd", err)
                )
    report.suites.append(
        SuiteResult(
            "jet_fd",
            len(selectors) * len(pts),
            0,
            max(worst_fd, 0.0),
            worst_at,
            fd_tol,
            worst_fd <= fd_tol,
        )
    )

    report.passed = all(s.passed for s in report.suites)
    return report


def format_records(records) -> str:
    """Line-oriented failure report: selector t u v kind value per record."""
    lines = [
        f"{sel} {t:.17g} {u:.17g} {v:.17g} {kind} {value:.6e}"
        for sel, t, u, v, kind, value in records
    ]
    return "\n".join(lines) + ("\n" if lines else "")
