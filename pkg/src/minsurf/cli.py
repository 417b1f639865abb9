"""Command-line interface.

Subcommands: eval, verify, analyze, mesh, frames. Settings resolve with
the precedence command-line flag > MINSURF_* environment variable >
config-file entry > built-in default; the config file is flat
``key=value`` text. Exit codes: 0 success, 1 check failure, 2 usage or
validation error, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .diffgeo import (
    VerifyTolerances,
    format_records,
    grid_geometry,
    run_verification,
)
from .errors import DegreeTooLowError, MinsurfError, NegativeOmegaError
from .meshes import (
    DEFAULT_DOMAIN,
    FRAME_DOMAIN,
    DomainRect,
    family_frames,
    frame_filename,
    tessellate,
    write_csv,
    write_obj,
    write_ply,
)
from .shape import (
    SymLabel,
    check_straight_lines,
    classify,
    expected_symmetries,
    find_self_intersections,
    hits_on_symmetry_planes,
    render_analysis_report,
    verify_symmetry,
)
from .surfaces import (
    BASE,
    CONJUGATE,
    Selector,
    SurfaceSpec,
    eval_many,
    family,
    jet_many,
    make_surface,
)

ENV_PREFIX = "MINSURF_"

DEFAULT_GRID = 64
DEFAULT_OMEGA = 1.0
DEFAULT_FORMAT = "obj"

TOL_DEFAULTS = {
    "tol_minimality": 1e-8,
    "tol_isothermal": 1e-10,
    "tol_symmetry": 1e-12,
    "tol_self_intersection": 1e-6,
}

LINE_RESIDUAL_TOL = 1e-10
LINE_ANGLE_TOL = 1e-10
LINE_Z_TOL = 1e-12

_CONFIG_KEYS = {
    "degree",
    "omega",
    "conjugate",
    "phase",
    "domain",
    "grid",
    "format",
    "output",
    "tol_minimality",
    "tol_isothermal",
    "tol_symmetry",
    "tol_self_intersection",
}


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_int(text: str, name: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{name}: expected an integer, got {text!r}") from None


def _parse_float(text: str, name: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{name}: expected a number, got {text!r}") from None


def _parse_bool(text: str, name: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"{name}: expected a boolean, got {text!r}")


def _parse_domain(text: str, name: str) -> list[float]:
    parts = text.replace(",", " ").split()
    if len(parts) != 4:
        raise UsageError(f"{name}: expected 4 numbers (umin umax vmin vmax)")
    return [_parse_float(p, name) for p in parts]


def _parse_grid(text: str, name: str) -> list[int]:
    parts = text.replace(",", " ").split()
    if len(parts) not in (1, 2):
        raise UsageError(f"{name}: expected 1 or 2 integers")
    return [_parse_int(p, name) for p in parts]


def _load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"--config: {path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        key = key.strip().lower().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"--config: {path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


class _Settings:
    """Flag > environment > config file > default, per key."""

    def __init__(self, args: argparse.Namespace):
        config_path = getattr(args, "config", None)
        if config_path is None:
            config_path = os.environ.get(ENV_PREFIX + "CONFIG")
        self.config = _load_config(config_path) if config_path else {}
        self.args = args

    def _raw(self, key: str):
        flag = getattr(self.args, key, None)
        if flag is not None:
            return flag, "flag"
        env = os.environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            return env, "env"
        if key in self.config:
            return self.config[key], "config"
        return None, "default"

    def get_int(self, key: str, default=None):
        raw, origin = self._raw(key)
        if raw is None:
            return default
        return raw if origin == "flag" else _parse_int(raw, f"--{key}")

    def get_float(self, key: str, default=None):
        raw, origin = self._raw(key)
        if raw is None:
            return default
        return raw if origin == "flag" else _parse_float(raw, f"--{key}")

    def get_bool(self, key: str, default=False):
        raw, origin = self._raw(key)
        if raw is None:
            return default
        return raw if origin == "flag" else _parse_bool(raw, f"--{key}")

    def get_domain(self, key: str, default: DomainRect) -> DomainRect:
        raw, origin = self._raw(key)
        if raw is None:
            return default
        vals = raw if origin == "flag" else _parse_domain(raw, f"--{key}")
        try:
            return DomainRect(*[float(x) for x in vals])
        except ValueError as exc:
            raise UsageError(f"--domain: {exc}") from None

    def get_grid(self, key: str, default: int):
        raw, origin = self._raw(key)
        if raw is None:
            vals = [default]
        elif origin == "flag":
            vals = raw
        else:
            vals = _parse_grid(raw, f"--{key}")
        if len(vals) == 1:
            return int(vals[0]), int(vals[0])
        return int(vals[0]), int(vals[1])

    def get_str(self, key: str, default=None):
        raw, _ = self._raw(key)
        return default if raw is None else str(raw)


@dataclass
class RunConfig:
    spec: SurfaceSpec
    selector: Selector
    domain: DomainRect
    grid: tuple[int, int]
    fmt: str
    output: str | None
    tolerances: dict[str, float]


def _build_run_config(args: argparse.Namespace, frames: bool = False) -> RunConfig:
    st = _Settings(args)
    degree = st.get_int("degree")
    if degree is None:
        raise UsageError("--degree: a surface degree is required")
    omega = st.get_float("omega", DEFAULT_OMEGA)
    try:
        spec = make_surface(degree, omega)
    except DegreeTooLowError as exc:
        raise UsageError(f"--degree: {exc}") from None
    except NegativeOmegaError as exc:
        raise UsageError(f"--omega: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise UsageError(f"--degree/--omega: {exc}") from None

    conjugate = st.get_bool("conjugate", False)
    phase = st.get_float("phase", None)
    if conjugate and phase is not None:
        raise UsageError("--conjugate and --phase are mutually exclusive")
    if conjugate:
        selector = CONJUGATE
    elif phase is not None:
        if not math.isfinite(phase):
            raise UsageError("--phase: must be finite")
        selector = family(phase)
    else:
        selector = BASE

    domain = st.get_domain("domain", FRAME_DOMAIN if frames else DEFAULT_DOMAIN)
    grid = st.get_grid("grid", DEFAULT_GRID)
    if grid[0] < 1 or grid[1] < 1:
        raise UsageError("--grid: values must be >= 1")
    output = st.get_str("output", None)
    fmt = st.get_str("format", None)
    if fmt is not None:
        fmt = fmt.lower()
        if fmt not in ("obj", "ply", "csv"):
            raise UsageError(f"--format: must be obj, ply or csv, got {fmt!r}")
    elif output is not None and Path(output).suffix.lower() in (".obj", ".ply", ".csv"):
        fmt = Path(output).suffix.lower()[1:]
    else:
        fmt = DEFAULT_FORMAT
    tolerances = {
        key: st.get_float(key, default) for key, default in TOL_DEFAULTS.items()
    }
    for key, value in tolerances.items():
        if not (value > 0.0):
            raise UsageError(f"--{key.replace('_', '-')}: must be positive")
    return RunConfig(spec, selector, domain, grid, fmt, output, tolerances)


def _axes(domain: DomainRect, grid: tuple[int, int]):
    return (
        np.linspace(domain.u_min, domain.u_max, grid[0]),
        np.linspace(domain.v_min, domain.v_max, grid[1]),
    )


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = _build_run_config(args)
    u, v = float(args.u), float(args.v)
    if not (math.isfinite(u) and math.isfinite(v)):
        raise UsageError("-u/-v: parameter values must be finite")
    pos = eval_many(cfg.spec, cfg.selector, np.array([u]), np.array([v]))[0]
    lines = [f"x={_fmt(pos[0])}", f"y={_fmt(pos[1])}", f"z={_fmt(pos[2])}"]
    if args.jet or args.forms or args.curvatures:
        row = jet_many(cfg.spec, cfg.selector, np.array([u]), np.array([v]))[0]
        if args.jet:
            names = (
                "xu", "yu", "zu", "xv", "yv", "zv",
                "xuu", "yuu", "zuu", "xuv", "yuv", "zuv", "xvv", "yvv", "zvv",
            )
            lines += [f"{nm}={_fmt(val)}" for nm, val in zip(names, row[3:18])]
        if args.forms or args.curvatures:
            geo = grid_geometry(cfg.spec, cfg.selector, np.array([u]), np.array([v]))
            if args.forms:
                lines += [
                    f"e={_fmt(geo.e[0])}",
                    f"f={_fmt(geo.f[0])}",
                    f"g={_fmt(geo.g[0])}",
                ]
            if args.curvatures:
                lines += [
                    f"l={_fmt(geo.l[0])}",
                    f"m={_fmt(geo.m[0])}",
                    f"n={_fmt(geo.nn[0])}",
                    f"h={_fmt(geo.mean[0])}",
                    f"k={_fmt(geo.gaussian[0])}",
                    f"nx={_fmt(geo.normal[0, 0])}",
                    f"ny={_fmt(geo.normal[0, 1])}",
                    f"nz={_fmt(geo.normal[0, 2])}",
                    f"singular={'true' if geo.singular[0] else 'false'}",
                ]
    print("\n".join(lines))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _build_run_config(args)
    u_axis, v_axis = _axes(cfg.domain, cfg.grid)
    tol = VerifyTolerances(
        minimality=cfg.tolerances["tol_minimality"],
        isothermal=cfg.tolerances["tol_isothermal"],
    )
    report = run_verification(cfg.spec, u_axis, v_axis, tol=tol)
    header = f"{'suite':<16}{'checked':>9}{'skipped':>9}{'worst':>13}{'tol':>10}  status"
    print(header)
    for suite in report.suites:
        status = "PASS" if suite.passed else "FAIL"
        print(
            f"{suite.name:<16}{suite.checked:>9}{suite.skipped:>9}"
            f"{suite.worst:>13.3e}{suite.tolerance:>10.1e}  {status}"
        )
        if not suite.passed:
            print(f"  worst at {suite.worst_at}")
    print(f"singular points skipped: {len(report.singular_points)}")
    for pu, pv in report.singular_points:
        print(f"  (u={_fmt(pu)}, v={_fmt(pv)})")
    if cfg.output is not None:
        Path(cfg.output).write_text(format_records(report.records), encoding="ascii")
    if not report.passed and report.records:
        sys.stdout.write(format_records(report.records))
    print(f"overall: {'PASS' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _build_run_config(args)
    spec = cfg.spec
    cls = classify(spec.n)
    u_axis, v_axis = _axes(cfg.domain, cfg.grid)
    cases = expected_symmetries(cls)
    residuals = [(case, verify_symmetry(spec, case, u_axis, v_axis)) for case in cases]
    tol_sym = cfg.tolerances["tol_symmetry"]
    ok = all(res <= tol_sym for _, res in residuals)

    line_report = None
    if cls.label is SymLabel.FOUR_K_MINUS_1:
        line_report = check_straight_lines(spec)
        ok &= line_report.diagonal.collinearity_residual <= LINE_RESIDUAL_TOL
        ok &= line_report.antidiagonal.collinearity_residual <= LINE_RESIDUAL_TOL
        ok &= abs(line_report.angle_rad - math.pi / 2.0) <= LINE_ANGLE_TOL
        ok &= line_report.max_abs_z <= LINE_Z_TOL * max(1.0, line_report.coordinate_scale)

    res = min(cfg.grid)
    if res < 32:
        raise UsageError("--grid: the self-intersection scan needs a grid of >= 32")
    hits = find_self_intersections(
        spec,
        cfg.selector,
        cfg.domain,
        res,
        delta_param=args.delta_param,
        delta_pos=args.delta_pos,
    )
    plane_tol = cfg.tolerances["tol_self_intersection"]
    enforced = cls.label is SymLabel.FOUR_K_PLUS_1
    on_planes, _worst = hits_on_symmetry_planes(hits, cases, plane_tol)
    if enforced:
        ok &= on_planes

    sys.stdout.write(
        render_analysis_report(
            spec, cls, residuals, line_report, hits, plane_tol, enforced
        )
    )
    print(f"overall: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def _summary(path, mesh_or_counts, points) -> str:
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    bbox = (
        f"bbox [{lo[0]:.6g}, {hi[0]:.6g}] x [{lo[1]:.6g}, {hi[1]:.6g}]"
        f" x [{lo[2]:.6g}, {hi[2]:.6g}]"
    )
    return f"wrote {path}: {mesh_or_counts}, {bbox}"


def cmd_mesh(args: argparse.Namespace) -> int:
    cfg = _build_run_config(args)
    nu, nv = cfg.grid
    output = cfg.output
    if output is None:
        output = f"surface_n{cfg.spec.n}.{cfg.fmt}"
    if cfg.fmt == "csv":
        u_axis, v_axis = cfg.domain.axes(nu, nv)
        uu, vv = np.meshgrid(u_axis, v_axis, indexing="ij")
        uu, vv = uu.ravel(), vv.ravel()
        pts = eval_many(cfg.spec, cfg.selector, uu, vv)
        write_csv(uu, vv, pts, output)
        print(_summary(output, f"{pts.shape[0]} samples", pts))
        return 0
    mesh = tessellate(cfg.spec, cfg.selector, cfg.domain, nu, nv, with_normals=True)
    writer = write_obj if cfg.fmt == "obj" else write_ply
    writer(mesh, output)
    print(
        _summary(
            output,
            f"{mesh.vertices.shape[0]} vertices, {mesh.faces.shape[0]} faces",
            mesh.vertices,
        )
    )
    return 0


def cmd_frames(args: argparse.Namespace) -> int:
    cfg = _build_run_config(args, frames=True)
    nu, nv = cfg.grid
    outdir = Path(cfg.output if cfg.output is not None else "frames")
    outdir.mkdir(parents=True, exist_ok=True)
    frames = family_frames(cfg.spec, domain=cfg.domain, nu=nu, nv=nv, with_normals=True)
    for index, (t, mesh) in enumerate(frames):
        path = outdir / frame_filename(index, t)
        write_obj(mesh, path)
        print(
            f"wrote {path}: t={_fmt(t)}, {mesh.vertices.shape[0]} vertices, "
            f"{mesh.faces.shape[0]} faces"
        )
    print(f"{len(frames)} frames in {outdir}")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-n", "--degree", type=int, default=None,
                        help="polynomial degree (>= 3)")
    parser.add_argument("-w", "--omega", type=float, default=None,
                        help="shape parameter omega (>= 0, default 1)")
    parser.add_argument("--conjugate", action="store_true", default=None,
                        help="evaluate the conjugate surface")
    parser.add_argument("--phase", type=float, default=None, metavar="T",
                        help="evaluate the deformation family at phase t")
    parser.add_argument("--domain", type=float, nargs=4, default=None,
                        metavar=("UMIN", "UMAX", "VMIN", "VMAX"),
                        help="parameter rectangle (default [-1,1]^2; frames [-4,4]^2)")
    parser.add_argument("--grid", type=int, nargs="+", default=None, metavar="N",
                        help="grid resolution, one or two values (default 64)")
    parser.add_argument("--config", type=str, default=None,
                        help="flat key=value config file")
    for key in TOL_DEFAULTS:
        flag = "--" + key.replace("_", "-")
        parser.add_argument(flag, dest=key, type=float, default=None,
                            help=f"override the {key.replace('tol_', '')} tolerance")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minsurf",
        description=(
            "Construct, certify and export degree-n polynomial minimal "
            "surfaces, their conjugates and the isometric deformation family."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one parameter point")
    _add_common(p_eval)
    p_eval.add_argument("-u", type=float, required=True, help="u parameter")
    p_eval.add_argument("-v", type=float, required=True, help="v parameter")
    p_eval.add_argument("--jet", action="store_true", help="print first/second partials")
    p_eval.add_argument("--forms", action="store_true", help="print E, F, G")
    p_eval.add_argument("--curvatures", action="store_true",
                        help="print second form, H, K and the unit normal")
    p_eval.set_defaults(func=cmd_eval)

    p_verify = sub.add_parser("verify", help="run the certification suites")
    _add_common(p_verify)
    p_verify.add_argument("-o", "--output", type=str, default=None,
                          help="write the failure-record report to this path")
    p_verify.set_defaults(func=cmd_verify)

    p_analyze = sub.add_parser("analyze", help="classification, symmetries, lines, self-intersections")
    _add_common(p_analyze)
    p_analyze.add_argument("--delta-param", dest="delta_param", type=float, default=None,
                           help="minimum parameter separation of a hit pair")
    p_analyze.add_argument("--delta-pos", dest="delta_pos", type=float, default=None,
                           help="position tolerance for hits (default 1e-3 * bbox diagonal)")
    p_analyze.set_defaults(func=cmd_analyze)

    p_mesh = sub.add_parser("mesh", help="tessellate and write OBJ/PLY/CSV")
    _add_common(p_mesh)
    p_mesh.add_argument("--format", type=str, default=None, choices=("obj", "ply", "csv"))
    p_mesh.add_argument("-o", "--output", type=str, default=None, help="output path")
    p_mesh.set_defaults(func=cmd_mesh)

    p_frames = sub.add_parser("frames", help="write the deformation frame sequence")
    _add_common(p_frames)
    p_frames.add_argument("-o", "--output", type=str, default=None,
                          help="output directory (default frames/)")
    p_frames.set_defaults(func=cmd_frames)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (MinsurfError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
