"""Polynomial minimal surfaces of arbitrary degree.

Evaluates an explicit two-parameter family of degree-n polynomial
minimal surfaces (the cubic member is the classical Enneper surface),
the harmonic-conjugate partner of each, and the one-parameter isometric
blend between the two; computes their differential geometry from
analytic jets; certifies minimality, isothermality, conjugacy, mirror
symmetries, straight-line containment and the self-intersection locus;
and tessellates any member into OBJ/PLY/CSV meshes.

Hot kernels run under numba when available, with a pure-numpy fallback
selected by the MINSURF_BACKEND environment variable.
"""

from ._backend import backend_name
from .diffgeo import (
    CurvatureReport,
    FamilyIsometryReport,
    FundamentalForms,
    IsothermalResidual,
    VerificationReport,
    VerifyTolerances,
    cauchy_riemann_residual,
    curvatures,
    family_isometry_check,
    fd_jet_check,
    first_form,
    format_records,
    isothermal_residual,
    run_verification,
)
from .errors import (
    ClassMismatchError,
    DegeneratePlanarWarning,
    DegreeTooLowError,
    InvalidMeshError,
    MinsurfError,
    NegativeOmegaError,
)
from .meshes import (
    DEFAULT_DOMAIN,
    FRAME_DOMAIN,
    DomainRect,
    Mesh,
    family_frames,
    frame_filename,
    tessellate,
    write_csv,
    write_obj,
    write_ply,
)
from .pq import (
    PQJet,
    PQValue,
    binomial_identity_holds,
    eval_complex_power,
    eval_direct,
    eval_recurrence,
    jet,
)
from .shape import (
    LineFit,
    LineReport,
    Plane,
    SelfIntersectionHit,
    SymLabel,
    SymmetryCase,
    SymmetryClass,
    check_straight_lines,
    classify,
    expected_symmetries,
    find_self_intersections,
    hits_on_symmetry_planes,
    plane_distance,
    verify_symmetry,
)
from .surfaces import (
    BASE,
    CONJUGATE,
    DEFAULT_FAMILY_PHASES,
    MIN_DEGREE,
    Selector,
    SurfaceJet,
    SurfacePoint,
    SurfaceSpec,
    Variant,
    enneper_closed_form,
    eval_conjugate,
    eval_family,
    eval_many,
    eval_surface,
    family,
    jet_many,
    make_surface,
    quintic_closed_form,
    surface_jet,
)

__version__ = "1.0.0"
