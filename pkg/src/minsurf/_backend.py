"""Kernel backend selection.

The hot numeric kernels exist twice: a numba ``@njit`` build and a pure
numpy build with identical arithmetic. ``MINSURF_BACKEND`` picks one
("numba", "numpy" or "auto"); auto takes numba when it is importable.
"""

import os

_requested = os.environ.get("MINSURF_BACKEND", "auto").strip().lower() or "auto"

if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"MINSURF_BACKEND must be 'auto', 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    _use_numba = False
elif _requested == "numba":
    import numba  # noqa: F401  -- fail loudly when explicitly requested

    _use_numba = True
else:
    try:
        import numba  # noqa: F401

        _use_numba = True
    except ImportError:
        _use_numba = False

if _use_numba:
    from . import _kernels_nb as kernels
else:
    from . import _kernels_np as kernels  # type: ignore[no-redef]


def backend_name() -> str:
    """Name of the kernel backend in use ("numba" or "numpy")."""
    return "numba" if _use_numba else "numpy"


__all__ = ["kernels", "backend_name"]
