"""Exception and warning types shared across the package."""


class MinsurfError(Exception):
    """Base class for validation errors raised by this package."""


class DegreeTooLowError(MinsurfError, ValueError):
    """Surface degree below 3; the polynomial family starts at the cubic."""


class NegativeOmegaError(MinsurfError, ValueError):
    """Shape parameter omega must be nonnegative (its square root is taken)."""


class ClassMismatchError(MinsurfError, ValueError):
    """A symmetry/line check was requested for a degree class it does not apply to."""


class InvalidMeshError(MinsurfError, ValueError):
    """Mesh fails its structural invariants (counts, index ranges, emptiness)."""


class DegeneratePlanarWarning(UserWarning):
    """omega = 0 collapses the height coordinate; the image degenerates to a plane."""
