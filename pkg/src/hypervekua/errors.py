"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`HyperVekuaError`, so the CLI can map them to exit code 3 and print
the class name.
"""


class HyperVekuaError(Exception):
    """Base class for all library errors."""


class NullConeError(HyperVekuaError, ZeroDivisionError):
    """A hyperbolic number on the null-cone (a zero divisor) was inverted."""


class BoundaryProximity(HyperVekuaError):
    """A finite-difference stencil leaves the field's domain."""


class QuadratureNonConvergence(HyperVekuaError):
    """Two successive quadrature refinements disagree beyond tolerance."""


class CompatibilityViolated(HyperVekuaError):
    """The input of A or Abar is not a z- or zbar-gradient of a real function."""


class DegeneratePair(HyperVekuaError):
    """Im(conj(F) G) vanishes (within margin) somewhere on the probes."""


class NonPositiveSolution(HyperVekuaError):
    """The particular solution f is not strictly positive on the probes."""


class NullGradient(HyperVekuaError):
    """|rho_z|^2 vanishes, so s(rho) is undefined."""


class NotAFunctionOfRho(HyperVekuaError):
    """box(rho) / 4|rho_z|^2 varies along a level set of rho."""


class NullPhi(HyperVekuaError):
    """The sequence multiplier Phi lies on the null-cone at a probe."""


class AnsatzMismatch(HyperVekuaError):
    """f is not a function of the profile variable rho."""


class MissingOracle(HyperVekuaError):
    """No closed form is catalogued for the requested formal power."""
