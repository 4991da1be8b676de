"""Exception hierarchy.

Every degeneracy gets its own class so that callers (and the CLI) can name
the offending locus without parsing messages.
"""


class DarbouxError(ValueError):
    """Base class for all library errors."""


class NonFiniteError(DarbouxError):
    """NaN or Inf reached a public boundary."""


class DimensionError(DarbouxError):
    """Incompatible vector or chart dimensions."""


class DomainError(DarbouxError):
    """A point lies outside the domain of a coordinate system."""


class CollisionError(DomainError):
    """Two bodies coincide, or came closer than the integrator allows."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class NonEllipticError(DomainError):
    pass


class RectilinearError(DomainError):
    pass


class InvalidElementsError(DomainError):
    pass


class TriangleError(DomainError):
    """|G1 - G2| <= C <= G1 + G2 violated."""


class VerticalCError(DomainError):
    """Total angular momentum (of some level) parallel to the reference axis."""

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class CoplanarOrbitsError(DomainError):
    """The two angular momenta combined at some level are parallel."""

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class ZeroAngularMomentumError(DomainError):
    pass
