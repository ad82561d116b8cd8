"""Exception hierarchy shared by all dwkit modules.

DomainError covers mathematically invalid requests (the CLI maps these to
exit code 2); plain ValueError/OSError are reserved for malformed input.
"""


class DwkitError(Exception):
    """Base class for all dwkit errors."""


class DomainError(DwkitError):
    """A request that is well-formed but mathematically out of domain."""


class CoprimalityError(DomainError):
    """gcd condition violated (lens parameters, modular inverses, Gauss sums)."""


class NonOrientableError(DomainError):
    """Sign propagation over the dual graph reached a contradiction."""


class NonManifoldError(DomainError):
    """An interior top-codimension face is not shared by exactly two simplices."""


class InfiniteFieldSpaceError(DomainError):
    """Field space has positive continuous rank and cannot be enumerated."""


class DisconnectedError(DomainError):
    """Operation needs a connected complex (or base vertices per component)."""


class MissingEdgeColourError(DomainError):
    """A colouring does not cover every edge of its complex."""


class GaugeAdjustmentError(DwkitError):
    """Boundary class not realizable as exact restriction; signals a bug."""
