"""Exception types raised across the package."""


class GradDivError(Exception):
    """Base class for package errors."""


class UnsupportedOrderError(GradDivError, ValueError):
    """Requested order or zero index lies above the configured cap."""


class DomainError(GradDivError, ValueError):
    """An argument lies outside the domain of the operation."""


class NodeMismatchError(GradDivError, ValueError):
    """Sampled fields do not sit on the nodes of the quadrature rule."""
