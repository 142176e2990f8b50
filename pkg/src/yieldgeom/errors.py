"""Exception hierarchy shared by all modules."""


class GeometryError(ValueError):
    """Invalid or inconsistent geometric input."""


class ValidationError(GeometryError):
    """A region, path or scene violates a structural invariant."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer


class UnsupportedGeometryError(GeometryError):
    """The exact pipeline does not handle this configuration."""


class EmptyOpeningError(GeometryError):
    """Opening radius reaches or exceeds the inradius."""


class ConsistencyError(RuntimeError):
    """Two solver stages produced incompatible sets."""


class ResolutionError(ValueError):
    """Raster too coarse for the requested scene."""


class ParameterError(ValueError):
    """Example parameters outside their validity range."""
