class PolytopeError(Exception):
    """Base class for every error raised by this package."""


class DegenerateError(PolytopeError):
    pass


class UnboundedError(PolytopeError):
    pass


class OriginNotInteriorError(PolytopeError):
    pass


class RepresentationMismatchError(PolytopeError):
    pass


class OracleBoundsExceededError(PolytopeError):
    pass


class InadmissibleMapError(PolytopeError):
    pass


class SingularMapError(PolytopeError):
    pass


class TypeChangeError(PolytopeError):
    """A ray scaling left the combinatorial type."""


class FacetDegeneratedError(PolytopeError):
    pass


class NotACubeError(PolytopeError):
    pass


class NotACrosspolytopeError(PolytopeError):
    pass


class SearchExhaustedError(PolytopeError):
    pass


class BoundViolationError(PolytopeError):
    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class CertificateError(PolytopeError):
    """An exact check failed. ``check`` names the first violated condition."""

    def __init__(self, check: str, detail: str = ""):
        super().__init__(f"{check}: {detail}" if detail else check)
        self.check = check
        self.detail = detail
