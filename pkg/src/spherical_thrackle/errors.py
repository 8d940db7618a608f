"""Exception hierarchy.

Errors split into three families that the command line maps onto exit codes:
input/usage problems, geometric degeneracies (general-position violations), and
theorem alarms, which signal a certified object contradicting a proved result.
"""


class ThrackleError(Exception):
    """Base class for every error raised by this package."""


class InputError(ThrackleError, ValueError):
    """Bad arguments or malformed input data."""


class GeometryError(ThrackleError):
    """A configuration outside general position."""


class DegenerateCircle(GeometryError):
    pass


class MediumEdge(GeometryError):
    pass


class CoCircular(GeometryError):
    pass


class PointNotOnArc(GeometryError):
    pass


class DegenerateOrientation(GeometryError):
    pass


class MalformedDrawing(InputError):
    pass


class NotCertified(InputError):
    """An operation that needs a certified thrackle got something else."""


class NotAPath(InputError):
    pass


class UnknownLemmaId(InputError):
    pass


class EvenCycleRequested(InputError):
    pass


class PreconditionViolation(InputError):
    pass


class SchemaError(InputError):
    pass


class InvariantError(InputError):
    pass


class MalformedGraph6(InputError):
    pass


class ConstructionError(ThrackleError):
    """A generator could not certify its output."""


class CapTooLarge(ConstructionError):
    pass


class InsertionFailed(ConstructionError):
    pass


class SplitFailed(ConstructionError):
    pass


class TheoremAlarm(ThrackleError):
    """A certified drawing contradicts a proved statement (or the kernel is wrong)."""


class MultipleTriangles(TheoremAlarm):
    pass
