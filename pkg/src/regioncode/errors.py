"""Exception hierarchy for the regioncode package."""


class RegioncodeError(Exception):
    """Base class for all errors raised by this package."""


class InstanceError(RegioncodeError):
    """A network instance failed to load or validate."""


class MalformedInputError(InstanceError):
    """Instance document is syntactically or structurally invalid."""


class CycleDetectedError(InstanceError):
    """The link relation contains a directed cycle."""


class DanglingLinkError(InstanceError):
    """A non-source link has an empty incoming set."""


class MissingSourceError(InstanceError):
    """A source node is absent or emits nothing."""


class NoSinksError(InstanceError):
    """A session has no declared sinks."""


class NotAdjacentError(RegioncodeError):
    """Contraction requested for a pair that is not parent/child."""


class NotAPartitionError(RegioncodeError):
    """A region decomposition does not partition the link set."""


class UnsupportedOrderError(RegioncodeError):
    """Requested field order is not a prime or a supported power of two."""


class InvalidSinkCountError(RegioncodeError):
    """Field-size bound requested for fewer than two sinks."""


class FieldTooSmallError(RegioncodeError):
    """Field order is too small for the requested code construction."""


class InfeasibleInputError(RegioncodeError):
    """Operation requires a feasible region graph but got an infeasible one."""


class InstanceTooLargeError(RegioncodeError):
    """Exhaustive search refused: instance exceeds the size guard."""


class ParamsInfeasibleError(RegioncodeError):
    """Random generator parameters cannot yield a valid instance."""


class InvalidSpecError(RegioncodeError):
    """A region-graph spec violates its structural invariants."""


class GraphTooLargeError(RegioncodeError):
    """Exact coloring refused: graph exceeds the size guard."""
