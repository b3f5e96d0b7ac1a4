"""Exception hierarchy shared by the library and the command line."""


class TplagError(ValueError):
    """Base class for every input or validation failure raised by tplag."""


class RepeatedNode(TplagError):
    """Two basis nodes or two sample nodes coincide."""


class MixedNode(TplagError):
    """A sample node coincides with a basis node."""


class UnsortedNodes(TplagError):
    """Basis nodes are not increasing or sample nodes are not decreasing."""


class NotOrdered(TplagError):
    """The configuration does not place every sample node right of every basis node."""


class DimensionMismatch(TplagError):
    """Array lengths or matrix shapes are inconsistent."""


class NonPositiveBD(TplagError):
    """A bidiagonal decomposition contains an entry that is not strictly positive."""


class SingularR(TplagError):
    """A triangular factor has a zero diagonal pivot."""


class NotSTP(TplagError):
    """Exact Neville elimination produced a non-positive pivot."""


class RankDeficient(TplagError):
    """An exact matrix does not have full column rank."""


class OracleCancelled(Exception):
    """An exact computation was stopped through its cancellation hook."""


class MissingReference(Exception):
    """Bundled reference data could not be found or read."""
