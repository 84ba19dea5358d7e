"""Exception hierarchy shared by every coverlab module."""


class CoverlabError(Exception):
    """Base class for all library errors."""


class MalformedInputError(CoverlabError, ValueError):
    """Input data (facets, permutations, files) is not well formed."""


class NotAFaceError(CoverlabError, KeyError):
    """A simplex was looked up in a complex that does not contain it."""

    def __str__(self):
        return str(self.args[0]) if self.args else "not a face"


class PurityError(CoverlabError, ValueError):
    """A weight-dependent operation was called on a non-pure complex."""


class ShapeError(CoverlabError, ValueError):
    """Two objects that must share a complex or group do not."""


class CapacityError(CoverlabError):
    """An exhaustive computation would exceed its configured size guard."""


class DegenerateError(CoverlabError, ValueError):
    """The requested quantity is undefined for this input."""


class ConsistencyError(CoverlabError, AssertionError):
    """Two independent computations of the same quantity disagree.

    This signals a bug in coverlab, never a user mistake.
    """
