"""
Exceptions and warnings raised by the ludreg package.

Hard failures (invalid inputs, unreadable files) are exceptions. Situations
where a valid result exists but is not unique or was obtained through
regularization are reported through :py:mod:`warnings` using one of the
:py:class:`NumericalWarning` subclasses below, so that callers may escalate
them with ``warnings.simplefilter('error', ...)``.
"""


class NotARotation(ValueError):
    """The input matrix violates the orthogonality or determinant check"""


class DomainError(ValueError):
    """A closed-form quantity was evaluated outside of its domain"""


class InvalidLevel(ValueError):
    """Corruption level outside of [0, 1)"""


class ParseError(ValueError):
    """
    A point cloud file could not be parsed.

    Parameter ``path`` (str):
        File that was being read

    Parameter ``line`` (int):
        One-based line number of the offending row, or ``None`` when the
        problem is not tied to a specific line
    """

    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        if line is None:
            super().__init__('%s: %s' % (self.path, message))
        else:
            super().__init__('%s:%i: %s' % (self.path, line, message))


class DimensionMismatch(ParseError):
    """A row of a point cloud file has a different number of coordinates"""


class DegenerateCloud(ValueError):
    """All points of a cloud coincide; it cannot be normalized"""


class DimensionTooLarge(ValueError):
    """The PSD membership test was requested for d > 8"""


class LineSearchFailed(RuntimeError):
    """No step along the geodesic decreased the cost"""


class NumericalWarning(RuntimeWarning):
    """Base class of the warnings emitted for degenerate numerical cases"""


class IllConditionedLog(NumericalWarning):
    """A planar angle is within tolerance of pi: the log frame is not unique"""


class DegenerateProjection(NumericalWarning):
    """The nearest rotation is not unique"""


class SingularReweighting(NumericalWarning):
    """The reweighted normal equations were rank deficient and regularized"""
