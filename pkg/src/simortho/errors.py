"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`SimorthoError`,
so the CLI can turn user-facing failures into exit codes without tracebacks.
"""


class SimorthoError(Exception):
    """Base class for library errors."""


class ParseError(SimorthoError, ValueError):
    """Malformed input. ``path`` locates the offending JSON value, if known."""

    def __init__(self, message, path=None):
        self.path = tuple(path) if path is not None else None
        super().__init__(message)


class FieldMismatch(SimorthoError, TypeError):
    pass


class DivisionByZero(SimorthoError, ZeroDivisionError):
    pass


class UnsupportedField(SimorthoError):
    pass


class NoSolution(SimorthoError):
    """``A @ P = B`` has no solution; ``column`` is the first bad column of B."""

    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"column {column} of the right-hand side "
                                    "is outside the column space")


class SingularMatrix(SimorthoError):
    pass


class NotSymmetric(SimorthoError, ValueError):
    pass


class NotInRadical(SimorthoError):
    pass


class RadicalNotContained(SimorthoError):
    """The radical of the base form is not inside the radical of ``target``."""

    def __init__(self, target=None, vector=None):
        self.target = target
        self.vector = vector
        msg = "radical of the base form is not contained in the radical"
        if target is not None:
            msg += f" of member {target}"
        super().__init__(msg)


class NotSimultaneouslyDiagonalizable(SimorthoError):
    """Joint eigenspace refinement stalled.

    ``operator`` is the index (in the list given to the refinement) of the
    operator that failed, ``piece`` the invariant subspace on which it is not
    diagonalizable over the ground field.
    """

    def __init__(self, operator, piece, reason):
        self.operator = operator
        self.piece = piece
        self.reason = reason
        super().__init__(f"operator {operator} is not diagonalizable on a "
                         f"{piece.dim}-dimensional piece: {reason}")


class NotDiagonalizable(SimorthoError):
    """A form has no orthogonal basis: characteristic 2, nonzero alternating residual."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__("alternating nonzero residual in characteristic 2")


class NotSimultaneouslyOrthogonalizable(SimorthoError):
    def __init__(self, reason, witness=None):
        self.reason = reason
        self.witness = witness
        super().__init__(reason)


class DegenerateBase(SimorthoError):
    pass


class NotFound(SimorthoError):
    """No nondegenerate combination found. ``reason`` is one of
    ``budget_exhausted``, ``identically_singular``, ``small_field``."""

    def __init__(self, reason, evaluated=0):
        self.reason = reason
        self.evaluated = evaluated
        super().__init__(f"{reason} after {evaluated} evaluations")


class NoCanonicalEmbedding(SimorthoError):
    pass


class UnboundedFamily(SimorthoError):
    pass


class CertificateNotConstant(SimorthoError):
    pass


class OutOfBudget(SimorthoError):
    pass


class InternalDisagreement(SimorthoError, AssertionError):
    """Two independent computations disagreed; always a bug."""


class ImplicationViolated(SimorthoError, AssertionError):
    """A proven implication failed on concrete data; always a bug."""
