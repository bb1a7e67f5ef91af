"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
1 for internal invariant violations, 2 for user or hypothesis errors and
3 when the precision cap is reached.
"""


class CongLabError(Exception):
    exit_code = 2


class InvariantViolation(CongLabError):
    """An internal consistency check failed; this indicates a bug."""

    exit_code = 1


class PrecisionExhausted(CongLabError):
    """The working precision p^K is too small to certify a result."""

    exit_code = 3


class IndeterminatePrecision(PrecisionExhausted):
    pass


class NotCoprime(CongLabError):
    pass


class NotSquarefree(CongLabError):
    pass


class NotSublattice(CongLabError):
    pass


class RankDeficient(CongLabError):
    pass


class InfiniteModule(CongLabError):
    pass


class NotIdeal(CongLabError):
    pass


class NotSubalgebra(CongLabError):
    pass


class NotPrincipal(CongLabError):
    pass


class HypothesisViolated(CongLabError):
    pass


class GeneratorFailure(InvariantViolation):
    """The simultaneous-generator construction failed although its hypotheses hold."""


class InfiniteQuotient(CongLabError):
    """T/J is infinite: some eigensystem coincides with the distinguished one."""


class CompositeLevel(CongLabError):
    pass


class BadPrime(CongLabError):
    pass


class NoPrimitiveElement(PrecisionExhausted):
    """No element with squarefree characteristic polynomial was certified.

    The Hecke algebra tensored with Q_p is a product of fields, so such an
    element exists; failing to certify one means the precision is too low.
    """


class MazurMismatch(InvariantViolation):
    pass


class SchemaError(CongLabError):
    pass


class ExportUnsupported(CongLabError):
    pass
