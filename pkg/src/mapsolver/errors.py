"""Exception hierarchy shared by the solver and the command line tool.

Each class carries an ``exit_code`` used by the CLI: 2 for unreadable input,
3 for inputs that parse but are not valid MAP instances or solutions, and 4
for internal assertion failures.
"""


class MapError(Exception):
    exit_code = 4

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details


# input / validation -------------------------------------------------------


class ParseError(MapError):
    exit_code = 2

    def __init__(self, message, line=None, **details):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, line=line, **details)
        self.line = line


class InvalidInstance(MapError):
    exit_code = 3


class SelfLoop(InvalidInstance, ParseError):
    exit_code = 3


class WeightOutOfRange(InvalidInstance, ParseError):
    exit_code = 3


class ZeroEdgesNotMatching(InvalidInstance):
    pass


class NotTwoEdgeConnected(InvalidInstance):
    pass


class NotTwoEdgeCover(InvalidInstance):
    pass


class OverlappingParts(MapError):
    pass


class UnknownEdgeId(MapError):
    pass


class CapacityExceedsDegree(MapError):
    pass


class InfeasibleDemand(MapError):
    pass


class GenerationFailed(MapError):
    pass


# exact search -------------------------------------------------------------


class TooLarge(MapError):
    pass


class BudgetExceeded(MapError):
    def __init__(self, message, best=None, **details):
        super().__init__(message, **details)
        self.best = best


class WeightMismatch(MapError):
    pass


# pipeline assertions ------------------------------------------------------


class PipelineError(MapError):
    """A lemma of the structured pipeline failed to apply."""


class ExchangeNotFound(PipelineError):
    pass


class InvariantViolated(PipelineError):
    pass


class NoPseudoEar(PipelineError):
    pass


class CreditDeficit(PipelineError):
    pass


class PathNotFound(PipelineError):
    pass


class CaseExhausted(PipelineError):
    pass


class NoObstruction(PipelineError):
    pass


class PatchEdgeNotFound(PipelineError):
    pass


class VariantUndecidable(PipelineError):
    pass


class NotStructured(PipelineError):
    pass


class SizeNotDecreasing(PipelineError):
    pass
