"""Exception types raised across the pipeline.

Class names double as machine-parsable error kinds: the CLI reports
``type(exc).__name__`` with the ``Error`` suffix stripped, e.g.
``DegenerateOutcomeError`` surfaces as ``DegenerateOutcome``.
"""


class EmoPairsError(Exception):
    """Base class for all pipeline errors."""

    @property
    def kind(self) -> str:
        name = type(self).__name__
        return name[:-5] if name.endswith("Error") else name


class MalformedCorpusError(EmoPairsError):
    """Input file had lines but not a single usable record."""


class SchemaViolationError(EmoPairsError):
    """A labeled-corpus record violates the file schema."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class AnnotationBackendError(EmoPairsError):
    """An annotator backend failed after retries."""

    def __init__(self, message: str, post_id: str | None = None):
        self.post_id = post_id
        if post_id is not None:
            message = f"post {post_id!r}: {message}"
        super().__init__(message)


class EmptyDistributionError(EmoPairsError):
    """No labeled sentences to build a frequency distribution from."""


class BoundsError(EmoPairsError):
    """A rank or index argument is out of range."""


class EmptyVocabularyError(EmoPairsError):
    """No pair meets the minimum support threshold."""


class DegenerateOutcomeError(EmoPairsError):
    """The outcome vector contains a single class."""


class ConstantColumnError(EmoPairsError):
    """A non-intercept design column is constant 0 or constant 1."""

    def __init__(self, column: int, message: str | None = None):
        self.column = column
        super().__init__(message or f"design column {column} is constant")


class SeparationDetectedError(EmoPairsError):
    """The MLE diverges (perfect separation or singular Hessian)."""


class NotConvergedError(EmoPairsError):
    """IRLS hit the iteration cap; carries the partial fit."""

    def __init__(self, message: str, result=None):
        self.result = result
        super().__init__(message)
