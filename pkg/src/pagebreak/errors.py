"""Exception types shared across the package."""


class PagebreakError(Exception):
    """Base class for all pagebreak failures."""


class CorpusFormatError(PagebreakError):
    """A corpus file line could not be parsed into an article record."""

    def __init__(self, path: str, line_number: int, reason: str):
        super().__init__(f"{path}:{line_number}: {reason}")
        self.path = str(path)
        self.line_number = line_number
        self.reason = reason


class EmptyCorpusError(PagebreakError):
    """A corpus file or subject directory contained no usable articles."""


class SubjectMismatchError(PagebreakError):
    """Corpus files under one subject directory carry different subject labels."""

    def __init__(self, message: str, offenders: dict[str, list[str]]):
        super().__init__(message)
        self.offenders = offenders


class DegenerateInputError(PagebreakError):
    """Input is structurally valid but carries no information to work with."""


class ConvergenceError(PagebreakError):
    """An iterative solver hit its iteration cap before converging."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class OutOfVocabularyError(PagebreakError):
    """A word was queried against a subject model that has never seen it."""


class UndefinedStatisticError(PagebreakError):
    """The requested statistic is undefined for the given data."""
