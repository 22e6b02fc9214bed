class Infeasible(Exception):
    """A requested state or gate cannot be produced under the cost model."""


class ModelRangeError(ValueError):
    """Input lies outside the region where a fitted formula is meaningful."""


class NotUnitary(ValueError):
    pass


class SynthesisError(RuntimeError):
    """Exact synthesis got stuck; only possible for a corrupted input."""


class ResourceLimit(Exception):
    pass


class InsufficientData(ValueError):
    pass


class SequenceFileError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
