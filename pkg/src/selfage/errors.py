"""Exception hierarchy shared across the package."""


class SelfageError(Exception):
    """Base class for all errors raised by this package."""


class CorpusError(SelfageError):
    """Malformed or inconsistent corpus/label data."""


class PatternError(SelfageError):
    """A query pattern failed to compile or validate."""


class RuleError(SelfageError):
    """An extraction rule failed to load or validate."""


class TrainingError(SelfageError):
    """Classifier training preconditions were violated."""


class ProtocolError(SelfageError):
    """The external classifier plug-in violated the wire protocol."""


class PluginError(SelfageError):
    """The external classifier plug-in process failed (crash/timeout)."""


class EvalError(SelfageError):
    """Evaluation inputs were inconsistent (id mismatch, bad matrix)."""


class PipelineError(SelfageError):
    """A pipeline stage failed; message carries the stage tag."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
