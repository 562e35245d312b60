"""Exception types shared across the package."""


class AlgographError(Exception):
    """Base class for all errors raised by this package."""


class InvalidConfigurationError(AlgographError):
    """A parameter or configuration violates an operation's preconditions."""


class ConfigFileError(InvalidConfigurationError):
    """A config file failed to parse or validate.

    ``location`` is "path:line" when the offending line is known, else
    "section.key" or just the path.
    """

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class BackendError(AlgographError):
    """The LLM backend failed (transport error, bad status, unknown task tag)."""


class ExecutionError(AlgographError):
    """Graph execution failed; carries the node where it happened."""

    def __init__(self, message, node_id=None):
        self.node_id = node_id
        super().__init__(f"node {node_id!r}: {message}" if node_id else message)


class MalformedAnswerError(AlgographError):
    """An answer string does not have the shape the metric requires."""


class PartialFailureError(AlgographError):
    """Too many trials of a sweep failed to trust the result."""
