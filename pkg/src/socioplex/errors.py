"""Exception hierarchy shared by every module."""


class SocioplexError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SocioplexError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateId(SocioplexError, ValueError):
    def __init__(self, agent_id):
        self.agent_id = agent_id
        super().__init__(f"duplicate agent id {agent_id!r}")


class DanglingReference(UserWarning):
    """An agent references an id that is not part of the loaded set."""


class AgentIOError(SocioplexError, OSError):
    pass


class InvalidWeights(SocioplexError, ValueError):
    pass


class EmptyAgentSet(SocioplexError, ValueError):
    pass


class CombinatorialBlowup(SocioplexError, RuntimeError):
    pass


class MissingFace(SocioplexError, ValueError):
    pass


class NotACycleInterval(SocioplexError, ValueError):
    pass


class IndexOutOfRange(SocioplexError, IndexError):
    pass
