"""Exception hierarchy shared by every module of the package."""


class LCQAOAError(Exception):
    """Base class for all errors raised by lcqaoa."""


class InvalidParams(LCQAOAError, ValueError):
    pass


class GenerationFailed(LCQAOAError, RuntimeError):
    pass


class InvalidGraph(LCQAOAError, ValueError):
    pass


class LengthMismatch(LCQAOAError, ValueError):
    pass


class TooLarge(LCQAOAError, ValueError):
    pass


class EmptyGraph(LCQAOAError, ValueError):
    pass


class ChainInvalid(LCQAOAError, ValueError):
    pass


class InvalidDims(LCQAOAError, ValueError):
    pass


class Unroutable(LCQAOAError, RuntimeError):
    pass


class DimMismatch(LCQAOAError, ValueError):
    pass


class ParamCountMismatch(LCQAOAError, ValueError):
    pass


class ConfigError(LCQAOAError, ValueError):
    """Invalid experiment configuration; the message starts with the field path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
