"""
errors.py
Exception hierarchy of the sensing toolkit. Everything derives from
ValueError so callers that only guard against bad values keep working.
"""


class SensingError(ValueError):
    pass


class ConfigError(SensingError):
    """Invalid experiment configuration, override or command line."""


class GridMismatchError(SensingError):
    """A kernel, plan or response does not fit the frequency grid."""


class InsufficientSamplesError(SensingError):
    pass


class NormalizationError(SensingError):
    """Mean channel energy is zero, so normalized WMP is undefined."""


class DegenerateSupportError(SensingError):
    """The selected OMP sub-dictionary lost rank."""

    def __init__(self, message: str, support: list[int]):
        super().__init__(message)
        self.support = support
