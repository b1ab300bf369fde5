"""Exception types shared across the simulator.

The command line front end maps these onto process exit codes, so the
split matters: bad input text is not the same failure as bad physics,
and neither is running out of quadrature budget.
"""


class TalbotSimError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(TalbotSimError):
    """A config file or override string could not be parsed."""


class DomainError(TalbotSimError, ValueError):
    """Inputs are outside the physical or mathematical domain."""


class ResolutionCapError(TalbotSimError):
    """The quadrature oracle would exceed its sample budget."""
