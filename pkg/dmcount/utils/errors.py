"""
Exception types raised across the dmcount package.

The CLI and the HTTP views translate these into exit codes and JSON error
payloads; library callers can catch ``DmError`` for everything.
"""


class DmError(Exception):
    """Base class for every error raised by dmcount."""


class GroupSpecError(DmError, ValueError):
    """A group specification string could not be parsed."""


class NotPrimeError(DmError, ValueError):
    def __init__(self, value):
        super().__init__(f"not a prime: {value}")
        self.value = value


class DomainError(DmError, ValueError):
    """An argument lies outside the domain of a formula."""


class ContainmentError(DmError, ValueError):
    """A section K/H was requested with H not contained in K."""


class ConfigurationError(DmError, ValueError):
    pass


class OracleScaleExceeded(DmError, RuntimeError):
    def __init__(self, order, cap, what="oracle"):
        super().__init__(
            f"{what} scale exceeded: group order {order} is above the cap {cap}"
        )
        self.order = order
        self.cap = cap


class MethodUnavailable(DmError, RuntimeError):
    """No counting method applies to the requested group under the current caps."""
