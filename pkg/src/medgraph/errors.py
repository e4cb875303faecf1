"""Common error base for all medgraph modules.

Every module-specific exception derives from MedgraphError so callers
(CLI, service) can catch one type and map it to an exit code or HTTP 422.
"""


class MedgraphError(Exception):
    """Base class for all errors raised by medgraph modules."""


class IoFailure(MedgraphError):
    """A storage read or write failed at the OS level."""

