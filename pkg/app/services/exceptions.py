"""
Workbench Exceptions
Domain errors raised by the computation services
"""

from typing import Optional


class WorkbenchError(ValueError):
    """Base class for every error raised by the services"""


class UnknownKindError(WorkbenchError):
    """A triangle family, interpretation or specialization name was not recognised"""

    def __init__(self, kind: str, allowed: Optional[list] = None):
        self.kind = kind
        self.allowed = allowed or []
        message = f"Unknown kind '{kind}'"
        if self.allowed:
            message += f" (expected one of: {', '.join(self.allowed)})"
        super().__init__(message)


class NonIntegralEntryError(WorkbenchError):
    """A recurrence produced a non-integral entry"""

    def __init__(self, n: int, k: int, value):
        self.n = n
        self.k = k
        self.value = value
        super().__init__(f"NonIntegralEntry at (n={n}, k={k}): {value}")


class SizeMismatchError(WorkbenchError):
    """Operands have incompatible shapes"""


class GuardExceededError(WorkbenchError):
    """A resource guard (enumeration size, minor budget) was tripped"""

    def __init__(self, what: str, limit, requested):
        self.what = what
        self.limit = limit
        self.requested = requested
        super().__init__(f"Guard exceeded for {what}: requested {requested}, limit {limit}")

    def __reduce__(self):
        return (type(self), (self.what, self.limit, self.requested))


class InexactDivisionError(WorkbenchError):
    """An exact division in fraction-free elimination left a remainder"""


class CertificationError(WorkbenchError):
    """An exact certificate could not be established"""

    def __init__(self, n: int, clause: str, detail: str = ""):
        self.n = n
        self.clause = clause
        message = f"Certification failed at n={n}: {clause}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class NonConvergenceError(WorkbenchError):
    """Simultaneous root iteration did not converge"""

    def __init__(self, degree: int, precision_bits: int, iterations: int):
        self.degree = degree
        self.precision_bits = precision_bits
        self.iterations = iterations
        super().__init__(
            f"Root iteration for degree {degree} did not converge after "
            f"{iterations} iterations at {precision_bits} bits"
        )


class SeriesCompositionError(WorkbenchError):
    """Composition with an inner series whose constant term is nonzero"""


class ConfigurationError(WorkbenchError):
    """A campaign config file or command-line option could not be used"""
