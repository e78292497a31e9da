"""Exception hierarchy shared by every module of the package."""


class PQMapError(Exception):
    """Base class for all package errors."""


class MapFormatError(PQMapError, ValueError):
    """A ``pqm 1`` file could not be parsed.

    ``kind`` is a short machine-readable tag (``header``, ``duplicate-dart``,
    ``missing-dart``, ``twin``, ``connectivity``, ``euler``, ``outer`` ...),
    ``line`` the 1-based line number the problem was detected on (0 when the
    problem is global to the file).
    """

    def __init__(self, kind, message, line=0):
        self.kind = kind
        self.line = line
        where = f"line {line}: " if line else ""
        super().__init__(f"{where}{message} [{kind}]")


class InvalidMapError(PQMapError, ValueError):
    """A rotation system does not describe a map (connected, genus 0)."""


class PreconditionError(PQMapError, ValueError):
    """An operation was called outside of its hypotheses."""


class SurgeryError(PQMapError, RuntimeError):
    """A surgery could not be carried out on the given map."""


class TheoremViolation(PQMapError, AssertionError):
    """An identity or inequality that must hold for every input failed.

    Raised only when the implementation (or the underlying mathematics) is
    wrong; never as an input-dependent verdict.
    """
