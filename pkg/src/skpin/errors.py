"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: bad input or an exceeded
size cap exits 2, a legitimately unmet precondition exits 3, and a failed
internal cross-check exits 4.
"""


class SkpinError(Exception):
    """Base class for all package-specific errors."""


class InputError(SkpinError):
    """Malformed input, out-of-range parameter, or exceeded size cap."""


class PreconditionError(SkpinError):
    """A documented precondition does not hold for the given instance."""


class VerificationError(SkpinError):
    """An internal consistency cross-check failed; indicates a bug."""
