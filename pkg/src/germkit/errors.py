"""Exception taxonomy shared across the package.

Every failure mode that callers are expected to branch on gets its own
class; anything else is a plain ValueError and means a caller bug.
"""

from __future__ import annotations


class GermkitError(Exception):
    """Base class for all package-specific errors."""


class ParseError(GermkitError):
    """Raised on malformed polynomial or germ text (CLI exit code 3)."""


class ResourceCapExceeded(GermkitError):
    """A configured cap (S-pairs, term count, time) was hit (CLI exit code 4).

    The message names the computation stage so CLI users can tell which
    knob to raise.
    """


class NotFinitelyDetermined(GermkitError):
    """The germ fails the finite determinacy criterion (CLI exit code 2)."""


class NonPrincipalError(GermkitError):
    """The double point elimination ideal is zero or has unit gcd."""


class DegenerateSampleError(GermkitError):
    """A specialization or sampled plane is degenerate for the request."""


class GenericityError(GermkitError):
    """Repeated sampling failed to certify a generic value."""


class IntegrityError(GermkitError):
    """Two independent routes to the same quantity disagreed.

    This is never caught internally: it means either a bug or a genuine
    inconsistency in the input data, and must surface loudly.
    """
