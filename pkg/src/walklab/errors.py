"""Exception hierarchy.

Every error raised on purpose by walklab derives from ``WalklabError``.
``DomainRestriction`` marks laws that are only valid for a restricted
parameter range (the CLI maps it to exit status 3).
"""


class WalklabError(Exception):
    pass


class DomainRestriction(WalklabError):
    pass


class PartsMismatch(WalklabError, ValueError):
    pass


class TooLarge(WalklabError, ValueError):
    pass


class Unreachable(WalklabError, ValueError):
    pass


class IndexRange(WalklabError, ValueError):
    pass


class DomainRange(WalklabError, ValueError):
    pass


class BiasedUnsupported(DomainRestriction):
    """A fair-walk-only law was asked for p != 1/2."""


class NotUnbiased(DomainRestriction):
    pass


class NotBiased(DomainRestriction):
    pass


class DegenerateP(DomainRestriction):
    pass


class StartUnsupported(DomainRestriction):
    pass


class RhoOne(DomainRestriction):
    pass


class UnsupportedDimension(DomainRestriction):
    pass
