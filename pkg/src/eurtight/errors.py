"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ApplicabilityError(DomainError):
    """A literature bound was requested outside the regime it covers."""


class CatalogIntegrityError(RuntimeError):
    """A stored MUB catalog failed its unitarity or unbiasedness check."""
