"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed input file, JSON document, or CLI value."""


class K4MinorError(ValueError):
    """The graph contains a K4 minor.

    ``certificate`` is the reduction-stuck minor: a dict with ``vertices``
    (original labels) and ``edges`` whose every vertex has degree >= 3.
    """

    def __init__(self, message: str, certificate: dict | None = None):
        super().__init__(message)
        self.certificate = certificate


class FiberCapExceeded(RuntimeError):
    """A degree sweep would enumerate more monomials than the configured cap."""
