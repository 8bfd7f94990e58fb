class HypergraphError(ValueError):
    """Malformed input: bad document, unknown vertex, duplicate edge, invalid weights."""


class HypothesisError(ValueError):
    """A structural or weight hypothesis required by a closed form does not hold.

    ``failures`` lists every individual violation that was found.
    """

    def __init__(self, message: str, failures: list[str] | None = None):
        self.failures = list(failures or [])
        if self.failures:
            message = message + ": " + "; ".join(self.failures)
        super().__init__(message)
