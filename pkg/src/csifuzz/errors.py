"""Exception types shared across the package."""


class CsiFuzzError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(CsiFuzzError):
    """A channel or experiment configuration violates an invariant."""


class IllConditionedError(CsiFuzzError):
    """Recovery would divide by a near-zero artificial response bin."""

    def __init__(self, message, bins):
        super().__init__(message)
        self.bins = list(bins)


class CovertDecodeError(CsiFuzzError):
    """Covert message failed CRC validation.

    Carries the best-effort payload and the per-symbol distance matrix so
    callers can inspect how close the decode was.
    """

    def __init__(self, message, payload, symbols, distances):
        super().__init__(message)
        self.payload = payload
        self.symbols = symbols
        self.distances = distances
