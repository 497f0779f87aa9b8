"""Exception types shared across the package."""


class FlocError(Exception):
    """Base class for all errors raised by this package."""


class ZeroNormRow(FlocError):
    """An embedding row has (numerically) zero norm, so cosine similarity is undefined."""

    def __init__(self, row: int):
        self.row = row
        super().__init__(f"row {row} has zero norm; cosine similarity is undefined")


class IndexOutOfRange(FlocError):
    pass


class DuplicateIndex(FlocError):
    pass


class AlreadySelected(FlocError):
    pass


class EmptyGroundSet(FlocError):
    pass


class NonIntegralFrames(FlocError):
    """Token count is not divisible by tokens-per-frame."""


class InstanceTooLarge(FlocError):
    """Exhaustive enumeration would exceed the subset-count guard."""


class EmptySubset(FlocError):
    pass


class SubsetTooSmall(FlocError):
    """Metric undefined for subsets with fewer than two elements."""


class InvalidSpec(FlocError):
    """Synthetic-instance specification is inconsistent."""


class ConfigError(FlocError):
    """Compression configuration violates an invariant."""


class MalformedFile(FlocError):
    """Embedding file fails a header or length check."""
