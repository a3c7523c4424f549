"""Exception hierarchy.

Every error carries the exact values that triggered it so callers (and the
CLI) can report them without re-deriving anything.
"""


class NsctlError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(NsctlError):
    pass


class NegativeEntry(ValidationError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"negative entry {value} at {index}")


class ContextNotNormalized(ValidationError):
    def __init__(self, a, b, deficit):
        self.a = a
        self.b = b
        self.deficit = deficit
        super().__init__(f"context ({a},{b}) does not sum to 1 (deficit {deficit})")


class PriorNotNormalized(ValidationError):
    def __init__(self, deficit):
        self.deficit = deficit
        super().__init__(f"prior does not sum to 1 (deficit {deficit})")


class RowNotNormalized(ValidationError):
    def __init__(self, where, deficit):
        self.where = where
        self.deficit = deficit
        super().__init__(f"distribution {where} does not sum to 1 (deficit {deficit})")


class ShapeError(ValidationError):
    pass


class AlphabetMismatch(ValidationError):
    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"alphabets differ: {left} vs {right}")


class IndexOutOfRange(NsctlError, IndexError):
    pass


class StrategySyntaxError(NsctlError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class MissingContext(NsctlError):
    def __init__(self, a, b):
        self.a = a
        self.b = b
        super().__init__(f"context ({a},{b}) missing from input")


class DegeneratePrior(NsctlError):
    def __init__(self, side, value):
        self.side = side
        self.value = value
        super().__init__(
            f"P({side}={value}) = 0; the required conditional is undefined"
        )


class CapExceeded(NsctlError):
    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} deterministic strategies exceed the cap of {cap}")


class NotBinary(NsctlError):
    def __init__(self, alphabets):
        self.alphabets = alphabets
        super().__init__(f"binary alphabets required, got {alphabets}")


class UnknownExample(NsctlError, KeyError):
    def __init__(self, name):
        self.name = name
        super().__init__(name)

    def __str__(self):
        return f"unknown example {self.name!r}"
