"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed polynomial, instance, system or definition text."""


class EngineInapplicable(RuntimeError):
    """The requested decision engine does not apply to this instance."""


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured size cap."""

    def __init__(self, size, cap):
        super().__init__(f"enumeration size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class DegreeBoundError(ValueError):
    """Polynomial degree exceeds the truncation degree of a basis."""

    def __init__(self, degree, bound):
        super().__init__(f"polynomial degree {degree} exceeds truncation degree {bound}")
        self.degree = degree
        self.bound = bound
