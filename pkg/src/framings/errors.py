"""Exception hierarchy.

Everything raised on purpose by the package derives from ``FramingsError``.
Errors that describe bad input (wrong shapes, out-of-range indices, violated
hypotheses of a construction) also derive from ``InputError`` so the CLI can
map them to its input-error exit code.
"""


class FramingsError(Exception):
    pass


class InputError(FramingsError, ValueError):
    pass


class ShapeError(InputError):
    pass


class DimensionMismatch(ShapeError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class NonHermitian(InputError):
    def __init__(self, residual, threshold):
        self.residual = float(residual)
        self.threshold = float(threshold)
        super().__init__(
            f"matrix is not Hermitian: |G - G*| = {self.residual:.3e} > {self.threshold:.3e}"
        )


class RangeViolation(FramingsError):
    """Raised when a quadratic form leaks outside the range of the reference form."""

    def __init__(self, leak, threshold):
        self.leak = float(leak)
        self.threshold = float(threshold)
        super().__init__(
            f"range condition fails: leak {self.leak:.3e} > {self.threshold:.3e}"
        )


class RescaleViolation(InputError):
    def __init__(self, index, value):
        self.index = int(index)
        self.value = complex(value)
        super().__init__(
            f"alpha[{self.index}] * conj(beta[{self.index}]) = {self.value:.6g}, expected 1"
        )


class ZeroF(InputError):
    pass


class Condition1Violation(InputError):
    """B A* does not act as the identity on F."""

    def __init__(self, residual, threshold):
        self.residual = float(residual)
        self.threshold = float(threshold)
        super().__init__(
            f"B A* is not the identity on F: residual {self.residual:.3e} > {self.threshold:.3e}"
        )


class Condition2Violation(InputError):
    """A* maps part of F outside the maximal framing space."""

    def __init__(self, distance, threshold):
        self.distance = float(distance)
        self.threshold = float(threshold)
        super().__init__(
            f"A* F is not inside F_max: distance {self.distance:.3e} > {self.threshold:.3e}"
        )


class TooManyAtoms(InputError):
    pass


class AtomNotPSD(InputError):
    def __init__(self, index, detail):
        self.index = int(index)
        super().__init__(f"atom {self.index} is not Hermitian PSD: {detail}")


class NotPositiveDefinite(FramingsError):
    def __init__(self, min_eigenvalue, threshold):
        self.min_eigenvalue = float(min_eigenvalue)
        self.threshold = float(threshold)
        super().__init__(
            f"map is not positive definite: min Gram eigenvalue {self.min_eigenvalue:.6g}"
        )


class QuotientLeak(FramingsError):
    def __init__(self, what, residual, threshold):
        self.what = what
        self.residual = float(residual)
        self.threshold = float(threshold)
        super().__init__(
            f"{what} is not well defined on the quotient: "
            f"residual {self.residual:.3e} > {self.threshold:.3e}"
        )


class PositivityBroken(FramingsError):
    pass


class PostconditionFailed(FramingsError):
    """A computed quantity contradicts an identity that holds in exact arithmetic."""
