"""Univariate polynomials with exact rational coefficients."""

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class CountPolynomial:
    """Coefficients in ascending degree, normalised so the last one is non-zero.

    The zero polynomial has no coefficients and degree ``-1``.
    """

    coefficients: tuple = ()

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def identity(cls):
        return cls((0, 1))

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def leading(self):
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0,) * (n - len(self.coefficients))
        b = other.coefficients + (0,) * (n - len(other.coefficients))
        return CountPolynomial(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CountPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not self.coefficients or not other.coefficients:
            return CountPolynomial()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return CountPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k):
        result = CountPolynomial.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def shift(self, h):
        """The polynomial ``x -> p(x + h)``."""
        result = CountPolynomial()
        x_plus_h = CountPolynomial((h, 1))
        for c in reversed(self.coefficients):
            result = result * x_plus_h + c
        return result

    def __str__(self):
        return " ".join(str(c) for c in self.coefficients) if self.coefficients else "0"


def _coerce(x):
    return x if isinstance(x, CountPolynomial) else CountPolynomial.constant(x)


def interpolate(points):
    """Lagrange interpolation through ``(x, y)`` pairs with distinct ``x``, exactly."""
    points = [(Fraction(x), Fraction(y)) for x, y in points]
    result = CountPolynomial()
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        basis = CountPolynomial.constant(1)
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j != i:
                basis = basis * CountPolynomial((-xj, 1))
                denom *= xi - xj
        result = result + basis * (yi / denom)
    return result


def discrete_sum(q):
    """``Q`` with ``Q(n) = q(0) + q(1) + ... + q(n)``.

    ``Q`` has degree ``deg q + 1``, so it is pinned down by its values at
    ``0 .. deg q + 1``, which are plain partial sums.
    """
    values = []
    acc = Fraction(0)
    for n in range(q.degree + 2):
        acc += q(n)
        values.append((n, acc))
    return interpolate(values)
