"""Exact base fields: prime fields F_p as reduced residues, and Q as Fractions.

Both are represented by numpy arrays: int64 for F_p with moderate p, object
arrays of ``Fraction`` (or Python ints for very large p) otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

_INT64_PRIME_LIMIT = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


_to_fraction = np.frompyfunc(Fraction, 1, 1)


@dataclass(frozen=True)
class FieldSpec:
    """A prime field ``F_p`` (``p`` set) or the rationals (``p is None``)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def dtype(self):
        if self.p is not None and self.p < _INT64_PRIME_LIMIT:
            return np.int64
        return object

    def __str__(self):
        return "Q" if self.p is None else f"F_{self.p}"

    # -- array construction ------------------------------------------------

    def array(self, data) -> np.ndarray:
        """Coerce ``data`` to a reduced array over this field."""
        if self.p is None:
            arr = np.asarray(data, dtype=object)
            return _to_fraction(arr).astype(object) if arr.size else arr
        if self.dtype is object:
            arr = np.asarray(data, dtype=object)
            return arr % self.p
        arr = np.asarray(data)
        if arr.dtype == object:
            arr = np.vectorize(lambda x: int(x) % self.p, otypes=[np.int64])(arr) if arr.size else arr.astype(np.int64)
        return np.asarray(arr, dtype=np.int64) % self.p

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            z = np.empty(shape, dtype=object)
            z.fill(Fraction(0) if self.p is None else 0)
            return z
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        z = self.zeros((n, n))
        for i in range(n):
            z[i, i] = Fraction(1) if self.p is None else 1
        return z

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.p is None:
            return arr
        return arr % self.p

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a @ b)

    # -- scalars -------------------------------------------------------------

    def scalar(self, x):
        if self.p is None:
            return Fraction(x)
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            x = Fraction(x)
            if x == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / x
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        """Uniform residues for F_p; small numerators over denominators 1 or 2 for Q."""
        if self.p is None:
            num = rng.integers(-2, 3, size=shape)
            den = rng.choice([1, 1, 2], size=shape)
            out = np.empty(num.shape, dtype=object)
            for idx in np.ndindex(num.shape):
                out[idx] = Fraction(int(num[idx]), int(den[idx]))
            return out
        return self.array(rng.integers(0, self.p, size=shape))

    # -- text form -----------------------------------------------------------

    def fmt(self, x) -> str:
        if self.p is None:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(int(x) % self.p)

    def parse(self, s) -> object:
        if self.p is None:
            return Fraction(str(s))
        text = str(s)
        if "/" in text:
            num, den = text.split("/")
            return int(num) * self.inv(int(den)) % self.p
        return int(text) % self.p
