"""Double-double arithmetic: a value is the unevaluated sum ``hi + lo`` of two doubles.

Only what the kernels need is provided: exact differences of inputs,
products, sums and quotients, each with a relative error near ``u**2``.
"""
from __future__ import annotations

_SPLIT = 134217729.0  # 2**27 + 1


def two_sum(a: float, b: float) -> tuple[float, float]:
    """``a + b = s + e`` exactly (Knuth)."""
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def two_prod(a: float, b: float) -> tuple[float, float]:
    """``a * b = p + e`` exactly (Dekker's splitting)."""
    p = a * b
    c = _SPLIT * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLIT * b
    bh = c - (c - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


class DD:
    __slots__ = ("hi", "lo")

    def __init__(self, hi: float, lo: float = 0.0):
        self.hi = hi
        self.lo = lo

    @classmethod
    def diff(cls, a: float, b: float) -> "DD":
        """Exact difference of two doubles."""
        return cls(*two_sum(a, -b))

    def __float__(self) -> float:
        return self.hi + self.lo

    def __add__(self, other: "DD") -> "DD":
        s, e = two_sum(self.hi, other.hi)
        e += self.lo + other.lo
        hi = s + e
        return DD(hi, e - (hi - s))

    def __mul__(self, other: "DD") -> "DD":
        p, e = two_prod(self.hi, other.hi)
        e += self.hi * other.lo + self.lo * other.hi
        s = p + e
        return DD(s, e - (s - p))

    def div(self, other: "DD") -> "DD":
        q1 = self.hi / other.hi
        p, e = two_prod(q1, other.hi)
        r = ((self.hi - p) - e + self.lo) - q1 * other.lo
        q2 = r / other.hi
        s = q1 + q2
        return DD(s, q2 - (s - q1))

    def __truediv__(self, other: "DD") -> float:
        return float(self.div(other))

    def __gt__(self, other) -> bool:
        return self.hi > other

    def __repr__(self) -> str:
        return f"DD({self.hi!r}, {self.lo!r})"
