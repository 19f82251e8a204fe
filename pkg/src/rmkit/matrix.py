"""Integer 2x2 matrices."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Matrix2Z:
    """The matrix ``(a, b; c, d)`` with unbounded integer entries."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> Matrix2Z:
        return cls(1, 0, 0, 1)

    @classmethod
    def parse(cls, text: str) -> Matrix2Z:
        """Parse ``"a,b,c,d"`` (row-major)."""
        from .errors import ParseError

        parts = [s.strip() for s in text.strip().strip("[]()").split(",")]
        if len(parts) != 4:
            raise ParseError(f"expected four comma-separated integers, got {text!r}")
        try:
            return cls(*(int(s) for s in parts))
        except ValueError:
            raise ParseError(f"non-integer matrix entry in {text!r}") from None

    def __iter__(self):
        return iter((self.a, self.b, self.c, self.d))

    def to_list(self) -> list[int]:
        return [self.a, self.b, self.c, self.d]

    def __str__(self) -> str:
        return f"({self.a},{self.b};{self.c},{self.d})"

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: Matrix2Z) -> Matrix2Z:
        if not isinstance(other, Matrix2Z):
            return NotImplemented
        return Matrix2Z(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> Matrix2Z:
        return Matrix2Z(-self.a, -self.b, -self.c, -self.d)

    def adjugate(self) -> Matrix2Z:
        return Matrix2Z(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> Matrix2Z:
        """Exact inverse; only defined when ``det = ±1``."""
        det = self.det
        if det not in (1, -1):
            raise ValueError(f"{self} is not invertible over Z (det {det})")
        adj = self.adjugate()
        return adj if det == 1 else -adj

    def __pow__(self, k: int) -> Matrix2Z:
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix2Z.identity()
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def mod(self, n: int) -> Matrix2Z:
        return Matrix2Z(self.a % n, self.b % n, self.c % n, self.d % n)

    def mulmod(self, other: Matrix2Z, n: int) -> Matrix2Z:
        return (self @ other).mod(n)


def digit_matrix(a: int) -> Matrix2Z:
    """Partial multiplicity matrix ``(a, 1; 1, 0)`` of a continued-fraction digit."""
    return Matrix2Z(a, 1, 1, 0)
