"""Exact scalar arithmetic over the rationals and over prime fields.

Rationals are `fractions.Fraction` (always in lowest terms with positive
denominator); elements of F_p are canonical residues in range(p).  No
floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, int]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: the rationals (characteristic 0) or F_p (characteristic p)."""

    kind: str
    characteristic: int

    def __post_init__(self) -> None:
        if self.kind == "rational":
            if self.characteristic != 0:
                raise ValueError("rational field must have characteristic 0")
        elif self.kind == "prime-field":
            if not _is_prime(self.characteristic):
                raise ValueError(f"characteristic {self.characteristic} is not prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec("rational", 0)

    @staticmethod
    def prime(p: int) -> "FieldSpec":
        return FieldSpec("prime-field", p)

    @staticmethod
    def parse(text: str) -> "FieldSpec":
        """Parse a field name: 'Q', or 'F<p>' for a prime p."""
        t = text.strip()
        if t == "Q":
            return FieldSpec.rationals()
        if t.startswith("F") and t[1:].isdigit():
            return FieldSpec.prime(int(t[1:]))
        raise ValueError(f"unknown field {text!r} (expected Q or F<p>)")

    def __str__(self) -> str:
        return "Q" if self.kind == "rational" else f"F{self.characteristic}"

    # -- scalar arithmetic -------------------------------------------------

    def coerce(self, value) -> Scalar:
        """Bring an int or Fraction into canonical form for this field."""
        if isinstance(value, float):
            raise TypeError("floating point scalars are not allowed")
        if self.kind == "rational":
            return Fraction(value)
        p = self.characteristic
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def zero(self) -> Scalar:
        return Fraction(0) if self.kind == "rational" else 0

    def one(self) -> Scalar:
        return Fraction(1) if self.kind == "rational" else 1

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        s = a + b
        return s if self.kind == "rational" else s % self.characteristic

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        s = a - b
        return s if self.kind == "rational" else s % self.characteristic

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        s = a * b
        return s if self.kind == "rational" else s % self.characteristic

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.kind == "rational" else (-a) % self.characteristic

    def inv(self, a: Scalar) -> Scalar:
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "rational":
            return 1 / Fraction(a)
        return pow(int(a), -1, self.characteristic)

    def is_zero(self, a: Scalar) -> bool:
        return a == 0

    def sign(self, exponent: int) -> Scalar:
        """(-1)**exponent as a field element."""
        return self.coerce(-1 if exponent % 2 else 1)

    # -- parsing / rendering -----------------------------------------------

    def from_string(self, text: str) -> Scalar:
        """Parse an exact coefficient: an integer or a fraction 'a/b'."""
        t = text.strip()
        if "/" in t:
            num, _, den = t.partition("/")
            d = int(den)
            if d == 0:
                raise ZeroDivisionError("zero denominator")
            return self.coerce(Fraction(int(num), d))
        return self.coerce(int(t))

    def render(self, a: Scalar) -> str:
        """Canonical exact string, parseable by from_string."""
        return str(a)

    def render_annotated(self, a: Scalar) -> str:
        """Exact string for reports; prime-field residues carry '(mod p)'."""
        if self.kind == "prime-field":
            return f"{a} (mod {self.characteristic})"
        return str(a)


QQ = FieldSpec.rationals()
GF2 = FieldSpec.prime(2)
