"""Sparse multilinear polynomials with rational coefficients.

A monomial over variables x_1..x_n is an int mask; bit i-1 set means x_i
appears. The constant monomial is mask 0.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from frechet.errors import ValidationError


def degree_of(mask: int) -> int:
    return mask.bit_count()


def variables_of(mask: int) -> tuple:
    """1-based variable indices of a monomial mask."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i + 1)
        mask >>= 1
        i += 1
    return tuple(out)


def monomial_mask(variables: Iterable[int]) -> int:
    mask = 0
    for v in variables:
        mask |= 1 << (v - 1)
    return mask


def lex_key(mask: int, num_vars: int) -> tuple:
    """Exponent vector; sorting descending gives lex order with x1 > x2 > ..."""
    return tuple((mask >> i) & 1 for i in range(num_vars))


@dataclass(frozen=True)
class MultilinearPoly:
    """Polynomial with every variable at degree <= 1."""

    num_vars: int
    terms: tuple  # ((mask, Fraction), ...) sorted by mask, no zero coefficients

    @classmethod
    def from_terms(cls, num_vars: int, terms: Mapping[int, Fraction]) -> "MultilinearPoly":
        limit = 1 << num_vars
        for mask in terms:
            if not 0 <= mask < limit:
                raise ValidationError(f"monomial mask {mask} outside {num_vars} variables")
        items = tuple(sorted((m, Fraction(c)) for m, c in terms.items() if c != 0))
        return cls(num_vars, items)

    @classmethod
    def zero(cls, num_vars: int) -> "MultilinearPoly":
        return cls(num_vars, ())

    @classmethod
    def constant(cls, num_vars: int, value: Fraction) -> "MultilinearPoly":
        return cls.from_terms(num_vars, {0: value})

    @classmethod
    def monomial(
        cls, num_vars: int, mask: int, coeff: Fraction = Fraction(1)
    ) -> "MultilinearPoly":
        return cls.from_terms(num_vars, {mask: coeff})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def coefficient(self, mask: int) -> Fraction:
        return self.as_dict().get(mask, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((degree_of(m) for m, _ in self.terms), default=0)

    def _check_compatible(self, other: "MultilinearPoly") -> None:
        if self.num_vars != other.num_vars:
            raise ValidationError(
                f"polynomials over {self.num_vars} and {other.num_vars} variables"
            )

    def __add__(self, other: "MultilinearPoly") -> "MultilinearPoly":
        self._check_compatible(other)
        acc = self.as_dict()
        for m, c in other.terms:
            acc[m] = acc.get(m, Fraction(0)) + c
        return MultilinearPoly.from_terms(self.num_vars, acc)

    def __neg__(self) -> "MultilinearPoly":
        return MultilinearPoly(self.num_vars, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "MultilinearPoly") -> "MultilinearPoly":
        return self + (-other)

    def scale(self, factor) -> "MultilinearPoly":
        factor = Fraction(factor)
        if factor == 0:
            return MultilinearPoly.zero(self.num_vars)
        return MultilinearPoly(self.num_vars, tuple((m, c * factor) for m, c in self.terms))

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.num_vars:
            raise ValidationError(
                f"point has {len(point)} coordinates, polynomial has {self.num_vars} variables"
            )
        total = Fraction(0)
        for mask, coeff in self.terms:
            value = coeff
            for v in variables_of(mask):
                value *= point[v - 1]
                if value == 0:
                    break
            total += value
        return total

    def sorted_terms(self) -> list:
        """Terms in descending lex order, constant last."""
        return sorted(self.terms, key=lambda mc: lex_key(mc[0], self.num_vars), reverse=True)


@dataclass(frozen=True)
class QuadraticPoly:
    """Polynomial allowing squares, kept for display and evaluation only.

    Terms map exponent tuples (length num_vars, entries 0..2) to coefficients.
    """

    num_vars: int
    terms: tuple  # ((exponents, Fraction), ...)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for exps, coeff in self.terms:
            value = Fraction(coeff)
            for x, e in zip(point, exps):
                value *= Fraction(x) ** e
            total += value
        return total

    def sorted_terms(self) -> list:
        return sorted(self.terms, key=lambda ec: ec[0], reverse=True)


def monomial_label(mask: int) -> str:
    """Compact name used on the command line, e.g. 'x1x3'."""
    return "".join(f"x{v}" for v in variables_of(mask))


def parse_monomial(label: str) -> int:
    parts = label.strip().split("x")
    if parts[0] != "" or len(parts) < 2 or not all(p.isdigit() and p != "0" for p in parts[1:]):
        raise ValidationError(f"malformed monomial {label!r}; expected e.g. x1x3")
    return monomial_mask(int(p) for p in parts[1:])
