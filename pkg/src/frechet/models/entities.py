"""Domain entities for Frechet Polytope."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from math import floor, gcd
from typing import TYPE_CHECKING, Mapping, Optional

from frechet.errors import ValidationError
from frechet.utils.linalg import format_rat

if TYPE_CHECKING:
    from frechet.models.polynomial import MultilinearPoly

# Dense vectors of length 2^d are only materialised up to this dimension.
DENSE_LIMIT_D = 20


class PmfType(Enum):
    """Position of a pmf relative to the polynomial map."""

    TYPE0 = "Type0"
    TYPE1K = "Type1K"  # in the kernel of the polynomial map
    TYPE1 = "Type1"


class MinCxCase(Enum):
    """Branch of the convex-order minimal construction."""

    NON_INTEGER_LOW = "non_integer_low"  # pd + p < j^m
    NON_INTEGER_HIGH = "non_integer_high"
    INTEGER = "integer"


def bits_of(mask: int, d: int) -> tuple:
    """Coordinates (x_1, ..., x_d) of a support point; bit i-1 holds x_i."""
    return tuple((mask >> i) & 1 for i in range(d))


def bits_string(mask: int, d: int) -> str:
    return "".join("1" if (mask >> i) & 1 else "0" for i in range(d))


def mask_of(bits: str) -> int:
    """Inverse of ``bits_string``."""
    if not bits or any(ch not in "01" for ch in bits):
        raise ValidationError(f"malformed support point {bits!r}", constraint="point")
    return sum(1 << i for i, ch in enumerate(bits) if ch == "1")


@dataclass(frozen=True)
class FrechetClass:
    """The class F_d(p) with p = s/t, 0 < p <= 1/2.

    Most invariants of the class are derived quantities computed on demand.
    """

    d: int
    s: int
    t: int

    def __post_init__(self):
        if self.d < 2:
            raise ValidationError(f"d must be >= 2, got {self.d}", constraint="d")
        if self.s <= 0 or self.t <= 0:
            raise ValidationError("s and t must be positive", constraint="p")
        if gcd(self.s, self.t) != 1:
            raise ValidationError(f"s={self.s} and t={self.t} are not coprime", constraint="p")
        if 2 * self.s > self.t:
            raise ValidationError(
                f"p = {self.s}/{self.t} > 1/2; use the complement class with p' = 1 - p",
                constraint="p",
            )

    @classmethod
    def from_p(cls, d: int, p: Fraction) -> "FrechetClass":
        p = Fraction(p)
        return cls(d, p.numerator, p.denominator)

    @property
    def p(self) -> Fraction:
        return Fraction(self.s, self.t)

    @property
    def q(self) -> Fraction:
        return 1 - self.p

    @property
    def c(self) -> Fraction:
        """Value x = -c of the non-unit vanishing coordinate, c = q/p."""
        return Fraction(self.t - self.s, self.s)

    @property
    def a(self) -> Fraction:
        """Weight a = (2s - t)/s used on the upper half of the polynomial map."""
        return Fraction(2 * self.s - self.t, self.s)

    @property
    def a1(self) -> int:
        return self.t - 2 * self.s

    @property
    def a2(self) -> int:
        return self.s

    @property
    def size(self) -> int:
        """Number of support points, D = 2^d."""
        return 1 << self.d

    @property
    def num_vars(self) -> int:
        return self.d - 1

    @property
    def pd(self) -> Fraction:
        return self.p * self.d

    @property
    def j_max(self) -> int:
        """Largest integer strictly below pd."""
        pd = self.pd
        return int(pd) - 1 if pd.denominator == 1 else floor(pd)

    @property
    def j_min(self) -> int:
        """Smallest integer strictly above pd."""
        pd = self.pd
        return int(pd) + 1 if pd.denominator == 1 else floor(pd) + 1

    @property
    def label(self) -> str:
        return f"F_{self.d}({self.s}/{self.t})"

    def check_point(self, mask: int) -> None:
        if not 0 <= mask < self.size:
            raise ValidationError(f"support index {mask} outside 0..{self.size - 1}")


@dataclass(frozen=True)
class SupportPoint:
    """A point of {0,1}^d with its reverse-lex index (1-based) and weight."""

    bits: tuple
    index: int
    weight: int

    @classmethod
    def from_mask(cls, mask: int, d: int) -> "SupportPoint":
        bits = bits_of(mask, d)
        return cls(bits, mask + 1, sum(bits))

    @property
    def mask(self) -> int:
        return self.index - 1


@dataclass(frozen=True)
class Pmf:
    """A pmf on {0,1}^d held sparsely as sorted (mask, mass) pairs.

    Construction does not check membership in the class; use
    ``services.polytope.validate_pmf`` for that.
    """

    fclass: FrechetClass
    masses: tuple  # ((mask, Fraction), ...) sorted, no zeros

    @classmethod
    def from_masses(cls, fclass: FrechetClass, masses: Mapping[int, Fraction]) -> "Pmf":
        for mask in masses:
            fclass.check_point(mask)
        items = tuple(sorted((m, Fraction(v)) for m, v in masses.items() if v != 0))
        return cls(fclass, items)

    @classmethod
    def from_values(cls, fclass: FrechetClass, values) -> "Pmf":
        values = list(values)
        if len(values) != fclass.size:
            raise ValidationError(
                f"pmf has {len(values)} entries, expected 2^{fclass.d} = {fclass.size}",
                constraint="length",
            )
        return cls.from_masses(fclass, {i: Fraction(v) for i, v in enumerate(values)})

    @cached_property
    def mapping(self) -> dict:
        return dict(self.masses)

    def mass(self, mask: int) -> Fraction:
        return self.mapping.get(mask, Fraction(0))

    @property
    def support(self) -> tuple:
        return tuple(m for m, _ in self.masses)

    @property
    def support_size(self) -> int:
        return len(self.masses)

    @property
    def total(self) -> Fraction:
        return sum((v for _, v in self.masses), Fraction(0))

    @property
    def values(self) -> tuple:
        """Dense vector in reverse-lex order."""
        if self.fclass.d > DENSE_LIMIT_D:
            raise ValidationError(f"dense vector refused for d={self.fclass.d}")
        dense = [Fraction(0)] * self.fclass.size
        for mask, v in self.masses:
            dense[mask] = v
        return tuple(dense)

    @property
    def key(self) -> str:
        """Canonical text of the pmf, usable as a deduplication key."""
        d = self.fclass.d
        return ";".join(f"{bits_string(m, d)}={format_rat(v)}" for m, v in self.masses)

    def scaled(self, factor: Fraction) -> "Pmf":
        return Pmf.from_masses(self.fclass, {m: v * factor for m, v in self.masses})


@dataclass(frozen=True)
class ExtremalCertificate:
    """Outcome of the rank test for a vertex."""

    is_extremal: bool
    rank_found: int
    rank_required: int


@dataclass(frozen=True)
class SumPmf:
    """Pmf of the sum S = X_1 + ... + X_d on {0, ..., d}."""

    d: int
    probs: tuple

    def __post_init__(self):
        if len(self.probs) != self.d + 1:
            raise ValidationError(f"sum pmf needs {self.d + 1} entries")

    @property
    def mean(self) -> Fraction:
        return sum((k * v for k, v in enumerate(self.probs)), Fraction(0))

    @property
    def support(self) -> tuple:
        return tuple(k for k, v in enumerate(self.probs) if v != 0)


@dataclass(frozen=True)
class SumExtremal:
    """Two-point (or one-point) extremal of the sum class, supported on {j1, j2}."""

    j1: int
    j2: int
    pmf: SumPmf

    @property
    def is_point_mass(self) -> bool:
        return self.j1 == self.j2


@dataclass(frozen=True)
class SearchSpec:
    """Pair (J, K) driving one extremal search.

    J holds monomial masks over d-1 variables (degree >= 2); K holds
    row labels in 2..d, row k standing for variable x_{k-1}.
    """

    J: tuple
    K: tuple

    def __post_init__(self):
        if len(self.J) > len(self.K) + 2:
            raise ValidationError(
                f"#J={len(self.J)} exceeds #K+2={len(self.K) + 2}", constraint="search"
            )
        if len(set(self.J)) != len(self.J) or len(set(self.K)) != len(self.K):
            raise ValidationError("J and K must not repeat entries", constraint="search")


@dataclass(frozen=True)
class SearchResult:
    """Certified output of a polynomial-driven search."""

    coefficients: tuple
    polynomial: "MultilinearPoly"
    pmf: Optional[Pmf]
    certificate: Optional[ExtremalCertificate]
    spec: Optional[SearchSpec] = None

    @property
    def is_extremal(self) -> bool:
        return self.certificate is not None and self.certificate.is_extremal


@dataclass(frozen=True)
class MinCxConstruction:
    """Explicit minimal convex-order pmf with its construction data."""

    fclass: FrechetClass
    case: MinCxCase
    h: int
    k: int
    lead_degree: int
    windows: tuple = field(default=())  # monomial masks, alpha windows first
    polynomial: Optional["MultilinearPoly"] = None
    pmf: Optional[Pmf] = None
    sum_pmf: Optional[SumPmf] = None

    @property
    def alphas(self) -> tuple:
        """The h windows of size j^M (pd in the integer case)."""
        return self.windows[: self.h]

    @property
    def betas(self) -> tuple:
        """The k windows of size j^m."""
        return self.windows[self.h :]
