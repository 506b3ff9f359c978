"""
Polynomial image of a pmf.

Each pmf f of F_d(p) maps to a multilinear polynomial in x_1..x_{d-1} with
coefficients Q f. The images are exactly the polynomials vanishing on d
points, so the ideal of those points describes the class: fundamental
polynomials generate it, the type-0 construction inverts the map and the
kernel of Q accounts for the rest.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from frechet.errors import ConsistencyError, ValidationError
from frechet.models.entities import DENSE_LIMIT_D, FrechetClass, Pmf, PmfType
from frechet.models.polynomial import MultilinearPoly, QuadraticPoly, degree_of, variables_of
from frechet.utils.linalg import RatMatrix, solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VanishingPoints:
    """1_{d-1} followed by c_1..c_{d-1} (c_j has -c at position j)."""

    points: tuple


@dataclass(frozen=True)
class FundamentalPoly:
    index_set: tuple
    as_poly: MultilinearPoly


def vanishing_points(fclass: FrechetClass) -> VanishingPoints:
    n = fclass.num_vars
    ones = tuple(Fraction(1) for _ in range(n))
    points = [ones]
    for j in range(n):
        point = list(ones)
        point[j] = -fclass.c
        points.append(tuple(point))
    return VanishingPoints(tuple(points))


def build_Q(fclass: FrechetClass) -> RatMatrix:
    """2^{d-1} x 2^d matrix (I | anti-identity), row 1 of the right block shifted by a."""
    if fclass.d > DENSE_LIMIT_D:
        raise ValidationError(f"dense Q refused for d={fclass.d}")
    half, size = fclass.size // 2, fclass.size
    rows = []
    for r in range(half):
        row = [Fraction(0)] * size
        row[r] = Fraction(1)
        row[size - 1 - r] = Fraction(-1)
        if r == 0:
            for j in range(half, size):
                row[j] += fclass.a
        rows.append(row)
    return RatMatrix.from_rows(rows)


def pmf_to_poly(pmf: Pmf) -> MultilinearPoly:
    """Coefficients Q f, computed on the sparse support.

    Point j in the lower half contributes +f_j to monomial j; point j in
    the upper half contributes -f_j to monomial D-1-j and a*f_j to the
    constant.
    """
    fclass = pmf.fclass
    half, last = fclass.size // 2, fclass.size - 1
    acc = {}
    for mask, v in pmf.masses:
        if mask < half:
            acc[mask] = acc.get(mask, Fraction(0)) + v
        else:
            mono = last - mask
            acc[mono] = acc.get(mono, Fraction(0)) - v
            acc[0] = acc.get(0, Fraction(0)) + fclass.a * v
    return MultilinearPoly.from_terms(fclass.num_vars, acc)


def eval_poly(poly: MultilinearPoly, point) -> Fraction:
    return poly.evaluate(tuple(Fraction(x) for x in point))


def ideal_membership(poly: MultilinearPoly, fclass: FrechetClass) -> bool:
    """True iff poly vanishes on every vanishing point of the class."""
    if poly.num_vars != fclass.num_vars:
        raise ValidationError(
            f"polynomial has {poly.num_vars} variables, class needs {fclass.num_vars}"
        )
    if sum((c for _, c in poly.terms), Fraction(0)) != 0:
        return False
    minus_c = -fclass.c
    # At c_j a monomial is worth -c if it contains x_j and 1 otherwise.
    for j in range(fclass.num_vars):
        bit = 1 << j
        value = sum((c * minus_c if m & bit else c for m, c in poly.terms), Fraction(0))
        if value != 0:
            return False
    return True


def remainder(poly: MultilinearPoly) -> MultilinearPoly:
    """Reduce every monomial of degree n >= 2 to sum(x) - (n - 1)."""
    acc = {}
    for mask, coeff in poly.terms:
        n = degree_of(mask)
        if n < 2:
            acc[mask] = acc.get(mask, Fraction(0)) + coeff
            continue
        for v in variables_of(mask):
            single = 1 << (v - 1)
            acc[single] = acc.get(single, Fraction(0)) + coeff
        acc[0] = acc.get(0, Fraction(0)) - coeff * (n - 1)
    return MultilinearPoly.from_terms(poly.num_vars, acc)


def high_part(poly: MultilinearPoly) -> MultilinearPoly:
    return MultilinearPoly.from_terms(
        poly.num_vars, {m: c for m, c in poly.terms if degree_of(m) >= 2}
    )


def low_part(poly: MultilinearPoly) -> MultilinearPoly:
    return MultilinearPoly.from_terms(
        poly.num_vars, {m: c for m, c in poly.terms if degree_of(m) < 2}
    )


def groebner_generators(fclass: FrechetClass) -> list:
    """x_i^2 + (c-1) x_i - c for each i, then 1 - x_i - x_k + x_i x_k for i < k."""
    n, c = fclass.num_vars, fclass.c
    generators = []
    for i in range(n):
        square = tuple(2 if v == i else 0 for v in range(n))
        linear = tuple(1 if v == i else 0 for v in range(n))
        constant = tuple(0 for _ in range(n))
        generators.append(
            QuadraticPoly(n, ((square, Fraction(1)), (linear, c - 1), (constant, -c)))
        )
    for i, k in combinations(range(1, n + 1), 2):
        generators.append(fundamental((i, k), fclass).as_poly)
    return generators


def fundamental(index_set: Iterable[int], fclass: FrechetClass) -> FundamentalPoly:
    """prod(x_j) - sum(x_j) + (n - 1) over the index set."""
    indices = tuple(sorted(set(index_set)))
    if len(indices) < 2:
        raise ValidationError(f"fundamental polynomial needs >= 2 indices, got {indices}")
    if indices[0] < 1 or indices[-1] > fclass.num_vars:
        raise ValidationError(f"indices {indices} outside 1..{fclass.num_vars}")
    mono = sum(1 << (j - 1) for j in indices)
    terms = {mono: Fraction(1), 0: Fraction(len(indices) - 1)}
    for j in indices:
        terms[1 << (j - 1)] = Fraction(-1)
    return FundamentalPoly(indices, MultilinearPoly.from_terms(fclass.num_vars, terms))


# ----- Inverse map -----


def type0_masses(poly: MultilinearPoly, fclass: FrechetClass) -> dict:
    """Unnormalized type-0 representative u with Q u = poly."""
    last = fclass.size - 1
    masses = {}
    negative_sum = Fraction(0)
    for mask, coeff in poly.terms:
        if mask == 0:
            continue
        if coeff > 0:
            masses[mask] = coeff
        else:
            masses[last - mask] = -coeff
            negative_sum += coeff

    c0 = poly.coefficient(0) + fclass.a * negative_sum
    if c0 > 0:
        masses[0] = c0
    elif c0 < 0:
        masses[last] = -c0 / fclass.c
    return masses


def type0_pmf(poly: MultilinearPoly, fclass: FrechetClass) -> Pmf:
    """Type-0 pmf whose polynomial image is a positive multiple of poly."""
    if poly.is_zero:
        raise ValidationError(
            "zero polynomial has no type-0 pmf; its preimages are kernel pmfs",
            constraint="zero polynomial",
        )
    if not ideal_membership(poly, fclass):
        raise ValidationError("polynomial is not in the ideal of the class", constraint="ideal")

    masses = type0_masses(poly, fclass)
    total = sum(masses.values(), Fraction(0))
    if total == 0:
        raise ValidationError("type-0 construction produced no mass", constraint="mass")
    return Pmf.from_masses(fclass, {m: v / total for m, v in masses.items()})


def kernel_basis(fclass: FrechetClass) -> list:
    """Dense basis of Ker(Q): (q,0,...,0,p) and one p/p pair per j = 2..2^{d-1}."""
    if fclass.d > DENSE_LIMIT_D:
        raise ValidationError(f"dense kernel basis refused for d={fclass.d}")
    return [pmf.values for pmf in kernel_pmfs(fclass)]


def kernel_pmfs(fclass: FrechetClass) -> list:
    """The kernel basis as pmfs; each one lies in F_d(p) because p <= 1/2."""
    size, p = fclass.size, fclass.p
    pmfs = [Pmf.from_masses(fclass, {0: fclass.q, size - 1: p})]
    for j in range(1, size // 2):
        pmfs.append(kernel_pmf(fclass, j))
    return pmfs


def kernel_pmf(fclass: FrechetClass, mask: int) -> Pmf:
    """Kernel vector pairing point (mask, 0) with its complement."""
    if not 0 < mask < fclass.size // 2:
        raise ValidationError(f"kernel pairing needs 0 < mask < {fclass.size // 2}")
    p = fclass.p
    return Pmf.from_masses(fclass, {0: 1 - 2 * p, mask: p, fclass.size - 1 - mask: p})


def classify_pmf(pmf: Pmf) -> PmfType:
    poly = pmf_to_poly(pmf)
    if poly.is_zero:
        return PmfType.TYPE1K
    if type0_pmf(poly, pmf.fclass) == pmf:
        return PmfType.TYPE0
    return PmfType.TYPE1


def fundamental_sum_support(index_set: Iterable[int], fclass: FrechetClass, sign: int = 1) -> set:
    """Weights carrying mass in the type-0 pmf of sign*F."""
    poly = fundamental(index_set, fclass).as_poly
    if sign < 0:
        poly = -poly
    pmf = type0_pmf(poly, fclass)
    return {mask.bit_count() for mask in pmf.support}


def preimage(pmf: Pmf) -> tuple:
    """Split f into its unnormalized type-0 part u and kernel coordinates.

    Returns (u, coords) with f = u + sum(coords[i] * kernel_basis[i]).
    """
    fclass = pmf.fclass
    poly = pmf_to_poly(pmf)
    u = Pmf.from_masses(fclass, type0_masses(poly, fclass)) if not poly.is_zero else None
    diff = list(pmf.values)
    if u is not None:
        for mask, v in u.masses:
            diff[mask] -= v

    basis = kernel_basis(fclass)
    columns = RatMatrix.from_rows([[vec[i] for vec in basis] for i in range(fclass.size)])
    coords = solve(columns, diff)
    if coords is None:
        raise ConsistencyError("difference from the type-0 part is not in the kernel")
    nonzero = sum(1 for c in coords if c)
    logger.debug("Preimage of %s: %d nonzero kernel coordinates", fclass.label, nonzero)
    return u, coords
