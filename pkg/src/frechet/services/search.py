"""
Polynomial-driven search for vertices.

A combination of fundamental polynomials sum(a_j F_j) is built so that
chosen linear coefficients vanish: those coefficients come from the
remainder matrix B, one column per monomial of degree >= 2. The type-0 pmf
of the combination is then certified with the rank test.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterator, Optional, Sequence

from frechet.errors import ValidationError
from frechet.models.entities import FrechetClass, Pmf, SearchResult, SearchSpec
from frechet.models.polynomial import MultilinearPoly, degree_of, monomial_label, variables_of
from frechet.services.ideal import fundamental, kernel_pmfs, pmf_to_poly, type0_pmf
from frechet.services.polytope import is_extremal, validate_pmf
from frechet.utils.linalg import RatMatrix, null_space

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RemainderMatrixB:
    """Remainder coefficients of every monomial of degree >= 2.

    Row 0 holds -(k-1) for a degree-k monomial; row i holds the indicator
    of x_i.
    """

    fclass: FrechetClass
    monomials: tuple
    matrix: RatMatrix


def build_B(fclass: FrechetClass) -> RemainderMatrixB:
    if fclass.d < 3:
        raise ValidationError("the remainder matrix needs d >= 3", constraint="d")
    n = fclass.num_vars
    monomials = tuple(m for m in range(1 << n) if degree_of(m) >= 2)
    rows = [[Fraction(-(degree_of(m) - 1)) for m in monomials]]
    for i in range(n):
        rows.append([Fraction((m >> i) & 1) for m in monomials])
    return RemainderMatrixB(fclass, monomials, RatMatrix.from_rows(rows, cols=len(monomials)))


def _primitive_integer(vector: Sequence[Fraction]) -> tuple:
    """Coprime integers, first nonzero entry positive."""
    den = 1
    for v in vector:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in vector]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints] if g else ints
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)


def _check_spec(spec: SearchSpec, fclass: FrechetClass, B: RemainderMatrixB) -> None:
    known = set(B.monomials)
    for mask in spec.J:
        if mask not in known:
            raise ValidationError(
                f"{monomial_label(mask) or '1'} is not a monomial of degree >= 2 in "
                f"x1..x{fclass.num_vars}",
                constraint="search",
            )
    for k in spec.K:
        if not 2 <= k <= fclass.d:
            raise ValidationError(f"row {k} outside 2..{fclass.d}", constraint="search")


def combine_fundamentals(
    J: Sequence[int], coefficients: Sequence[Fraction], fclass: FrechetClass
) -> MultilinearPoly:
    poly = MultilinearPoly.zero(fclass.num_vars)
    for mask, a in zip(J, coefficients):
        if a:
            poly = poly + fundamental(variables_of(mask), fclass).as_poly.scale(a)
    return poly


def _certified(poly: MultilinearPoly, coefficients: tuple, fclass, spec) -> SearchResult:
    pmf = type0_pmf(poly, fclass)
    return SearchResult(coefficients, poly, pmf, is_extremal(pmf), spec)


def search(spec: SearchSpec, fclass: FrechetClass, signed: bool = False) -> list:
    """One result per kernel generator of B restricted to rows K and columns J.

    With ``signed`` each generator is also tried negated. Non-extremal
    candidates are kept and carry a failing certificate.
    """
    B = build_B(fclass)
    _check_spec(spec, fclass, B)
    column = {mask: i for i, mask in enumerate(B.monomials)}
    sub = B.matrix.submatrix([k - 1 for k in spec.K], [column[m] for m in spec.J])

    results = []
    for generator in null_space(sub):
        coefficients = _primitive_integer(generator)
        poly = combine_fundamentals(spec.J, coefficients, fclass)
        if poly.is_zero:
            logger.debug("Skipping zero polynomial for J=%s", spec.J)
            continue
        results.append(_certified(poly, coefficients, fclass, spec))
        if signed:
            results.append(_certified(-poly, tuple(-a for a in coefficients), fclass, spec))
    logger.debug(
        "search J=%s K=%s: %d results", [monomial_label(m) for m in spec.J], spec.K, len(results)
    )
    return results


def fundamental_pmf(index_set, fclass: FrechetClass, sign: int = 1) -> SearchResult:
    poly = fundamental(index_set, fclass).as_poly
    if sign < 0:
        poly = -poly
    return _certified(poly, (Fraction(sign),), fclass, None)


def negated_fundamental_pmf(index_set, fclass: FrechetClass) -> SearchResult:
    """Type-0 pmf of -F; always extremal."""
    return fundamental_pmf(index_set, fclass, sign=-1)


# ----- Kernel moves -----


def _boundary_step(base: dict, direction: dict) -> Optional[Fraction]:
    """Largest t with base - t*direction >= 0, or None if unbounded."""
    steps = [base.get(m, Fraction(0)) / v for m, v in direction.items() if v > 0]
    return min(steps) if steps else None


def _move(base: dict, direction: dict, step: Fraction) -> dict:
    out = dict(base)
    for m, v in direction.items():
        out[m] = out.get(m, Fraction(0)) - step * v
    return out


def type1k_vertex_search(base: Optional[Pmf], fclass: FrechetClass) -> list:
    """Vertices reached from base by moves along kernel directions.

    The base itself comes first with its own certificate. Without a base
    the kernel pmfs are the candidates. Every other result is a certified
    vertex with at most d+1 support points.
    """
    kernel = kernel_pmfs(fclass)
    results = []
    seen = set()

    def consider(masses: dict, coefficients: tuple, always: bool = False) -> None:
        total = sum(masses.values(), Fraction(0))
        if total <= 0:
            return
        pmf = Pmf.from_masses(fclass, {m: v / total for m, v in masses.items()})
        if pmf.key in seen:
            return
        certificate = is_extremal(pmf)
        if not always and (not certificate.is_extremal or pmf.support_size > fclass.d + 1):
            return
        validate_pmf(fclass, pmf)
        seen.add(pmf.key)
        results.append(SearchResult(coefficients, pmf_to_poly(pmf), pmf, certificate))

    if base is None or base.total == 0:
        for i, v in enumerate(kernel):
            consider(dict(v.masses), (Fraction(i),))
        return results

    base_masses = base.mapping
    consider(dict(base_masses), (), always=True)

    for i, v in enumerate(kernel):
        step = _boundary_step(base_masses, v.mapping)
        # The moved vector keeps total mass 1 - step.
        if step is not None and 0 < step < 1:
            consider(_move(base_masses, v.mapping, step), (Fraction(-step), Fraction(i)))

    for (i, vi), (j, vj) in combinations(enumerate(kernel), 2):
        diff = dict(vi.mapping)
        for m, x in vj.mapping.items():
            diff[m] = diff.get(m, Fraction(0)) - x
        diff = {m: x for m, x in diff.items() if x}
        for sign in (1, -1):
            direction = {m: sign * x for m, x in diff.items()}
            step = _boundary_step(base_masses, direction)
            if step:
                consider(
                    _move(base_masses, direction, step),
                    (Fraction(-sign) * step, Fraction(i), Fraction(j)),
                )
    logger.debug("type1k search from %s: %d results", base.key, len(results))
    return results


# ----- Sweep -----


def iter_specs(fclass: FrechetClass, max_J: int) -> Iterator[SearchSpec]:
    """All (J, K) pairs ordered by (#J, J, #K, K)."""
    monomials = build_B(fclass).monomials
    rows = tuple(range(2, fclass.d + 1))
    for size_j in range(1, min(max_J, len(monomials)) + 1):
        for J in combinations(monomials, size_j):
            for size_k in range(max(0, size_j - 2), len(rows) + 1):
                for K in combinations(rows, size_k):
                    yield SearchSpec(J, K)


def _search_job(args: tuple) -> list:
    d, s, t, spec, signed = args
    return search(spec, FrechetClass(d, s, t), signed=signed)


def sweep(
    fclass: FrechetClass,
    max_J: int,
    start: int = 0,
    workers: int = 1,
    signed: bool = True,
) -> Iterator[tuple]:
    """Yield (cursor, spec, results) in spec order, beginning at ``start``."""
    specs = [spec for cursor, spec in enumerate(iter_specs(fclass, max_J)) if cursor >= start]
    logger.info("Sweeping %d specs of %s from cursor %d", len(specs), fclass.label, start)
    jobs = [(fclass.d, fclass.s, fclass.t, spec, signed) for spec in specs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for offset, results in enumerate(pool.map(_search_job, jobs, chunksize=16)):
                yield start + offset, specs[offset], results
    else:
        for offset, job in enumerate(jobs):
            yield start + offset, specs[offset], _search_job(job)
