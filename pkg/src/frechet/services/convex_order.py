"""
Convex order for the sum S = X_1 + ... + X_d.

Sum distributions with mean pd form a polytope whose vertices have at most
two support points. The convex-order minimum sits on the two integers
around pd; min_convex_bernoulli builds a (generally non-exchangeable)
Bernoulli pmf that attains it from an explicit polynomial of the ideal.
"""

import logging
from fractions import Fraction
from itertools import combinations
from math import ceil, comb, floor
from typing import Iterable, Optional

from frechet.errors import ConsistencyError, DimensionGuardError, ValidationError
from frechet.models.entities import (
    DENSE_LIMIT_D,
    FrechetClass,
    MinCxCase,
    MinCxConstruction,
    Pmf,
    SumExtremal,
    SumPmf,
)
from frechet.models.polynomial import MultilinearPoly
from frechet.services.ideal import ideal_membership, pmf_to_poly
from frechet.services.polytope import validate_pmf

logger = logging.getLogger(__name__)

# Direct subset enumeration for crossed moments stops at this many subsets.
MAX_DIRECT_SUBSETS = 100_000


def _check_p(p: Fraction) -> Fraction:
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValidationError(f"p = {p} outside (0, 1)", constraint="p")
    return p


def sum_bounds(d: int, p: Fraction) -> tuple:
    """(j^M, j^m): largest integer below pd and smallest integer above it."""
    pd = _check_p(p) * d
    if pd.denominator == 1:
        return int(pd) - 1, int(pd) + 1
    return floor(pd), floor(pd) + 1


def sum_pmf(pmf: Pmf) -> SumPmf:
    d = pmf.fclass.d
    probs = [Fraction(0)] * (d + 1)
    for mask, v in pmf.masses:
        probs[mask.bit_count()] += v
    return SumPmf(d, tuple(probs))


def sum_extremal(d: int, p: Fraction, j1: int, j2: int) -> SumExtremal:
    pd = _check_p(p) * d
    probs = [Fraction(0)] * (d + 1)
    if j1 == j2:
        if pd != j1:
            raise ValidationError(f"point mass at {j1} does not have mean {pd}")
        probs[j1] = Fraction(1)
    else:
        if not (j1 < pd < j2):
            raise ValidationError(f"need j1 < pd < j2, got {j1}, {pd}, {j2}")
        probs[j1] = (j2 - pd) / (j2 - j1)
        probs[j2] = (pd - j1) / (j2 - j1)
    return SumExtremal(j1, j2, SumPmf(d, tuple(probs)))


def sum_extremals(d: int, p: Fraction) -> list:
    """All two-point extremals, plus the point mass when pd is an integer."""
    j_max, j_min = sum_bounds(d, p)
    pd = Fraction(p) * d
    out = [sum_extremal(d, p, j1, j2) for j1 in range(j_max + 1) for j2 in range(j_min, d + 1)]
    if pd.denominator == 1:
        out.append(sum_extremal(d, p, int(pd), int(pd)))
    return out


def stop_loss(s: SumPmf, level) -> Fraction:
    """E[(S - l)^+]."""
    level = Fraction(level)
    if level < 0:
        raise ValidationError(f"stop-loss level {level} is negative")
    return sum((v * (k - level) for k, v in enumerate(s.probs) if k > level), Fraction(0))


def quarter_grid(d: int) -> list:
    return [Fraction(i, 4) for i in range(4 * d + 1)]


def stop_loss_curve(s: SumPmf, grid: Optional[Iterable] = None) -> list:
    grid = quarter_grid(s.d) if grid is None else grid
    return [(Fraction(level), stop_loss(s, level)) for level in grid]


def sum_variance(s: SumPmf) -> Fraction:
    mean = s.mean
    return sum((v * (k - mean) ** 2 for k, v in enumerate(s.probs)), Fraction(0))


def is_cx_smaller(first: SumPmf, second: SumPmf, grid: Optional[Iterable] = None) -> bool:
    """Equal means and pointwise smaller stop-loss on the grid."""
    if first.d != second.d or first.mean != second.mean:
        return False
    grid = quarter_grid(first.d) if grid is None else list(grid)
    return all(stop_loss(first, level) <= stop_loss(second, level) for level in grid)


def min_convex_sum(d: int, p: Fraction) -> SumExtremal:
    """s_{j^M, j^m}, or the point mass at pd when pd is an integer."""
    pd = _check_p(p) * d
    if pd.denominator == 1:
        best = sum_extremal(d, p, int(pd), int(pd))
    else:
        j_max, j_min = sum_bounds(d, p)
        best = sum_extremal(d, p, j_max, j_min)
    for other in sum_extremals(d, p):
        if not is_cx_smaller(best.pmf, other.pmf):
            raise ConsistencyError(
                f"s_{best.j1},{best.j2} is not below s_{other.j1},{other.j2} in convex order"
            )
    return best


# ----- Moments -----


def crossed_moment_sum(pmf: Pmf, tau: int) -> Fraction:
    """Sum of E[X_i1 ... X_itau] over all tau-subsets.

    Computed from the pmf and again from the sum distribution; the two must
    agree.
    """
    d = pmf.fclass.d
    if not 2 <= tau <= d:
        raise ValidationError(f"tau must lie in 2..{d}, got {tau}")

    if comb(d, tau) <= MAX_DIRECT_SUBSETS:
        direct = Fraction(0)
        for subset in combinations(range(d), tau):
            bits = sum(1 << i for i in subset)
            direct += sum((v for mask, v in pmf.masses if mask & bits == bits), Fraction(0))
    else:
        direct = sum((v * comb(mask.bit_count(), tau) for mask, v in pmf.masses), Fraction(0))

    s = sum_pmf(pmf)
    via_sum = sum((comb(k, tau) * s.probs[k] for k in range(tau, d + 1)), Fraction(0))
    if direct != via_sum:
        raise ConsistencyError(f"crossed moments disagree: {direct} != {via_sum}")
    return direct


def mean_second_moment(s: SumPmf) -> Fraction:
    """Average of E[X_i X_j] over pairs i < j."""
    d = s.d
    if d < 2:
        raise ValidationError("mean second moment needs d >= 2")
    total = sum((k * (k - 1) * v for k, v in enumerate(s.probs)), Fraction(0))
    return total / (d * (d - 1))


def mean_correlation(pmf: Pmf) -> Fraction:
    fclass = pmf.fclass
    p, q = fclass.p, fclass.q
    mu2 = crossed_moment_sum(pmf, 2) / comb(fclass.d, 2)
    return (mu2 - p * p) / (p * q)


# ----- Mutual exclusivity -----


def exclusivity_order(pmf: Pmf) -> int:
    """Smallest m with P(S >= m) = 0; d+1 when S = d has mass."""
    s = sum_pmf(pmf)
    top = max(s.support, default=0)
    return max(top + 1, 1)


def minimality_feasibility(d: int, p: Fraction, m: int) -> bool:
    """Whether some X in F_d(p) has P(S >= m) = 0."""
    return m > ceil(_check_p(p) * d)


def exchangeable_pmf(extremal: SumExtremal, fclass: FrechetClass) -> Pmf:
    """Spread each sum mass uniformly over the points of that weight."""
    d = fclass.d
    if d > DENSE_LIMIT_D:
        raise DimensionGuardError(f"exchangeable pmf refused for d={d}", constraint="d")
    if extremal.pmf.d != d or extremal.pmf.mean != fclass.pd:
        raise ValidationError("sum extremal does not match the class")
    masses = {}
    for k in extremal.pmf.support:
        share = extremal.pmf.probs[k] / comb(d, k)
        for ones in combinations(range(d), k):
            masses[sum(1 << i for i in ones)] = share
    return Pmf.from_masses(fclass, masses)


# ----- Minimal Bernoulli construction -----


def _case_constants(fclass: FrechetClass) -> tuple:
    """(case, m, h, k, lead degree, alpha window size, beta window size)."""
    d, a1, a2, pd = fclass.d, fclass.a1, fclass.a2, fclass.pd
    if pd.denominator == 1:
        m = int(pd)
        return MinCxCase.INTEGER, m, a1 + a2, 0, d - m, m, m + 1

    m = floor(pd)
    k = a2 * d - 2 * a2 * m - a1 * m
    # With m = 0 the low branch would need d variables; d-1 exist.
    if m > 0 and pd + fclass.p < m + 1:
        case, lead = MinCxCase.NON_INTEGER_LOW, d - m
    else:
        case, lead = MinCxCase.NON_INTEGER_HIGH, d - m - 1
        k -= a2
    return case, m, a1 + a2 - k, k, lead, m, m + 1


def min_convex_bernoulli(fclass: FrechetClass) -> MinCxConstruction:
    """Bernoulli pmf of F_d(p) whose sum is the convex-order minimum.

    P = -a2 * x_1...x_L + sum(x^alpha_i) + sum(x^beta_i) - a1, where the
    windows alpha (size j^M, or pd) and beta (size j^m) are cut in order
    from x_1..x_L repeated a2 times. Each monomial of P receives its own
    support point, so the pmf maps back to a multiple of P even when the
    lead monomial coincides with a window and cancels in P.
    """
    case, m, h, k, lead, alpha_size, beta_size = _case_constants(fclass)
    if h < 0 or k < 0:
        raise ConsistencyError(f"negative multiplicities h={h}, k={k} for {fclass.label}")
    if lead > fclass.num_vars:
        raise ConsistencyError(f"lead degree {lead} exceeds {fclass.num_vars} variables")

    sequence = list(range(lead)) * fclass.a2
    sizes = [alpha_size] * h + [beta_size] * k
    if sum(sizes) != len(sequence):
        raise ConsistencyError(
            f"windows cover {sum(sizes)} slots, the repeated list has {len(sequence)}"
        )
    windows = []
    pos = 0
    for size in sizes:
        chunk = sequence[pos : pos + size]
        pos += size
        if len(set(chunk)) != size:
            raise ConsistencyError(f"window {chunk} repeats a variable")
        windows.append(sum(1 << v for v in chunk))

    terms = {(1 << lead) - 1: Fraction(-fclass.a2), 0: Fraction(-fclass.a1)}
    for w in windows:
        terms[w] = terms.get(w, Fraction(0)) + 1
    poly = MultilinearPoly.from_terms(fclass.num_vars, terms)
    if not ideal_membership(poly, fclass):
        raise ConsistencyError(f"minimal polynomial for {fclass.label} left the ideal")

    masses = _termwise_masses(fclass, lead, windows)
    total = sum(masses.values(), Fraction(0))
    pmf = Pmf.from_masses(fclass, {mask: v / total for mask, v in masses.items()})
    validate_pmf(fclass, pmf)
    if pmf_to_poly(pmf) != poly.scale(1 / total):
        raise ConsistencyError(f"minimal pmf for {fclass.label} does not map back to P")

    s = sum_pmf(pmf)
    expected = (m,) if case is MinCxCase.INTEGER else (m, m + 1)
    if s.support != expected:
        raise ConsistencyError(
            f"sum of the minimal pmf for {fclass.label} is supported on {s.support}, "
            f"expected {expected}"
        )
    logger.debug("%s: case %s, h=%d, k=%d, lead degree %d", fclass.label, case.value, h, k, lead)
    return MinCxConstruction(fclass, case, h, k, lead, tuple(windows), poly, pmf, s)


def _termwise_masses(fclass: FrechetClass, lead: int, windows) -> dict:
    """One support point per monomial of P, before like terms merge.

    The lead monomial goes to its complement point, each window to its own
    point and the remaining constant to 0...0. When the lead monomial
    differs from every window this is the type-0 pmf of P.
    """
    last = fclass.size - 1
    masses = {last - ((1 << lead) - 1): Fraction(fclass.a2)}
    constant = Fraction(-fclass.a1)
    for w in windows:
        if w:
            masses[w] = masses.get(w, Fraction(0)) + 1
        else:
            constant += 1
    c0 = constant - fclass.a * fclass.a2
    if c0 > 0:
        masses[0] = masses.get(0, Fraction(0)) + c0
    elif c0 < 0:
        masses[last] = masses.get(last, Fraction(0)) - c0 / fclass.c
    return masses

