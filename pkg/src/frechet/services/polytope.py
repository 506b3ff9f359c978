"""
The Frechet class as a polytope.

F_d(p) = {f >= 0 : H f = 0, sum f = 1}. This module builds H, validates
membership, certifies vertices with the rank test and enumerates every
vertex at small d.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from frechet.config import Settings
from frechet.errors import (
    ConsistencyError,
    DimensionGuardError,
    PmfValidationError,
    ValidationError,
)
from frechet.models.entities import (
    DENSE_LIMIT_D,
    ExtremalCertificate,
    FrechetClass,
    Pmf,
    SupportPoint,
)
from frechet.utils.linalg import IncrementalBasis, RatMatrix, integer_rank

logger = logging.getLogger(__name__)


def _check_dense(fclass: FrechetClass) -> None:
    if fclass.d > DENSE_LIMIT_D:
        raise DimensionGuardError(f"dense 2^d objects refused for d={fclass.d}", constraint="d")


def build_H(fclass: FrechetClass) -> RatMatrix:
    """d x 2^d matrix: 1 where x_i = 0 and -c where x_i = 1."""
    _check_dense(fclass)
    one, minus_c = Fraction(1), -fclass.c
    rows = [
        [minus_c if (mask >> i) & 1 else one for mask in range(fclass.size)]
        for i in range(fclass.d)
    ]
    return RatMatrix.from_rows(rows)


def integer_column(fclass: FrechetClass, mask: int) -> tuple:
    """Column of s*H for one support point."""
    s, t = fclass.s, fclass.t
    return tuple(-(t - s) if (mask >> i) & 1 else s for i in range(fclass.d))


def support_points(d: int) -> list:
    if d > DENSE_LIMIT_D:
        raise DimensionGuardError(f"support listing refused for d={d}", constraint="d")
    return [SupportPoint.from_mask(mask, d) for mask in range(1 << d)]


# ----- Membership -----


def margins(pmf: Pmf) -> tuple:
    """P(X_i = 1) for i = 1..d."""
    d = pmf.fclass.d
    acc = [Fraction(0)] * d
    for mask, v in pmf.masses:
        for i in range(d):
            if (mask >> i) & 1:
                acc[i] += v
    return tuple(acc)


def validate_pmf(fclass: FrechetClass, values: Union[Pmf, Sequence]) -> Pmf:
    """Return a Pmf of the class or raise on the first violated constraint."""
    if isinstance(values, Pmf):
        if values.fclass != fclass:
            raise PmfValidationError(
                f"pmf belongs to {values.fclass.label}, not {fclass.label}", constraint="class"
            )
        pmf = values
    else:
        values = list(values)
        if len(values) != fclass.size:
            raise PmfValidationError(
                f"pmf has {len(values)} entries, expected 2^{fclass.d} = {fclass.size}",
                constraint="length",
            )
        pmf = Pmf.from_values(fclass, values)

    for mask, v in pmf.masses:
        if v < 0:
            raise PmfValidationError(
                f"entry {mask + 1} is negative ({v})", constraint=f"negative entry {mask + 1}"
            )
    total = pmf.total
    if total != 1:
        raise PmfValidationError(f"entries sum to {total}, not 1", constraint="sum")
    for i, m in enumerate(margins(pmf), start=1):
        if m != fclass.p:
            raise PmfValidationError(
                f"margin {i} equals {m} != p = {fclass.p}", constraint=f"margin {i}"
            )
    return pmf


def mixture(f: Pmf, g: Pmf, lam: Fraction) -> Pmf:
    """lam*f + (1-lam)*g, validated."""
    lam = Fraction(lam)
    if not 0 <= lam <= 1:
        raise ValidationError(f"mixture weight {lam} outside [0, 1]")
    if f.fclass != g.fclass:
        raise ValidationError("mixture of pmfs from different classes")
    acc = {}
    for mask, v in f.masses:
        acc[mask] = acc.get(mask, Fraction(0)) + lam * v
    for mask, v in g.masses:
        acc[mask] = acc.get(mask, Fraction(0)) + (1 - lam) * v
    return validate_pmf(f.fclass, Pmf.from_masses(f.fclass, acc))


# ----- Reference members -----


def upper_frechet_pmf(fclass: FrechetClass) -> Pmf:
    """Comonotone vector: mass q at 0...0 and p at 1...1."""
    return Pmf.from_masses(fclass, {0: fclass.q, fclass.size - 1: fclass.p})


def lower_frechet_pmf(fclass: FrechetClass) -> Pmf:
    """Mutually exclusive vector; exists only when pd <= 1."""
    if fclass.pd > 1:
        raise ValidationError(
            f"lower Frechet bound is not a pmf when pd = {fclass.pd} > 1", constraint="pd"
        )
    masses = {1 << i: fclass.p for i in range(fclass.d)}
    masses[0] = 1 - fclass.pd
    return Pmf.from_masses(fclass, masses)


def independence_pmf(fclass: FrechetClass) -> Pmf:
    _check_dense(fclass)
    p, q, d = fclass.p, fclass.q, fclass.d
    return Pmf.from_masses(
        fclass,
        {mask: p ** mask.bit_count() * q ** (d - mask.bit_count()) for mask in range(fclass.size)},
    )


# ----- Extremality -----


def hi_matrix(pmf: Pmf) -> RatMatrix:
    """H stacked with e_j for every zero coordinate j."""
    H = build_H(pmf.fclass)
    zeros = [j for j in range(pmf.fclass.size) if pmf.mass(j) == 0]
    identity_rows = RatMatrix.from_rows(
        [[Fraction(int(j == z)) for j in range(pmf.fclass.size)] for z in zeros],
        cols=pmf.fclass.size,
    )
    return H.vstack(identity_rows)


def is_extremal(pmf: Pmf) -> ExtremalCertificate:
    """Rank test on H/I.

    Each identity row removes one zero column, so rank(H/I) equals the
    number of zeros plus the rank of H restricted to the support.
    """
    fclass = pmf.fclass
    support = pmf.support
    zeros = fclass.size - len(support)
    columns = [integer_column(fclass, mask) for mask in support]
    restricted = [[col[i] for col in columns] for i in range(fclass.d)]
    found = zeros + integer_rank(restricted)
    required = fclass.size - 1
    return ExtremalCertificate(found == required, found, required)


# ----- Brute-force enumeration -----


def _same_sign(combo: Sequence[int]) -> bool:
    return all(x > 0 for x in combo) or all(x < 0 for x in combo)


def _vertex_relations(
    columns: Sequence[tuple],
    candidates: Sequence[int],
    basis: IncrementalBasis,
    chosen: tuple,
    start: int,
    max_support: int,
) -> Iterator[tuple]:
    """Yield (support, combo) for every vertex support extending ``chosen``.

    ``chosen`` is an independent column set; a later column that depends on
    it closes a circuit, and the circuit is a vertex support exactly when
    its relation has one strict sign.
    """
    for pos in range(start, len(candidates)):
        j = candidates[pos]
        residual, combo = basis.reduce(columns[j])
        if any(residual):
            if len(chosen) + 2 <= max_support:
                yield from _vertex_relations(
                    columns,
                    candidates,
                    basis.extend(residual, combo),
                    chosen + (j,),
                    pos + 1,
                    max_support,
                )
        elif _same_sign(combo):
            yield chosen + (j,), combo


def _enumerate_partition(args: tuple) -> list:
    """Vertices whose smallest support index is ``candidates[first]``."""
    d, s, t, candidates, first, max_support = args
    fclass = FrechetClass(d, s, t)
    columns = {j: integer_column(fclass, j) for j in candidates}
    basis = IncrementalBasis()
    residual, combo = basis.reduce(columns[candidates[first]])
    basis = basis.extend(residual, combo)

    found = []
    for support, relation in _vertex_relations(
        columns, candidates, basis, (candidates[first],), first + 1, max_support
    ):
        total = sum(relation)
        pmf = Pmf.from_masses(fclass, {m: Fraction(w, total) for m, w in zip(support, relation)})
        certificate = is_extremal(pmf)
        if not certificate.is_extremal:
            raise ConsistencyError(f"circuit {support} failed the rank test")
        found.append(pmf)
    return found


def enumerate_extremals_bruteforce(
    fclass: FrechetClass,
    max_support: Optional[int] = None,
    workers: int = 1,
    force: bool = False,
    settings: Optional[Settings] = None,
) -> list:
    """Every vertex of F_d(p), sorted by canonical key."""
    settings = settings or Settings()
    if fclass.d > settings.max_bruteforce_d:
        if not force:
            raise DimensionGuardError(
                f"brute-force enumeration is limited to d <= {settings.max_bruteforce_d}; "
                "pass --force-large-d to override",
                constraint="d",
            )
        logger.warning("Dimension guard overridden for d=%d", fclass.d)
    _check_dense(fclass)

    limit = fclass.d + 1 if max_support is None else min(max_support, fclass.d + 1)
    candidates = tuple(range(fclass.size))
    jobs = [
        (fclass.d, fclass.s, fclass.t, candidates, first, limit)
        for first in range(len(candidates))
    ]

    logger.info(
        "Enumerating vertices of %s (%d partitions, %d workers)", fclass.label, len(jobs), workers
    )
    vertices = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_enumerate_partition, jobs))
    else:
        batches = [_enumerate_partition(job) for job in jobs]
    for batch in batches:
        for pmf in batch:
            vertices[pmf.key] = pmf

    logger.info("Found %d vertices of %s", len(vertices), fclass.label)
    return [vertices[key] for key in sorted(vertices)]


def support_success_experiment(fclass: FrechetClass, trials: int, seed: int) -> Fraction:
    """Share of random (d+1)-column draws that carry a nonzero nonnegative solution."""
    if fclass.d > 6:
        raise DimensionGuardError("support experiment is limited to d <= 6", constraint="d")
    if trials < 0:
        raise ValidationError("trials must be non-negative")
    if trials == 0:
        return Fraction(0)

    rng = np.random.default_rng(seed)
    columns = {j: integer_column(fclass, j) for j in range(fclass.size)}
    draw = min(fclass.d + 1, fclass.size)
    hits = 0
    for _ in range(trials):
        picked = tuple(sorted(int(j) for j in rng.choice(fclass.size, size=draw, replace=False)))
        relations = (
            relation
            for first in range(len(picked))
            for relation in _vertex_relations(
                columns,
                picked,
                IncrementalBasis().extend(*IncrementalBasis().reduce(columns[picked[first]])),
                (picked[first],),
                first + 1,
                draw,
            )
        )
        if next(relations, None) is not None:
            hits += 1
    logger.debug("Support experiment: %d hits out of %d", hits, trials)
    return Fraction(hits, trials)
