"""Structured report for one pmf of a Frechet class."""

from frechet.models.entities import Pmf
from frechet.services.convex_order import (
    exclusivity_order,
    mean_correlation,
    mean_second_moment,
    stop_loss,
    sum_pmf,
)
from frechet.services.ideal import classify_pmf, pmf_to_poly
from frechet.services.polytope import is_extremal, margins, validate_pmf
from frechet.utils.formats import format_poly, pmf_to_json
from frechet.utils.linalg import format_rat


def build_report(pmf: Pmf) -> dict:
    """Margins, sum law, stop-loss at integers, moments, certificate and polynomial image.

    Every rational is rendered as a "num/den" string.
    """
    fclass = pmf.fclass
    validate_pmf(fclass, pmf)
    s = sum_pmf(pmf)
    certificate = is_extremal(pmf)

    return {
        "class": {"d": fclass.d, "s": fclass.s, "t": fclass.t, "p": format_rat(fclass.p)},
        "pmf": pmf_to_json(pmf),
        "margins": [format_rat(m) for m in margins(pmf)],
        "sum_pmf": [format_rat(v) for v in s.probs],
        "stop_loss": {str(level): format_rat(stop_loss(s, level)) for level in range(fclass.d + 1)},
        "mean_second_moment": format_rat(mean_second_moment(s)),
        "mean_correlation": format_rat(mean_correlation(pmf)),
        "exclusivity_order": exclusivity_order(pmf),
        "extremal": {
            "is_extremal": certificate.is_extremal,
            "rank_found": certificate.rank_found,
            "rank_required": certificate.rank_required,
        },
        "classification": classify_pmf(pmf).value,
        "polynomial": format_poly(pmf_to_poly(pmf)),
    }
