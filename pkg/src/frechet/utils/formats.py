"""
Text formats for polynomials and pmfs.

Polynomials print in descending lex order (x1 > x2 > ...), constant last,
e.g. ``-2*x1*x2*x3*x4 + 1*x1*x2 + 1*x2*x3*x4 - 1``. Pmf files hold one
``bits value`` pair per line, '#' starting a comment.
"""

import json
import re
from fractions import Fraction
from tokenize import TokenError
from typing import Iterable, Optional

from sympy import Poly, PolynomialError, Rational, Symbol, SympifyError
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

from frechet.errors import PmfValidationError, ValidationError
from frechet.models.entities import FrechetClass, Pmf, SearchResult, bits_string, mask_of
from frechet.models.polynomial import (
    MultilinearPoly,
    QuadraticPoly,
    monomial_label,
    variables_of,
)
from frechet.utils.linalg import format_rat, parse_rat

_TRANSFORMS = standard_transformations + (convert_xor,)

# Characters allowed through to parse_expr, which evaluates its input.
_POLY_TEXT = re.compile(r"(?:[\s\d+\-*/^()]|x(?=\d))*")


# ----- Polynomials -----


def _monomial_text(mask: int) -> str:
    return "*".join(f"x{v}" for v in variables_of(mask))


def _join_terms(pieces: Iterable[tuple]) -> str:
    """Join (coefficient, monomial-text) pairs with explicit signs."""
    out = []
    for coeff, mono in pieces:
        magnitude = format_rat(abs(coeff))
        body = f"{magnitude}*{mono}" if mono else magnitude
        if not out:
            out.append(f"-{body}" if coeff < 0 else body)
        else:
            out.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(out) if out else "0"


def format_poly(poly: MultilinearPoly) -> str:
    return _join_terms((c, _monomial_text(m)) for m, c in poly.sorted_terms())


def format_quadratic(poly: QuadraticPoly) -> str:
    def mono(exps):
        return "*".join(f"x{i + 1}" for i, e in enumerate(exps) for _ in range(e))

    return _join_terms((c, mono(e)) for e, c in poly.sorted_terms())


def parse_poly(text: str, num_vars: int) -> MultilinearPoly:
    """Parse a multilinear polynomial in x1..x_{num_vars}."""
    if not _POLY_TEXT.fullmatch(text):
        raise ValidationError(
            f"polynomial {text!r} may only hold x<n>, rationals, + - * / ^ and parentheses",
            constraint="polynomial",
        )
    symbols = [Symbol(f"x{i}") for i in range(1, num_vars + 1)]
    local = {s.name: s for s in symbols}
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMS)
    except (SympifyError, SyntaxError, TypeError, TokenError) as exc:
        raise ValidationError(f"cannot parse polynomial {text!r}: {exc}") from None

    unknown = {str(s) for s in expr.free_symbols} - set(local)
    if unknown:
        raise ValidationError(
            f"unknown variables {sorted(unknown)}; expected x1..x{num_vars}"
        )
    try:
        poly = Poly(expr, *symbols)
    except PolynomialError as exc:
        raise ValidationError(f"not a polynomial: {text!r} ({exc})") from None

    terms = {}
    for exps, coeff in poly.terms():
        if any(e > 1 for e in exps):
            raise ValidationError(f"polynomial {text!r} is not multilinear")
        if not isinstance(coeff, Rational):
            raise ValidationError(f"coefficient {coeff} is not rational")
        mask = sum(1 << i for i, e in enumerate(exps) if e)
        terms[mask] = Fraction(int(coeff.p), int(coeff.q))
    return MultilinearPoly.from_terms(num_vars, terms)


# ----- Pmfs -----


def format_pmf(pmf: Pmf) -> str:
    d = pmf.fclass.d
    return "\n".join(f"{bits_string(m, d)} {format_rat(v)}" for m, v in pmf.masses)


def format_dense(values: Iterable) -> str:
    return " ".join(format_rat(v) for v in values)


def parse_pmf_text(text: str, fclass: FrechetClass) -> Pmf:
    """Read ``bits value`` lines, or a single dense line of 2^d rationals."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise PmfValidationError("empty pmf input", constraint="length")

    tokens = lines[0].split()
    if len(lines) == 1 and len(tokens) == fclass.size:
        return Pmf.from_values(fclass, [parse_rat(tok) for tok in tokens])

    masses = {}
    for line in lines:
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(f"expected 'bits value', got {line!r}")
        bits, value = parts
        if len(bits) != fclass.d:
            raise PmfValidationError(
                f"point {bits!r} has length {len(bits)}, expected {fclass.d}",
                constraint="length",
            )
        mask = mask_of(bits)
        if mask in masses:
            raise ValidationError(f"point {bits} listed twice")
        masses[mask] = parse_rat(value)
    return Pmf.from_masses(fclass, masses)


def pmf_to_json(pmf: Pmf) -> dict:
    d = pmf.fclass.d
    return {bits_string(m, d): format_rat(v) for m, v in pmf.masses}


def dumps(payload, indent: Optional[int] = None) -> str:
    """JSON with rationals rendered as strings."""

    def default(obj):
        if isinstance(obj, Fraction):
            return format_rat(obj)
        raise TypeError(f"cannot serialise {type(obj).__name__}")

    return json.dumps(payload, default=default, indent=indent)


def pmf_from_key(key: str, fclass: FrechetClass) -> Pmf:
    """Inverse of ``Pmf.key``."""
    masses = {}
    for item in key.split(";"):
        bits, _, value = item.partition("=")
        if len(bits) != fclass.d:
            raise ValidationError(f"stored point {bits!r} does not match d={fclass.d}")
        masses[mask_of(bits)] = parse_rat(value)
    return Pmf.from_masses(fclass, masses)


# ----- Search records -----


def search_record(result: SearchResult, cursor: Optional[int] = None) -> dict:
    """Line-delimited record {spec, coefficients, polynomial, pmf, extremal}."""
    record = {}
    if cursor is not None:
        record["cursor"] = cursor
    spec = result.spec
    record["spec"] = (
        {"J": [monomial_label(m) for m in spec.J], "K": list(spec.K)} if spec else None
    )
    record["coefficients"] = [format_rat(a) for a in result.coefficients]
    record["polynomial"] = format_poly(result.polynomial)
    record["pmf"] = pmf_to_json(result.pmf) if result.pmf is not None else None
    record["extremal"] = result.is_extremal
    return record
