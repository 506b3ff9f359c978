"""Tests for polynomial and pmf text formats."""

import json
from fractions import Fraction as F

import pytest

from frechet.errors import PmfValidationError, ValidationError
from frechet.models.entities import Pmf, SearchSpec, bits_string, mask_of
from frechet.models.polynomial import MultilinearPoly, monomial_label, parse_monomial
from frechet.services.ideal import fundamental, groebner_generators
from frechet.services.search import search
from frechet.utils.formats import (
    dumps,
    format_dense,
    format_pmf,
    format_poly,
    format_quadratic,
    parse_pmf_text,
    parse_poly,
    pmf_from_key,
    search_record,
)


def test_format_poly_order_and_signs(f3):
    poly = fundamental((1, 2), f3).as_poly.scale(F(-1, 5))
    assert format_poly(poly) == "-1/5*x1*x2 + 1/5*x1 + 1/5*x2 - 1/5"
    assert format_poly(MultilinearPoly.zero(2)) == "0"
    assert format_poly(MultilinearPoly.constant(2, F(-3))) == "-3"


def test_format_quadratic(f3):
    square = groebner_generators(f3)[0]
    assert format_quadratic(square) == "1*x1*x1 + 1/2*x1 - 3/2"


def test_parse_poly_accepts_printed_form():
    text = "-2*x1*x2*x3*x4 + 1*x1*x2 + 1*x1*x3*x4 + 1*x2*x3*x4 - 1"
    poly = parse_poly(text, 6)
    assert poly.coefficient(0b1111) == -2
    assert poly.coefficient(0) == -1
    assert format_poly(poly) == text


def test_parse_poly_collects_like_terms():
    assert parse_poly("x1*x2 + x2*x1 - 2*x1*x2 + 3/4", 2) == MultilinearPoly.constant(2, F(3, 4))


@pytest.mark.parametrize("text", ["x1^2 + 1", "x1**2", "x3 - 1", "sqrt(2)*x1", "x1 +", "1/x1"])
def test_parse_poly_rejects(text):
    with pytest.raises(ValidationError):
        parse_poly(text, 2)


@pytest.mark.parametrize(
    "text",
    [
        "__import__('os').getcwd() + x1",
        "x1.__class__",
        "lambda: x1",
        "E*x1",
        "x1; x2",
    ],
)
def test_parse_poly_only_accepts_polynomial_characters(text):
    with pytest.raises(ValidationError) as info:
        parse_poly(text, 2)
    assert info.value.constraint == "polynomial"


def test_bits_round_trip():
    assert bits_string(3, 3) == "110"
    assert mask_of("001") == 4
    with pytest.raises(ValidationError):
        mask_of("012")


def test_monomial_labels():
    assert monomial_label(5) == "x1x3"
    assert parse_monomial("x2x3") == 6
    with pytest.raises(ValidationError):
        parse_monomial("x1y2")


def test_parse_sparse_pmf(f3, f3_vertices):
    text = """
    # r6 of F_3(2/5)
    100 1/5
    010 1/5
    110 1/5   # x1 = x2 = 1
    001 2/5
    """
    assert parse_pmf_text(text, f3) == f3_vertices["r6"]


def test_parse_dense_pmf(f3, f3_vertices):
    text = format_dense(f3_vertices["r9"].values)
    assert text == "0 3/10 3/10 0 3/10 0 0 1/10"
    assert parse_pmf_text(text, f3) == f3_vertices["r9"]


def test_format_pmf_lists_support(f3_vertices):
    assert format_pmf(f3_vertices["r5"]) == "000 3/5\n111 2/5"


def test_parse_pmf_errors(f3):
    with pytest.raises(PmfValidationError) as info:
        parse_pmf_text("# nothing here\n", f3)
    assert info.value.constraint == "length"
    with pytest.raises(PmfValidationError):
        parse_pmf_text("10 1/2\n01 1/2\n", f3)
    with pytest.raises(ValidationError):
        parse_pmf_text("100 1/2\n100 1/2\n", f3)
    with pytest.raises(ValidationError):
        parse_pmf_text("100 1/2 extra\n010 1/2\n", f3)
    with pytest.raises(ValidationError):
        parse_pmf_text("100 0.5\n010 1/2\n", f3)


def test_key_round_trip(f3_vertices):
    for pmf in f3_vertices.values():
        assert pmf_from_key(pmf.key, pmf.fclass) == pmf


def test_dumps_renders_fractions():
    payload = {"p": F(2, 5), "values": [F(1), F(-1, 3)]}
    assert json.loads(dumps(payload)) == {"p": "2/5", "values": ["1", "-1/3"]}
    with pytest.raises(TypeError):
        dumps({"bad": object()})


def test_search_record(f4):
    spec = SearchSpec((parse_monomial("x1x2"), parse_monomial("x1x3")), (2,))
    [result] = search(spec, f4)
    record = search_record(result, cursor=12)
    assert record["cursor"] == 12
    assert record["spec"] == {"J": ["x1x2", "x1x3"], "K": [2]}
    assert record["coefficients"] == ["1", "-1"]
    assert record["polynomial"] == "1*x1*x2 - 1*x1*x3 - 1*x2 + 1*x3"
    assert record["pmf"]["0000"] == "1/5"
    assert record["extremal"] is True
    assert "cursor" not in search_record(result)


def test_pmf_equality_ignores_zero_entries(f3):
    dense = Pmf.from_values(f3, [F(3, 5), 0, 0, 0, 0, 0, 0, F(2, 5)])
    assert dense == Pmf.from_masses(f3, {0: F(3, 5), 7: F(2, 5)})
