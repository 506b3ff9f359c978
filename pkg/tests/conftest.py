"""Shared fixtures: the class F_3(2/5) and its nine vertices."""

from fractions import Fraction as F

import pytest

from frechet.models.entities import FrechetClass, Pmf

# Dense vectors in reverse-lex order 000, 100, 010, 110, 001, 101, 011, 111.
F3_VERTICES = {
    "r1": (F(1, 5), 0, 0, F(2, 5), F(2, 5), 0, 0, 0),
    "r2": (F(1, 5), 0, F(2, 5), 0, 0, F(2, 5), 0, 0),
    "r3": (F(1, 5), F(2, 5), 0, 0, 0, 0, F(2, 5), 0),
    "r4": (F(2, 5), 0, 0, F(1, 5), 0, F(1, 5), F(1, 5), 0),
    "r5": (F(3, 5), 0, 0, 0, 0, 0, 0, F(2, 5)),
    "r6": (0, F(1, 5), F(1, 5), F(1, 5), F(2, 5), 0, 0, 0),
    "r7": (0, F(1, 5), F(2, 5), 0, F(1, 5), F(1, 5), 0, 0),
    "r8": (0, F(2, 5), F(1, 5), 0, F(1, 5), 0, F(1, 5), 0),
    "r9": (0, F(3, 10), F(3, 10), 0, F(3, 10), 0, 0, F(1, 10)),
}


@pytest.fixture
def f3():
    return FrechetClass(3, 2, 5)


@pytest.fixture
def f4():
    return FrechetClass(4, 2, 5)


@pytest.fixture
def f3_vertices(f3):
    return {name: Pmf.from_values(f3, values) for name, values in F3_VERTICES.items()}


@pytest.fixture
def pmf_file(tmp_path):
    """Write a pmf in 'bits value' form and return its path."""

    def write(pmf: Pmf, name: str = "pmf.txt"):
        from frechet.utils.formats import format_pmf

        path = tmp_path / name
        path.write_text(format_pmf(pmf) + "\n")
        return path

    return write
