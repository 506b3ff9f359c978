"""Tests for the SQLite vertex store."""

import pytest

from frechet.models.database import VertexStore
from frechet.models.entities import FrechetClass, SearchSpec
from frechet.models.polynomial import parse_monomial
from frechet.services.search import search
from frechet.utils.formats import search_record


@pytest.fixture
def store(tmp_path):
    with VertexStore(tmp_path / "test.db") as db:
        yield db


def test_save_and_load_vertices(store, f3, f3_vertices):
    pmfs = list(f3_vertices.values())
    assert store.save_vertices(f3, pmfs) == 9
    assert store.count_vertices(f3) == 9
    loaded = store.get_vertices(f3)
    assert {p.key for p in loaded} == {p.key for p in pmfs}
    assert loaded[0].fclass == f3


def test_duplicate_vertices_are_ignored(store, f3, f3_vertices):
    store.save_vertices(f3, [f3_vertices["r1"], f3_vertices["r2"]])
    assert store.save_vertices(f3, [f3_vertices["r2"], f3_vertices["r3"]]) == 1
    assert store.count_vertices(f3) == 3


def test_classes_are_separate(store, f3, f3_vertices):
    other = FrechetClass(3, 1, 3)
    store.save_vertices(f3, [f3_vertices["r5"]])
    assert store.count_vertices(other) == 0
    assert set(store.get_all_classes()) == {f3, other}
    store.delete_vertices(f3)
    assert store.count_vertices(f3) == 0


def test_search_records(store, f4):
    spec = SearchSpec((parse_monomial("x1x2"), parse_monomial("x1x3")), (2,))
    records = [search_record(r, cursor=3) for r in search(spec, f4, signed=True)]
    for record in records:
        store.save_search_record(f4, record)
    assert store.get_search_records(f4) == records
    assert all(r["extremal"] for r in store.get_search_records(f4, extremal_only=True))


def test_sweep_cursor(store, f4):
    assert store.get_sweep_cursor(f4, 2) == 0
    store.save_sweep_cursor(f4, 2, 17)
    store.save_sweep_cursor(f4, 2, 18)
    assert store.get_sweep_cursor(f4, 2) == 18
    assert store.get_sweep_cursor(f4, 3) == 0


def test_reopen_keeps_data(tmp_path, f3, f3_vertices):
    path = tmp_path / "persist.db"
    with VertexStore(path) as db:
        db.save_vertices(f3, [f3_vertices["r6"]])
    with VertexStore(path) as db:
        assert [p.key for p in db.get_vertices(f3)] == [f3_vertices["r6"].key]


def test_default_location_follows_settings(tmp_path, monkeypatch):
    monkeypatch.setenv("FRECHET_HOME", str(tmp_path / "home"))
    store = VertexStore()
    assert store.db_path == tmp_path / "home" / "vertices.db"
    assert (tmp_path / "home").is_dir()
