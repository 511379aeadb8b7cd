import pytest
from click.testing import CliRunner

from config import Config
from lapcode.dsl import parse_construct
from lapcode.simplex import build_simplex, lambda_set


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def guard(monkeypatch):
    """Lower LAPCODE_GUARD_LIMIT for one test."""
    def set_limit(limit):
        monkeypatch.setattr(Config, "GUARD_LIMIT", limit)
        lambda_set.cache_clear()
    yield set_limit
    lambda_set.cache_clear()


@pytest.fixture
def simplex_of():
    def build(expression, i=None):
        return build_simplex(parse_construct(expression), i)
    return build


@pytest.fixture
def edge_file(tmp_path):
    def write(text, name="graph.txt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return write
