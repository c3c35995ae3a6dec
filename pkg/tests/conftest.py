import pytest

from config.config import Config
from src.workbench.generators import gen_complete_tree, gen_path, gen_random_tree, gen_spider, gen_star


@pytest.fixture
def path4():
    return gen_path(4)


@pytest.fixture
def star4():
    return gen_star(3)


@pytest.fixture
def spider45():
    return gen_spider(4, 5)


@pytest.fixture
def binary3():
    return gen_complete_tree(2, 3)


@pytest.fixture
def random_trees():
    return [gen_random_tree(n, seed=s) for n, s in [(2, 0), (7, 1), (30, 2), (80, 3), (150, 4)]]


@pytest.fixture(autouse=True)
def _isolated_config(monkeypatch, tmp_path):
    """No env seed override and outputs under the test's tmp dir."""
    monkeypatch.setattr(Config, "SEED", None)
    monkeypatch.setattr(Config, "OUTPUT_DIR", tmp_path / "output")
