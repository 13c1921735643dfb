from pathlib import Path

import pytest

from bindmod.model import load_problem

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name):
    return FIXTURES / f"{name}.json"


@pytest.fixture(scope="session")
def problems():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_problem(fixture_path(name))
        return cache[name]

    return get
