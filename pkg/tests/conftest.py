import json
import sys
from fractions import Fraction as F

import pytest

from cube_interact.model import Choquet, GeometricMean, Multilinear, MultilinearPoly, SetFunction


@pytest.fixture
def x1x2():
    return Multilinear(MultilinearPoly(2, {0b11: 1}))


@pytest.fixture
def min2():
    return Choquet(SetFunction.from_dict(2, {0b11: 1}))


@pytest.fixture
def geo_half():
    return GeometricMean((F(1, 2), F(1, 2)))


@pytest.fixture
def write_spec(tmp_path):
    """Write a spec document to a temp file and return its path."""

    def write(doc, name="spec.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return path

    return write


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
