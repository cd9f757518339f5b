"""
Test configuration and fixtures for lllcore tests.
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, Any

import pytest

from lllcore.config.loader import ENV_OVERRIDES
from lllcore.oracles.explicit import ExplicitInstance
from lllcore.oracles.factory import InstanceFactory
from lllcore.oracles.matchings import HostGraph, MatchingState, build_matching_instance
from lllcore.oracles.variable import VariableFlaw, VariableModel

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def explicit(description: Dict[str, Any]) -> ExplicitInstance:
    """Build an explicit instance, defaulting to the uniform measure."""
    data = {"type": "explicit", "measure": "uniform"}
    data.update(description)
    return ExplicitInstance.from_dict(data)


def matching(host: HostGraph, edges) -> MatchingState:
    return MatchingState.from_edges(host, edges)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep LLLCORE_* overrides from the shell out of the tests."""
    for name in ENV_OVERRIDES:
        monkeypatch.delenv(name, raising=False)
    yield


@pytest.fixture(autouse=True)
def capture_logs(request):
    """Capture lllcore log records during test execution."""
    records = []
    handler = logging.Handler()
    handler.emit = lambda record: records.append(record)

    package_logger = logging.getLogger("lllcore")
    package_logger.addHandler(handler)

    yield records

    package_logger.removeHandler(handler)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def k4_host() -> HostGraph:
    return HostGraph.complete(2)


@pytest.fixture
def k6_host() -> HostGraph:
    return HostGraph.complete(3)


@pytest.fixture
def k4(k4_host):
    """K4 with one flaw per edge, in lexicographic edge order."""
    edges = [[[0, 1]], [[0, 2]], [[0, 3]], [[1, 2]], [[1, 3]], [[2, 3]]]
    return build_matching_instance(k4_host, edges, name="k4")


@pytest.fixture
def k4_single(k4_host):
    return build_matching_instance(k4_host, [[[0, 1]]], name="k4-single")


@pytest.fixture
def k4_pair(k4_host):
    return build_matching_instance(k4_host, [[[0, 1], [2, 3]]], name="k4-pair")


@pytest.fixture
def k6_pairs():
    return InstanceFactory.create({
        "type": "matching",
        "host": {"case": "P1", "n": 3},
        "flaws": [[[0, 1], [2, 3]], [[0, 2], [4, 5]], [[1, 4], [3, 5]]],
    })


@pytest.fixture
def perm3():
    """Permutations of three elements as perfect matchings of K_{3,3}."""
    host = HostGraph.bipartite([([0, 1, 2], [3, 4, 5])])
    return build_matching_instance(host, [[[0, 3]], [[1, 4]], [[2, 5]]], name="perm3")


@pytest.fixture
def toy_loop():
    """One state out of four carries a looped flaw whose action is uniform on Ω."""
    return explicit({
        "name": "toy-loop",
        "states": 4,
        "flaws": ["a"],
        "present": [[0], [], [], []],
        "actions": [{"flaw": 0, "from": 0, "to": [[0, "1/4"], [1, "1/4"], [2, "1/4"], [3, "1/4"]]}],
        "dependency": {"loops": [0]},
    })


@pytest.fixture
def two_var():
    """Two fair bits with flaws x0 = 1 and x1 = 1."""
    flaws = [VariableFlaw((0,), frozenset({(1,)}), "x0=1"), VariableFlaw((1,), frozenset({(1,)}), "x1=1")]
    return VariableModel([[0, 1], [0, 1]], flaws, name="two-var")


@pytest.fixture
def two_var_point():
    """``two_var`` started from (1, 1)."""
    flaws = [VariableFlaw((0,), frozenset({(1,)}), "x0=1"), VariableFlaw((1,), frozenset({(1,)}), "x1=1")]
    return VariableModel([[0, 1], [0, 1]], flaws, initial={(1, 1): Fraction(1)}, name="two-var-point")
