import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cycbp.codes import bch_code, code_from_name
from cycbp.tanner import build_graph


@pytest.fixture(scope="session")
def code74():
    return bch_code(3, 1)


@pytest.fixture(scope="session")
def code157():
    return code_from_name("BCH(15,7)")


@pytest.fixture(scope="session")
def code6336():
    return code_from_name("BCH(63,36)")


@pytest.fixture(scope="session")
def code6345():
    return code_from_name("BCH(63,45)")


@pytest.fixture(scope="session")
def prm6322():
    return code_from_name("PRM(63,22)")


@pytest.fixture(scope="session")
def graph74_cyc(code74):
    return build_graph(code74.H_cyc)


@pytest.fixture(scope="session")
def graph74_std(code74):
    return build_graph(code74.H_std)


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
