from fractions import Fraction
from pathlib import Path

import pytest

from onepool.instance import PoolingInstance

ROOT = Path(__file__).resolve().parent.parent
INSTANCES = ROOT / "instances"


def make_w1(**overrides) -> PoolingInstance:
    """The worked micro-instance: two inputs, one output, one quality."""
    data = dict(c_in=[1, 2], c_out=[-5], lam=[[3], [1]], mu=[[2]],
                cap_in=[10, 10], cap_pool=10, cap_out=[10], u_in=[10, 10], u_out=[10],
                name="W1")
    data.update(overrides)
    return PoolingInstance.build(**data)


@pytest.fixture
def w1():
    return make_w1()


@pytest.fixture
def w1_path():
    return INSTANCES / "w1.json"


def F(*args):
    return Fraction(*args)
