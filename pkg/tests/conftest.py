import pytest

from qorder.exactnum import cyclotomic_build
from qorder import strata


@pytest.fixture
def r3():
    return cyclotomic_build(3)


@pytest.fixture
def r5():
    return cyclotomic_build(5)


def make_character(r, values, witnesses=None):
    """Character from rational literals, wrapping them as cyclotomic scalars."""
    vv = {k: (v if hasattr(v, "vec") else r.scalar(v))
          for k, v in values.items()}
    ww = {k: (v if hasattr(v, "vec") else r.scalar(v))
          for k, v in (witnesses or {}).items()}
    return strata.Character(vv, ww)
