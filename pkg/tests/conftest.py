import sys
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
sys.path.insert(0, str(Path(__file__).parent))

from learncop import _pykernels  # noqa: E402

try:
    from learncop import _ckernels
except ImportError:  # extension not built
    _ckernels = None

KERNELS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


@pytest.fixture(params=KERNELS, ids=lambda k: k.NAME)
def kernel(request):
    return request.param


@pytest.fixture
def running():
    from learncop.tptp import parse_problem

    return parse_problem(DATA / "running.p")


@pytest.fixture
def reduction():
    from learncop.tptp import parse_problem

    return parse_problem(DATA / "reduction.p")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
