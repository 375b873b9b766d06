import pathlib
import sys

import pytest
from hypothesis import settings

# reproducible property tests: same examples every run
settings.register_profile("repeatable", derandomize=True)
settings.load_profile("repeatable")

sys.path.insert(0, str(pathlib.Path(__file__).parent))

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def aon_fixture():
    from loopforge.aon import parse_aon

    return parse_aon((DATA / "sample_aon.txt").read_text())


@pytest.fixture(scope="session")
def aon_fixture_loop():
    from loopforge.fileio import parse_loop

    return parse_loop((DATA / "sample_aon_loop.txt").read_text())


@pytest.fixture(scope="session")
def ww_fixture():
    from loopforge.waterwalk import parse_ww

    return parse_ww((DATA / "sample_ww.txt").read_text())


@pytest.fixture(scope="session")
def ww_fixture_loop():
    from loopforge.fileio import parse_loop

    return parse_loop((DATA / "sample_ww_loop.txt").read_text())


@pytest.fixture(scope="session")
def aon_certificate():
    """The canonical-orientation gadget certificate (a few seconds to build)."""
    from loopforge.reduction import certify_gadget

    return certify_gadget("aon")
