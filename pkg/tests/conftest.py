import sys
from pathlib import Path

import pytest
from hypothesis import settings

from arclab import arcs, expsum

ROOT = Path(__file__).resolve().parent.parent
INSTANCES = ROOT / "instances"
sys.path.insert(0, str(Path(__file__).resolve().parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def instance_path(name: str) -> Path:
    return INSTANCES / name


@pytest.fixture(scope="session")
def cubic7():
    return expsum.load_instance(instance_path("cubic7.cfg"))


@pytest.fixture(scope="session")
def cubic7_hist(cubic7):
    return expsum.histogram(cubic7)


@pytest.fixture(scope="session")
def curve5():
    return expsum.load_instance(instance_path("curve5.cfg"))


@pytest.fixture(scope="session")
def curve5_hist(curve5):
    return expsum.histogram(curve5)


@pytest.fixture(scope="session")
def curve7():
    return expsum.load_instance(instance_path("curve7.cfg"))


@pytest.fixture(scope="session")
def curve7_hist(curve7):
    return expsum.histogram(curve7)


@pytest.fixture(scope="session")
def cl_5_6():
    return arcs.classify_all(5, 6)


@pytest.fixture(scope="session")
def cl_7_6():
    return arcs.classify_all(7, 6)


@pytest.fixture(scope="session")
def cl_7_3():
    return arcs.classify_all(7, 3)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
