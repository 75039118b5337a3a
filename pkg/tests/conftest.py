import pytest
from hypothesis import settings

from simplepoly.catalog import NAMES, catalog
from simplepoly.model import FreeCircle, Region, SimplePolyhedron

settings.register_profile("default", deadline=None)
settings.load_profile("default")

COMPATIBLE = tuple(n for n in NAMES if n != "incompatible_circle")

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def annulus():
    return SimplePolyhedron("annulus", regions=(Region("A", 0, True, (FreeCircle("f"), FreeCircle("g"))),),
                            free_circles=("f", "g"))


def mobius():
    return SimplePolyhedron("mobius", regions=(Region("M", 1, False, (FreeCircle("f"),)),), free_circles=("f",))


def torus():
    return SimplePolyhedron("torus", regions=(Region("T", 1, True, ()),))


def klein():
    return SimplePolyhedron("klein", regions=(Region("K", 2, False, ()),))


@pytest.fixture(params=NAMES)
def entry(request):
    return catalog(request.param)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
