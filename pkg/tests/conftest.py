import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nilscroll import construct as C
from nilscroll import minkowski as mk
from nilscroll.frames import F0_ORIENTED

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


GALLERY_CASES = [
    ("circle", {}),
    ("hyperbola", {}),
    ("parabola", {"b": 0.0}),
    ("parabola", {"b": 1.0}),
    ("vertical_plane", {"theta": np.pi / 3}),
    ("horizontal_umbrella", {}),
    ("tangent", {}),
]


def case_id(case):
    name, params = case
    return name + "".join(f"-{k}{v:g}" for k, v in params.items())


_cache = {}


def gallery_scroll(name, **params):
    key = (name, tuple(sorted(params.items())))
    if key not in _cache:
        _cache[key] = C.construct_gallery(name, **params)
    return _cache[key]


@pytest.fixture(scope="session")
def circle_scroll():
    return gallery_scroll("circle")


@pytest.fixture(scope="session")
def mink_sin_frame():
    return mk.integrate_mink_frame(np.sin, 0.5, init=F0_ORIENTED)


@pytest.fixture(scope="session")
def mink_flat_frame():
    return mk.integrate_mink_frame(0.0, 0.5, init=F0_ORIENTED)


def grid(domain, n=21):
    (s0, s1), (t0, t1) = domain
    return np.meshgrid(np.linspace(s0, s1, n), np.linspace(t0, t1, n), indexing="ij")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
