import numpy as np
import pytest

from htype import build_generators, make_algebra, octonion_generators

# (n, m) -> generator factory for the three standard fixtures
FIXTURES = {
    (2, 1): lambda: build_generators(2, 1),
    (4, 3): lambda: build_generators(4, 3),
    (8, 7): octonion_generators,
}

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def all_fixture_algebras():
    out = []
    for (n, m), make in FIXTURES.items():
        g = make()
        for p in range(n // 2 + 1):
            out.append(((n, m), p, make_algebra(g, p)))
    return out


@pytest.fixture(scope="session")
def fixture_algebras():
    return all_fixture_algebras()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def unit(rng, k):
    x = rng.normal(size=k)
    return x / np.linalg.norm(x)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
