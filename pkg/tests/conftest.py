import numpy as np
import pytest

from layertrack.characteristic import integrate_characteristic
from layertrack.problem import ProblemSpec, constant1, constant2, make_example1, make_example2
from layertrack.singular import SingularContext
from layertrack.transform import TransformContext


@pytest.fixture(scope="session")
def ex1():
    return make_example1()


@pytest.fixture(scope="session")
def ex2():
    return make_example2()


@pytest.fixture(scope="session")
def curve1(ex1):
    return integrate_characteristic(ex1)


@pytest.fixture(scope="session")
def curve2(ex2):
    return integrate_characteristic(ex2)


@pytest.fixture(scope="session")
def ctx1(curve1):
    return TransformContext(curve1)


def transport_problem(d=0.2, speed=0.2, T=0.5, **kw):
    """Constant convection: layer path d + speed * t."""
    base = dict(
        name="transport",
        a_hat=constant2(speed),
        f_hat=constant2(0.0),
        phi_left=constant1(0.0),
        phi_right=constant1(0.0),
        d=d,
        T=T,
        u_left=constant1(0.0),
        u_right=constant1(0.0),
    )
    base.update(kw)
    return ProblemSpec(**base)


@pytest.fixture
def moving_ctx():
    """d = 0.2 and d(0.5) = 0.3."""
    p = transport_problem()
    return TransformContext(integrate_characteristic(p)), p


def singular_ctx(p, eps, curve=None):
    curve = curve or integrate_characteristic(p)
    return SingularContext(eps, TransformContext(curve), p)


def constant_problem(c=0.7, T=0.5, d=0.3, speed=None):
    """Zero jump, zero source, constant data: the exact solution is c."""
    a = constant2(1.0) if speed is None else speed
    return ProblemSpec(
        name="constant",
        a_hat=a,
        f_hat=constant2(0.0),
        phi_left=constant1(c),
        phi_right=constant1(c),
        d=d,
        T=T,
        u_left=constant1(c),
        u_right=constant1(c),
    )


def rng(seed=0):
    return np.random.default_rng(seed)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
