import pytest

from zbarfit import geometry


@pytest.fixture(scope="session")
def disk():
    return geometry.disk()


@pytest.fixture(scope="session")
def annulus05():
    return geometry.annulus(0.5, 1.0)


@pytest.fixture(scope="session")
def ellipse21():
    return geometry.ellipse(2.0, 1.0)


@pytest.fixture(scope="session")
def square1():
    return geometry.square()


@pytest.fixture(scope="session")
def rect21():
    return geometry.rectangle(2.0, 1.0)


@pytest.fixture(scope="session")
def builtins(disk, annulus05, ellipse21, square1, rect21):
    """The five stock domains, labelled."""
    return {
        "disk": disk,
        "annulus": annulus05,
        "ellipse": ellipse21,
        "square": square1,
        "rect": rect21,
    }
