import pytest

from singphase.amplitude import default_amplitude, make_poly_plateau


@pytest.fixture(scope="session")
def phi():
    return default_amplitude()


@pytest.fixture(scope="session")
def phi64():
    # long jet for lattice checks up to n = 64
    return default_amplitude(jet_length=80)


@pytest.fixture(scope="session")
def poly_phi():
    return make_poly_plateau([1.0, 0.5, -0.25, 0.125])


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance as acc  # noqa: PLC0415

    lines = acc.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
