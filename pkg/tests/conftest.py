import math

import numpy as np
import pytest

from cavityloss import RB85, load_scenario
from cavityloss.cavity import CavityGeometry, build_modes, pumped_mode
from cavityloss.units import convert


@pytest.fixture(scope="session")
def ref_scenario():
    return load_scenario("default")


@pytest.fixture(scope="session")
def ref_cavity(ref_scenario):
    return ref_scenario.cavity


@pytest.fixture(scope="session")
def ref_modes(ref_scenario):
    return build_modes(ref_scenario.cavity, ref_scenario.q_max)


@pytest.fixture(scope="session")
def pump(ref_cavity):
    return pumped_mode(ref_cavity)


@pytest.fixture
def rng():
    return np.random.default_rng(20001)


@pytest.fixture(scope="session")
def narrow_cavity():
    """Aperture small enough that low-order modes are clipped."""
    return CavityGeometry(
        length=2.9,
        mirror_diameter=2 * 0.012,
        reflectivity=0.97,
        gamma_c=convert(200, "MHz", "rad/s"),
        wavelength=795e-7,
    )


acceptance_key = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[acceptance_key] = []


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def _report(number, label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {label} ({detail})"
        request.config.stash[acceptance_key].append(line)
        print(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(acceptance_key, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
