import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from psrnoise import gaussian as gs  # noqa: E402

# Golden fit for (-2.0 dB, +3.75 dB), lossless; cross-checked against
# oracles.seeded_fit_closed_form in test_psr.
FIT_G = 0.58158901152023
FIT_NP = 0.49623565609443


@pytest.fixture
def fitted_state():
    return gs.apply_all(gs.vacuum(), [gs.ThermalSeed(0.0, FIT_NP), gs.Shear(FIT_G)])


@pytest.fixture
def shear_state():
    return gs.apply(gs.vacuum(), gs.Shear(0.466))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
