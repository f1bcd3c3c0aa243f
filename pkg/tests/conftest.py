import numpy as np
import pytest

from effcap.channel import SystemParams
from effcap.queue_sim import run_replications

THETA_TABLE = (0.0, 0.001, 0.01, 0.1, 1.0)
EBN0_TABLE_DB = (4.6776, 4.7029, 4.9177, 6.3828, 10.8333)
S0_TABLE = (0.4720, 0.4749, 0.4978, 0.6151, 0.6061)


@pytest.fixture
def defaults():
    return SystemParams()


def random_params(rng, snr_range=(1e-6, 1e2), tb_range=(10.0, 1e6)):
    snr = float(np.exp(rng.uniform(*np.log(snr_range))))
    tb = float(np.exp(rng.uniform(*np.log(tb_range))))
    frame_t = 2e-3
    return SystemParams.from_snr(snr, gamma=float(rng.uniform(0.2, 5.0)),
                                 frame_t=frame_t, bandwidth_b=tb / frame_t)


@pytest.fixture(scope="session")
def queue_runs():
    """Ten 1e7-frame replications at theta = 0.01, at 100% and 80% of capacity."""
    p = SystemParams()
    seeds = range(10)
    return {
        1.0: run_replications(0.01, p, seeds, safety=1.0, frames=10**7),
        0.8: run_replications(0.01, p, seeds, safety=0.8, frames=10**7),
    }


ACCEPTANCE_LINES = []


def record(criterion, passed, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
