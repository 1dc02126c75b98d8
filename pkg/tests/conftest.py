import time
from pathlib import Path

import pytest

from eftol.faultsim import SimConfig, build_fault_profile
from eftol.topologies import materialize

ROOT = Path(__file__).resolve().parent.parent
ACCEPTANCE_RESULTS: list[tuple[int, bool, str]] = []

REFERENCE_SPECS = {
    "Q4": "hypercube:n=4",
    "M0_4": "mobius:v=0,n=4",
    "M1_4": "mobius:v=1,n=4",
    "C16_1_4": "circulant:p=16,s=1+4",
    "C16_1_6": "circulant:p=16,s=1+6",
}
REFERENCE_TRIALS = 20000
REFERENCE_SEED = 2025


class LazyProfiles:
    """Builds the large reference profiles once per session and remembers the cost."""

    def __init__(self):
        self._cache = {}
        self.seconds = {}

    def __getitem__(self, name):
        if name not in self._cache:
            start = time.perf_counter()
            g = materialize(REFERENCE_SPECS[name])
            cfg = SimConfig(trials=REFERENCE_TRIALS, master_seed=REFERENCE_SEED)
            self._cache[name] = (g, build_fault_profile(g, cfg, name))
            self.seconds[name] = time.perf_counter() - start
        return self._cache[name]


@pytest.fixture(scope="session")
def reference_profiles():
    return LazyProfiles()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
