import numpy as np
import pytest

from ppress.model import QUANT_TOTAL, QuantizedDistribution


def make_dist(*freqs: int) -> QuantizedDistribution:
    assert sum(freqs) == QUANT_TOTAL, "test distribution must sum to 2^16"
    return QuantizedDistribution(np.array(freqs, dtype=np.int64))


_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def record_criterion(name: str, passed: bool) -> None:
    _ACCEPTANCE_RESULTS.append((name, "PASS" if passed else "FAIL"))
    print(f"[acceptance] {name}: {'PASS' if passed else 'FAIL'}")
    assert passed, f"acceptance criterion failed: {name}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{verdict:4s}  {name}")
