import os
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

import helpers  # noqa: E402

SUITE_BUDGET = 120.0


def pytest_sessionstart(session):
    session.config._henon_t0 = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = list(helpers.ACCEPTANCE)
    elapsed = time.perf_counter() - config._henon_t0
    if lines:
        lines.append(("12 (runtime)", elapsed < SUITE_BUDGET,
                      f"full session {elapsed:.1f} s, budget {SUITE_BUDGET:.0f} s"))
        terminalreporter.section("acceptance criteria")
        for label, ok, detail in lines:
            terminalreporter.write_line(f"criterion {label}: {'PASS' if ok else 'FAIL'}  {detail}")
