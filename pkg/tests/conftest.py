import os
import sys

import numpy as np
import pytest

import sotmatch.fgw as fgw_mod
import sotmatch.matcher as matcher_mod

sys.path.insert(0, os.path.dirname(__file__))

MARGINAL_TOL = 1e-9
DESCENT_SLACK = 1e-12


class SolverAudit:
    """Counts every Frank-Wolfe run and checks descent and feasibility."""

    def __init__(self):
        self.runs = 0
        self.iterates = 0
        self.failures = []

    def wrap(self, solver):
        def audited(prob, *args, callback=None, **kwargs):
            p, q = prob.p, prob.q_hat

            def check(k, T, J):
                self.iterates += 1
                row = np.abs(T.sum(axis=1) - p).max()
                col = np.abs(T.sum(axis=0) - q).max()
                if row > MARGINAL_TOL or col > MARGINAL_TOL or T.min() < 0:
                    self.failures.append(
                        f"iterate {k} infeasible (row {row:.2e}, col {col:.2e})")
                if callback is not None:
                    callback(k, T, J)

            report = solver(prob, *args, callback=check, **kwargs)
            self.runs += 1
            trace = np.asarray(report.objective_trace)
            bad = np.flatnonzero(np.diff(trace) > DESCENT_SLACK)
            if bad.size:
                self.failures.append(f"objective increased at step {bad[0] + 1}")
            return report

        return audited


AUDIT = SolverAudit()
_ORIGINAL = fgw_mod.frank_wolfe


@pytest.fixture(autouse=True)
def audit_frank_wolfe(monkeypatch):
    """Every solver run in the suite is checked for descent and feasibility."""
    before = len(AUDIT.failures)
    wrapped = AUDIT.wrap(_ORIGINAL)
    monkeypatch.setattr(fgw_mod, "frank_wolfe", wrapped)
    monkeypatch.setattr(matcher_mod, "frank_wolfe", wrapped)
    yield AUDIT
    assert AUDIT.failures[before:] == []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES and AUDIT.runs == 0:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
        tr.write_line(line)
    status = "PASS" if not AUDIT.failures else "FAIL"
    tr.write_line(f"{status} criterion 4 (suite-wide): {AUDIT.runs} solver runs, "
                  f"{AUDIT.iterates} iterates audited, "
                  f"{len(AUDIT.failures)} violations")
