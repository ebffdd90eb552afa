import numpy as np
import pytest
from scipy.linalg import expm

from graphsteer.symplectic import symplectic_form

_ACCEPTANCE = []


@pytest.fixture
def acceptance_report():
    """Record one pass/fail line per acceptance criterion."""

    def report(label: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f": {detail}" if detail else ""))
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


def random_symplectic(n_modes, rng, scale=0.5):
    """exp(Omega H) with H symmetric is symplectic."""
    h = rng.normal(scale=scale, size=(2 * n_modes, 2 * n_modes))
    return expm(symplectic_form(n_modes) @ (h + h.T) / 2)


def random_covariance(n_modes, rng, max_thermal=3.0):
    """Williamson form S diag(nu, nu) S^T with every nu >= 1."""
    nus = rng.uniform(1.0, max_thermal, size=n_modes)
    s = random_symplectic(n_modes, rng)
    return s @ np.diag(np.repeat(nus, 2)) @ s.T, np.sort(nus)[::-1]


def two_mode_squeezed(r):
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    z = np.diag([1.0, -1.0])
    return np.block([[c * np.eye(2), s * z], [s * z, c * np.eye(2)]])
