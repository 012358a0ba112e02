import numpy as np
import pytest

from opradii.functions import Blaschke, mobius_family

N2 = np.array([[0, 1], [0, 0]], dtype=np.complex128)

_ACCEPTANCE_LINES = []


def random_matrix(rng, d, scale=1.0):
    return scale * (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))


def herm_top_2x2(H):
    """Largest eigenvalue of a 2x2 Hermitian matrix in closed form."""
    a, d = H[0, 0].real, H[1, 1].real
    b = H[0, 1]
    return (a + d) / 2 + np.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)


def nilpotent_k_oracle(a, samples=200001):
    # norm of [[c, a d], [0, c]] with |c| = t, |d| = 1 - t^2, maximised over t
    t = np.linspace(0, 1, samples)
    s = 1 - t * t
    return float(np.max((a * s + np.sqrt(a * a * s * s + 4 * t * t)) / 2))


def dense_degree2_family():
    fam = list(mobius_family())
    for r1 in (0.0, 0.2, 0.4, 0.6):
        for r2 in (0.0, 0.2, 0.4, 0.6):
            for k in range(8):
                fam.append(Blaschke((r1, r2 * np.exp(2j * np.pi * k / 8))))
    return fam


def record_criterion(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}"
    if detail:
        line += f" ({detail})"
    _ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
