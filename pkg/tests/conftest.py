import sys

import numpy as np
import pytest

import modeiso as mi


def pytest_terminal_summary(terminalreporter):
    # echo the acceptance verdict lines past stdout capture
    mod = sys.modules.get("test_acceptance") \
        or sys.modules.get("tests.test_acceptance")
    if mod is not None and getattr(mod, "VERDICTS", None):
        terminalreporter.section("acceptance criteria")
        for line in mod.VERDICTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def square_mesh():
    return mi.generate_rectangle(1.0, 1.0, 16, 16)


@pytest.fixture(scope="session")
def square_matrices(square_mesh):
    return (mi.assemble_mass(square_mesh),
            mi.assemble_stiffness(square_mesh))


@pytest.fixture(scope="session")
def icosphere2():
    return mi.generate_icosphere(2)


@pytest.fixture(scope="session")
def schnakenberg_jacobian():
    model = mi.schnakenberg()
    return mi.jacobian(model, mi.steady_state(model))


def random_spd(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    Q = np.linalg.qr(rng.standard_normal((n, n)))[0]
    return Q @ np.diag(rng.uniform(0.5, 10.0, n)) @ Q.T
