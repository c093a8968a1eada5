import os
import subprocess
import sys

import numpy as np
import pytest

from digs import _kernels_py, analytic, kernels
from digs.dressed import mixing_angles

compiled = pytest.importorskip("digs._kernels")


@pytest.fixture
def setup():
    angles = mixing_angles(0.02, 0.1, 0.01, 0.1)
    consts = analytic.general_constants(angles, 0.02, 0.01, 2.0, 1.0, 1e-4, 3e-4)
    src = (0.07 - 0.001j, 0.06 + 0.002j, -0.02 + 0.001j, -0.025 + 0j)
    return consts, src


def test_general_backends_agree(setup):
    consts, src = setup
    x = np.linspace(-1, 1, 1001)
    for dmu in (0.0, 0.013, x[::-1]):
        a = compiled.chi_general(x, dmu, consts, src)
        b = _kernels_py.chi_general(x, dmu, consts, src)
        assert np.max(np.abs(a - b) / np.abs(b)) < 1e-12


def test_resonant_backends_agree():
    x = np.linspace(-1, 1, 1001)
    args = (0.1 - 0.001j, 0.8, 0.1, 0.1, 2.0, 1.0, 1e-4, 2e-4)
    a = compiled.chi_resonant(x, *args)
    b = _kernels_py.chi_resonant(x, *args)
    assert np.max(np.abs(a - b) / np.abs(b)) < 1e-12


def test_scalar_input_gives_scalar(setup):
    consts, src = setup
    for mod in (compiled, _kernels_py):
        assert np.ndim(mod.chi_general(0.05, 0.0, consts, src)) == 0
        assert np.ndim(mod.chi_resonant(0.05, 0.1, 0.8, 0.1, 0.1, 2.0, 1.0, 1e-4, 1e-4)) == 0


def test_default_backend_is_compiled():
    assert kernels.BACKEND == "compiled"


def test_environment_forces_fallback():
    env = dict(os.environ, DIGS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from digs import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
