import os
import subprocess
import sys

import pytest

from cascade._config import Tolerances, _from_env


def test_defaults():
    t = _from_env("")
    assert t == Tolerances()
    assert (t.hermiticity, t.reconstruction, t.equality) == (1e-9, 1e-10, 1e-12)


def test_overrides():
    t = _from_env("hermiticity=1e-8, jacobi_max_sweeps=7")
    assert t.hermiticity == 1e-8 and t.jacobi_max_sweeps == 7
    assert t.positivity == 1e-9


@pytest.mark.parametrize("bad", ["nonsense=1", "hermiticity", "hermiticity=abc"])
def test_bad_override(bad):
    with pytest.raises(ValueError):
        _from_env(bad)


def test_env_reaches_the_package():
    env = dict(os.environ, CASCADE_TOL="trace_preservation=1e-3")
    code = "from cascade._config import TOL; print(TOL.trace_preservation)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "0.001"
