import os
import subprocess
import sys

import numpy as np
import pytest

from qsbai import build_executive, build_walk_operator, initial_state
from qsbai._backend import BACKENDS, available_backends, load_backend


def select_in_subprocess(env_value):
    env = dict(os.environ)
    env.pop("QSBAI_PURE_PYTHON", None)
    if env_value is not None:
        env["QSBAI_PURE_PYTHON"] = env_value
    out = subprocess.run([sys.executable, "-c", "import qsbai; print(qsbai.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    return out.stdout.strip()


def test_numpy_always_available():
    assert "numpy" in available_backends()


def test_forced_fallback():
    assert select_in_subprocess("1") == "numpy"


def test_default_prefers_compiled():
    expected = "cython" if "cython" in available_backends() else "numpy"
    assert select_in_subprocess(None) == expected
    assert select_in_subprocess("0") == expected


def test_unknown_backend():
    with pytest.raises(ValueError):
        load_backend("fortran")


@pytest.mark.skipif("cython" not in available_backends(), reason="extension not built")
def test_kernels_agree(corpus_instance):
    ex = build_executive(corpus_instance.graph, corpus_instance.env.num_env_states)
    op = build_walk_operator(ex, corpus_instance.env)
    psi = initial_state(ex, corpus_instance.env).amplitudes
    results = {}
    for name in BACKENDS:
        k = load_backend(name)
        step = k.apply_step(psi, *op.kernel_args())
        far = k.evolve(psi, 37, *op.kernel_args())
        arm = np.ascontiguousarray(ex.arc_terminus_arm, dtype=np.intp)
        table, final = k.sweep(psi, 37, *op.kernel_args(), arm, ex.num_arms)
        results[name] = (step, far, table, final)
    for a, b in zip(results["cython"], results["numpy"]):
        assert np.abs(a - b).max() <= 1e-12
    # sweep's final state is the evolved state
    assert np.abs(results["cython"][1] - results["cython"][3]).max() == 0


def test_evolve_does_not_mutate_input():
    for name in available_backends():
        from qsbai import build_complete_with_loops, two_state_environment
        g = build_complete_with_loops(3)
        env = two_state_environment([0.5, 0.2, 0.1])
        ex = build_executive(g, 2)
        op = build_walk_operator(ex, env)
        psi = initial_state(ex, env).amplitudes
        before = psi.copy()
        load_backend(name).evolve(psi, 5, *op.kernel_args())
        assert np.array_equal(psi, before)
