import importlib.util
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

import msrkit
from msrkit import _fallback, graph, solvers
from msrkit._backend import available_backends
from msrkit.harness import random_instance

ROOT = Path(__file__).resolve().parents[1]
BACKENDS = available_backends()
needs_compiled = pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")


def load_bench():
    spec = importlib.util.spec_from_file_location("bench_kernels", ROOT / "benchmarks" / "bench_kernels.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def test_backend_flag_is_consistent():
    assert msrkit.BACKEND in BACKENDS
    assert "python" in BACKENDS


@needs_compiled
@pytest.mark.parametrize("seed", range(6))
def test_kernels_agree(seed):
    bench = load_bench()
    cases = [
        bench._apsp_case(seed, 30, 1),
        bench._apsp_case(seed, 30, 7),
        bench._cover_case(seed, 9, 3, False),
        bench._cover_case(seed, 9, 3, True),
    ]
    fast = BACKENDS["cython"]
    for name, args, _ in cases:
        a = getattr(fast, name)(*args)
        b = getattr(_fallback, name)(*args)
        assert bench._same(a, b), name


@pytest.fixture
def pure_python(monkeypatch):
    monkeypatch.setattr(graph, "kernels", _fallback)
    monkeypatch.setattr(solvers, "kernels", _fallback)


@pytest.mark.parametrize("seed", range(20))
def test_solvers_on_fallback(pure_python, seed):
    base = random_instance(seed, n_max=8)
    inst = solvers.MsrInstance.from_graph(base.graph, base.k, None, base.variant, base.allowed)
    assert np.array_equal(inst.metric.dist, base.metric.dist)
    ref = solvers.solve_branch_bound(inst)
    dp = solvers.solve_cover_dp(inst)
    assert (dp is None) == (ref is None)
    if ref is not None:
        assert dp.optimal_cost == ref.optimal_cost


def test_fallback_metric_matches_compiled():
    for seed in range(10):
        inst = random_instance(seed, n_max=12, max_weight=9)
        g = inst.graph
        indptr, indices, weights = g.csr()
        out = _fallback.apsp_weighted(indptr, indices, weights, g.n)
        assert np.array_equal(out, inst.metric.dist)


def test_environment_switch_forces_fallback():
    env = dict(os.environ, MSRKIT_PURE_PYTHON="1")
    code = "import msrkit; print(msrkit.BACKEND)"
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert res.stdout.strip() == "python"


@needs_compiled
def test_compiled_is_default():
    env = {k: v for k, v in os.environ.items() if k != "MSRKIT_PURE_PYTHON"}
    res = subprocess.run([sys.executable, "-c", "import msrkit; print(msrkit.BACKEND)"],
                         env=env, capture_output=True, text=True)
    assert res.stdout.strip() == "cython"


def test_benchmark_runs():
    res = subprocess.run([sys.executable, str(ROOT / "benchmarks" / "bench_kernels.py"),
                          "--repeat", "1", "--small"], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
