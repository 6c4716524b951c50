import math

import pytest

import helly


def test_h_integral():
    assert helly.h_integral(1) == pytest.approx(math.pi / 2, abs=1e-15)
    assert helly.h_integral(2) == pytest.approx(2 * math.pi / 3, rel=1e-14)


def test_sparsify_square():
    pts = [[1.5, 0.0], [0.0, 1.5], [-1.5, 0.0], [0.0, -1.5], [1.0, 1.0]]
    idx, r = helly.sparsify(pts)
    assert len(idx) <= 4
    assert r >= helly.steinitz_threshold(2)


def test_generate_is_deterministic():
    a = helly.generate_instance("func-helly", 1, seed=3)
    b = helly.generate_instance("func-helly", 1, seed=3)
    assert a == b
    assert len(a["functions"]) == 5


def test_func_select_against_oracle():
    inst = helly.generate_instance("func-helly", 1, seed=1, n=6)
    cert = helly.func_select(inst)
    assert len(cert["sigma"]) <= 3
    assert cert["measured_ratio"] >= 1 - 1e-6
    assert math.log(cert["measured_ratio"]) <= cert["log_ratio_bound"]
    best = helly.oracle("subset-ratio", inst)
    assert best["ratio"] <= cert["measured_ratio"] + 1e-9


def test_diam_select_names_injected_violation():
    inst = helly.generate_instance("diameter-colorful", 2, seed=5, inject=True)
    res = helly.diam_select(inst)
    assert res["outcome"] == "hypothesis-violation"
    assert res["violating_pick"][inst["injected"]["class"]] == inst["injected"]["member"]


def test_oracle_refusal():
    inst = helly.generate_instance("func-helly", 1, seed=1, n=13)
    with pytest.raises(Exception, match="refuses"):
        helly.oracle("subset-ratio", inst)


def test_experiment_csv():
    csv, passed = helly.run_experiment({"kind": "steinitz", "d": 2, "trials": 5, "n": 8})
    lines = csv.strip().splitlines()
    assert len(lines) == 6
    assert passed == 5
    with pytest.raises(Exception):
        helly.run_experiment({})
