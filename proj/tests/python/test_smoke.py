import json
import math
import os
import pathlib

import numpy as np
import pytest

import matron_match as mm

ROOT = pathlib.Path(os.environ.get("MATRON_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
GOLDEN = ROOT / "docs" / "golden"


def load(name):
    return json.loads((GOLDEN / name).read_text())


def test_logit_value_single_pair():
    # one type on each side, zero surplus: n log(1 + e^0)
    assert mm.logit_value(np.zeros((1, 1)), np.array([1.0])) == pytest.approx(math.log(2.0), abs=1e-12)


def test_logit_demand_row_balance():
    rng = np.random.default_rng(3)
    alpha = rng.normal(size=(3, 4))
    n = np.array([1.0, 2.0, 0.5])
    cap = np.full((3, 4), 0.2)
    mu, mu0 = mm.logit_demand(alpha, cap, n)
    assert np.all(mu <= cap + 1e-12)
    assert np.allclose(mu0 + mu.sum(axis=1), n, atol=1e-10)
    free = mu < cap - 1e-9
    expected = (mu0[:, None] * np.exp(alpha))[free]
    assert np.allclose(mu[free], expected, atol=1e-10)


def test_lcp_diagonal():
    r, tau = mm.lcp_solve(np.eye(2), np.array([-1.0, 2.0]))
    assert np.allclose(tau, [1.0, 0.0])
    assert np.allclose(r, [0.0, 2.0])


def test_solve_matches_golden_result():
    result, trace = mm.solve(load("instance.json"))
    assert result == load("result.json")
    lines = (GOLDEN / "trace.jsonl").read_text().splitlines()
    assert trace == [json.loads(l) for l in lines]
    assert mm.verify(load("instance.json"), result)["pass"] is True


def test_check_order_matches_golden_report():
    assert mm.check_order(load("check_spec.json")) == load("report.json")


def test_conjugate_matches_golden():
    assert mm.conjugate(load("grid.json")) == load("conjugate.json")


def test_errors_are_typed():
    with pytest.raises(mm.SchemaError):
        mm.check_order({"check": "no_such_check"})
    with pytest.raises(mm.SchemaError):
        mm.solve("{not json")
    assert issubclass(mm.ShapeError, mm.Error)
    assert issubclass(mm.Error, RuntimeError)
    with pytest.raises(mm.Error):
        mm.logit_value(np.zeros((2, 2)), np.array([1.0]))
