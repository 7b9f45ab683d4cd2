import json
import math
from pathlib import Path

import numpy as np
import pytest

import nodim

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def test_gamma_exact():
    assert nodim.gamma_coefficient(4, 2)[0] == "5/8"
    assert nodim.gamma_coefficient(2, 1) == ("1/2", 0.5)


def test_norm_spec_defaults():
    s = nodim.NormSpec(1.5)
    assert s.type_p == 1.5 and s.assumed_type_constant
    assert not nodim.NormSpec().assumed_type_constant


def test_dist_to_hull_segment():
    c = nodim.dist_to_hull(nodim.NormSpec(), np.array([1.0, 3.0]), np.array([[0.0, 0.0], [2.0, 0.0]]))
    assert abs(c["upper"] - 3.0) < 1e-6
    assert c["lower"] <= c["upper"]


def test_tverberg_within_bound():
    rng = np.random.default_rng(0)
    classes = [rng.normal(size=(4, 10)) for _ in range(3)]
    t = nodim.colorful_tverberg(nodim.NormSpec(), classes, seed=2)
    assert len(t["parts"]) == 4
    assert all(len(p) == 3 for p in t["parts"])
    assert t["max_certified_distance"] <= t["bound"]


def test_split_and_selection():
    rng = np.random.default_rng(1)
    pts = rng.normal(size=(8, 4))
    s = nodim.balanced_split(nodim.NormSpec(), pts)
    assert sorted(s["part0"] + s["part1"]) == list(range(8))
    sel = nodim.selection(nodim.NormSpec(), pts, 2)
    assert sel["certified_tuples"] >= math.ceil(sel["required"])


def test_input_errors_map_to_exceptions():
    with pytest.raises(nodim.InputError):
        nodim.balanced_split(nodim.NormSpec(), np.array([[1.0, 1.0]]))


def test_run_matches_cli_report_shape():
    rep = nodim.run("tverberg", input=str(FIXTURES / "k1.json"))
    assert rep["bound_check"]["pass"]
    again = nodim.run("tverberg", input=str(FIXTURES / "k1.json"))
    rep.pop("wall_clock_seconds"), again.pop("wall_clock_seconds")
    assert json.dumps(rep, sort_keys=True) == json.dumps(again, sort_keys=True)
