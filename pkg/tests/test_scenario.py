import json

import numpy as np
import pytest

from projschwarz.errors import ParseError, ScenarioError
from projschwarz.scenario import load_scenario

BASE = {
    "dimension": 2,
    "lambda": 0.3,
    "maps": {
        "f": {"expr": ["x1 + x2^2", "x2"]},
        "m": {"moebius": [[1, 0, 0], [0, 1, 0], [0.2, 0.1, 1]]},
        "a": {"affine": {"matrix": [[2, 0], [0, 1]], "offset": [0, 1]}},
        "p": {"polynomial": {"exponents": [[1, 0], [0, 1], [0, 2]], "coeffs": [[1, 0, 1], [0, 1, 0]]}},
        "h": {"compose": ["m", "f"]},
        "g": {"inverse": "f"},
        "bare": ["x1", "x2 + x1^3"],
    },
    "connection": {"kind": "pi", "entries": {"1,2,2": "x1"}},
    "operator": {"a2": {"1,1": "1 + x1", "1,2": "0.5"}, "a1": {"2": "x2"}, "a0": "3"},
    "potential": "x1^2",
    "points": [[0.3, 0.7]],
    "seed": 4,
    "tol": 1e-9,
}


def scenario(**changes):
    data = json.loads(json.dumps(BASE))
    data.update(changes)
    return data


def test_load_all_map_kinds(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(BASE))
    sc = load_scenario(path)
    x = np.array([0.3, 0.7])
    assert np.allclose(sc.map("f")(x), [0.79, 0.7])
    assert np.allclose(sc.map("p")(x), sc.map("f")(x))
    assert np.allclose(sc.map("a")(x), [0.6, 1.7])
    assert np.allclose(sc.map("h")(x), sc.map("m")(sc.map("f")(x)))
    assert np.allclose(sc.map("g")(sc.map("f")(x)), x)
    assert np.allclose(sc.map("bare")(x), [0.3, 0.727])
    assert sc.lam == 0.3 and sc.seed == 4 and sc.tol == 1e-9
    assert np.allclose(sc.connection.value(x)[0, 1, 1], 0.3)
    v = sc.operator.value(x)
    assert np.allclose(v.a2, [[1.3, 0.5], [0.5, 0.0]])
    assert np.allclose(v.a1, [0.0, 0.7]) and v.a0 == 3.0


def test_json_text_and_flat_default():
    sc = load_scenario(json.dumps({"dimension": 3, "maps": {}}))
    assert sc.connection.flat and sc.operator is None and sc.points == []


def test_gamma_connection_is_projected():
    sc = load_scenario(scenario(connection={"kind": "gamma", "entries": {"1,1,1": "0.9"}}))
    v = sc.connection.value([0.0, 0.0])
    assert v[0, 0, 0] == pytest.approx(0.3)
    assert v[1, 0, 1] == pytest.approx(-0.3)


@pytest.mark.parametrize(
    "changes",
    [
        {"dimension": 0},
        {"maps": {"f": {"compose": ["f"]}}},
        {"maps": {"f": {"inverse": "missing"}}},
        {"maps": {"f": {"spline": []}}},
        {"maps": {"f": {"expr": ["x1"]}}},
        {"maps": {"f": {"moebius": [[1, 0], [0, 1]]}}},
        {"points": [[0.1, 0.2, 0.3]]},
        {"points": [[-5.0, 0.0]], "maps": {"m": {"moebius": [[1, 0, 0], [0, 1, 0], [0.2, 0.1, 1]]}}},
        {"connection": {"kind": "weird", "entries": {"1,1,2": "1"}}},
        {"connection": {"entries": {"4,1,1": "1"}}},
    ],
)
def test_invalid_scenarios(changes):
    with pytest.raises(ScenarioError):
        load_scenario(scenario(**changes))


def test_parse_errors_pass_through():
    with pytest.raises(ParseError):
        load_scenario(scenario(maps={"f": {"expr": ["x1 +", "x2"]}}))


def test_invalid_json():
    with pytest.raises(ScenarioError):
        load_scenario("{not json")


def test_unknown_map_lookup():
    with pytest.raises(ScenarioError):
        load_scenario(BASE).map("zzz")
