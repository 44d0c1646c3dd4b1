import json
import math

import pytest

import covpath


def test_wrap_angle():
    assert covpath.wrap_angle(0.0) == 0.0
    assert covpath.wrap_angle(3.0 * math.pi) == pytest.approx(math.pi)
    assert covpath.wrap_angle(-0.25) == pytest.approx(-0.25)


def test_step_dubins_half_turn():
    pose = covpath.Pose(0.0, 0.0, 0.0)
    out = covpath.step_dubins(pose, omega=1.0, speed=1.0, dt=math.pi)
    assert out.x == pytest.approx(0.0, abs=1e-12)
    assert out.y == pytest.approx(2.0)
    assert out.heading == pytest.approx(math.pi)


def test_sensing_is_gaussian():
    f = covpath.sensing_performance([0.0, 0.0], [0.5, 0.0], 0.5)
    assert f == pytest.approx(math.exp(-0.5))


def test_circle_primitives():
    pose = covpath.Pose(0.0, 0.0, 0.0)
    c = covpath.circle_center(1.0, pose, covpath.Direction.RIGHT)
    assert c[0] == pytest.approx(0.0)
    assert c[1] == pytest.approx(-1.0)
    psi = covpath.circle_arc_angle(c, 0.0, [0.0, -3.0], covpath.Direction.RIGHT)
    assert psi == pytest.approx(math.pi)
    score = covpath.circle_path_score(
        1.0, pose, covpath.Direction.RIGHT, [0.0, 0.0], 0.5
    )
    assert score == pytest.approx(2.0 * math.pi)


def test_ellipse_primitives():
    pose = covpath.Pose(0.0, 0.0, 0.0)
    unit = [1.0, 0.0, 1.0]
    ce = covpath.ellipse_center(unit, pose, covpath.Direction.LEFT)
    assert ce[1] == pytest.approx(1.0)
    assert covpath.sampson_distance(ce, unit, [0.0, 0.0]) == pytest.approx(
        0.0, abs=1e-12
    )
    # circle of radius 0.5 has curvature 2 everywhere
    k = covpath.ellipse_curvature([0.5, 0.0], [0.0, 0.0], [2.0, 0.0, 2.0])
    assert k == pytest.approx(2.0)


def test_shape_barriers_frozen_values():
    b2, b3, b4, b5 = covpath.shape_barriers([1.0, 0.2, 0.7], 0.5, 1.2)
    assert b2 == pytest.approx(1.0)
    assert b3 == pytest.approx(1.26)
    assert b4 == pytest.approx(1.0 - 1.0 / 1.2)
    assert b5 == pytest.approx(0.7 - 1.0 / 1.2 - 0.24)
    with pytest.raises(covpath.DegenerateShape):
        covpath.shape_barriers([2.0, 0.5, 1.0], 0.5, 1.2)


def test_qp_bound():
    out = covpath.solve_qp([1.0], [-2.0], [[1.0]], [2.0])
    assert out["optimal"]
    assert out["x"][0] == pytest.approx(2.0)
    bad = covpath.solve_qp([1.0], [0.0], [[1.0], [-1.0]], [1.0, 0.0])
    assert not bad["optimal"]


def test_pool_barrier_sign():
    inside = covpath.pool_barrier([0.0, 0.0], [2.5, 0.9], 0.05, [0.0, 0.0])
    outside = covpath.pool_barrier([0.0, 0.0], [2.5, 0.9], 0.05, [2.6, 0.0])
    assert inside == pytest.approx(1.0)
    assert outside < 0.0


def test_config_validation():
    cfg = json.loads(covpath.default_config_json())
    problems = covpath.validate_config(json.dumps(cfg))
    assert problems  # the default has no initial poses
    cfg["fleet"]["initial_poses"] = [
        {"position_m": [-1.0, 0.0], "heading_rad": 0.0}
    ]
    assert covpath.validate_config(json.dumps(cfg)) == []


def test_run_scenario(tmp_path):
    cfg = json.loads(covpath.default_config_json())
    cfg["mode"] = "circle"
    cfg["duration_s"] = 1.0
    cfg["environment"]["origin_m"] = [-1.0, -1.0]
    cfg["environment"]["extent_m"] = [2.0, 2.0]
    cfg["environment"]["cell_size_m"] = 0.2
    cfg["fleet"]["initial_poses"] = [
        {"position_m": [0.0, 0.0], "heading_rad": 0.0}
    ]
    out = tmp_path / "run"
    final = covpath.run_scenario(json.dumps(cfg), str(out))
    assert final > 0.0
    for name in ["agents.csv", "barriers.csv", "phi_sum.csv", "field_0000.csv"]:
        assert (out / name).exists(), name
