import json
import math

import numpy as np
import pytest

import graspsynth as gs


def test_quaternion_roundtrip():
    rng = np.random.default_rng(0)
    for _ in range(100):
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        if q[3] < 0:
            q = -q
        back = gs.quat_exp(gs.quat_log(q.tolist()))
        assert np.allclose(back, q, atol=1e-12)


def test_pose_inverse_composes_to_identity():
    a = [0.1, -0.2, 0.3, 0.2, -0.1, 0.4, 0.8]
    ident = gs.pose_compose(a, gs.pose_inverse(a))
    assert np.allclose(ident, [0, 0, 0, 0, 0, 0, 1], atol=1e-12)
    x = gs.pose_transform(gs.pose_inverse(a), gs.pose_transform(a, [0.5, 0.5, 0.5]))
    assert np.allclose(x, [0.5, 0.5, 0.5], atol=1e-12)


def test_em_fit_and_conditioning():
    rng = np.random.default_rng(1)
    data = np.vstack([rng.normal(-2, 0.3, size=(300, 2)), rng.normal(2, 0.3, size=(300, 2))])
    model, trace = gs.em_fit(data, components=2, seed=3)
    assert model.components == 2
    assert all(b >= a - 1e-8 for a, b in zip(trace, trace[1:]))
    means = sorted(model.mean(j)[0] for j in range(2))
    assert means[0] == pytest.approx(-2, abs=0.1)
    assert means[1] == pytest.approx(2, abs=0.1)
    cond = model.condition([0], [1], [2.0])
    assert cond.dim == 1
    back = gs.GaussianMixture.from_json(model.to_json())
    assert back.log_likelihood([0.1, 0.2]) == model.log_likelihood([0.1, 0.2])
    assert model.sample(50, seed=4).shape == (50, 2)


def test_paired_t_test():
    r = gs.paired_t_test([2, 4, 6], [1, 2, 3])
    assert r["t"] == pytest.approx(2 * math.sqrt(3))
    assert r["df"] == 2
    assert r["p"] == pytest.approx(0.0742, abs=5e-5)
    with pytest.raises(gs.Error) as info:
        gs.paired_t_test([1, 2, 3], [0, 1, 2])
    assert info.value.kind == "degenerate-variance"


def test_estimate_frames_on_plane():
    xs, ys = np.meshgrid(np.linspace(-0.03, 0.03, 31), np.linspace(-0.03, 0.03, 31))
    pts = np.column_stack([xs.ravel(), ys.ravel(), np.zeros(xs.size)])
    out = gs.estimate_frames(pts, radius=0.006, viewpoint=[0, 0, 1])
    frames, features = out["frames"], out["features"]
    assert frames.shape == (pts.shape[0], 7)
    assert np.all(features < 1.0)
    # Normal (frame z axis) toward the viewpoint, i.e. +z.
    q = frames[:, 3:]
    nz = 1 - 2 * (q[:, 0] ** 2 + q[:, 1] ** 2)
    assert np.all(nz > 0.99)


def test_apply_noise():
    depth = np.full((200, 250), 0.8)
    assert np.array_equal(gs.apply_noise(depth, sigma_p=0, sigma_d=0), depth)
    noisy = gs.apply_noise(depth, sigma_p=1.0, sigma_d=0.001, seed=5)
    err = noisy[np.isfinite(noisy)] - 0.8
    assert err.std() == pytest.approx(0.001, rel=0.05)


def test_learn_and_synthesize_demo():
    bundle, warnings = gs.learn_demo()
    doc = json.loads(bundle)
    assert [c["link_id"] for c in doc["contacts"]] == ["L1", "L2"]
    assert any("palm" in w for w in warnings)
    config = "candidates = 40\ntop_m = 2\nanneal_iters = 10\nseed = 3\n"
    a = gs.synthesize_demo(bundle, config)
    b = gs.synthesize_demo(bundle, config + "jobs = 2\n")
    assert a == b
    grasps = json.loads(a)["grasps"]
    assert len(grasps) == 40
    assert grasps[0]["total"] is not None
    with pytest.raises(gs.Error):
        gs.synthesize_demo(bundle, "colour = red\n")


def test_default_config_lists_keys():
    text = gs.default_config()
    assert "candidates = 200" in text
    assert "method = gmm" in text
