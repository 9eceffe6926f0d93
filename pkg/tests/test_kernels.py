import numpy as np

from frachartree import kernels
from frachartree.kernels import _quad_sums_numpy, quad_sums


def _random_problem(seed, n_modes=400, n_act=37, n_sig=120):
    rng = np.random.default_rng(seed)
    p1 = rng.standard_normal(n_modes)
    p2 = rng.standard_normal(n_modes)
    p3 = rng.standard_normal(n_modes)
    weights = rng.random(n_modes)
    zero_i = int(rng.integers(0, n_modes))
    weights[zero_i] = 0.0
    sig = np.sort(rng.choice(n_modes, size=n_sig, replace=False)).astype(np.int64)
    act = rng.choice(n_modes, size=n_act, replace=False).astype(np.int64)
    return p1, p2, p3, weights, sig, act, zero_i


def _direct(p1, p2, p3, weights, sig, act, zero_i):
    # reference triple loop written independently of the kernel
    out = np.zeros(len(act))
    for a, ia in enumerate(act):
        total = 0.0
        for js in sig:
            if js == ia or js == zero_i:
                continue
            dz = np.hypot(
                np.hypot(p1[ia] - p1[js], p2[ia] - p2[js]), p3[ia] - p3[js]
            )
            if dz > 0.0:
                total += weights[js] / dz
        out[a] = total
    return out


def _numpy_lane(p1, p2, p3, w, sig, act, zero_i):
    out = np.empty(act.size, dtype=np.float64)
    _quad_sums_numpy(p1, p2, p3, w, sig, act, zero_i, out)
    return out


def test_both_lanes_match_direct_loop():
    p1, p2, p3, w, sig, act, zero_i = _random_problem(11)
    want = _direct(p1, p2, p3, w, sig, act, zero_i)
    got = quad_sums(p1, p2, p3, w, sig, act, zero_i)
    got_np = _numpy_lane(p1, p2, p3, w, sig, act, zero_i)
    assert np.allclose(got, want, rtol=1e-12, atol=0.0)
    assert np.allclose(got_np, want, rtol=1e-12, atol=0.0)


def test_lanes_agree_on_larger_problem():
    p1, p2, p3, w, sig, act, zero_i = _random_problem(7, n_modes=5000, n_act=64, n_sig=2500)
    a = quad_sums(p1, p2, p3, w, sig, act, zero_i)
    b = _numpy_lane(p1, p2, p3, w, sig, act, zero_i)
    # summation order differs between lanes, so equality is only to round-off
    assert np.allclose(a, b, rtol=1e-13, atol=0.0)


def test_self_interaction_excluded():
    # one source, one target at the same index: the sum must ignore it
    p = np.array([0.0, 1.0, 2.0])
    w = np.array([0.0, 5.0, 7.0])
    sig = np.array([1, 2], dtype=np.int64)
    act = np.array([1], dtype=np.int64)
    got = quad_sums(p, p, p, w, sig, act, zero_i=0)
    assert abs(got[0] - 7.0 / np.sqrt(3.0)) < 1e-14


def test_zero_mode_excluded():
    p = np.array([0.0, 1.0, 3.0])
    w = np.array([2.0, 5.0, 7.0])
    sig = np.array([0, 1, 2], dtype=np.int64)
    act = np.array([1], dtype=np.int64)
    got = quad_sums(p, p, p, w, sig, act, zero_i=0)
    # index 0 is the zero mode and index 1 is the target itself, so only
    # index 2 contributes, at distance sqrt(3) * |dp| in three equal coords
    want = 7.0 / (abs(3.0 - 1.0) * np.sqrt(3.0))
    assert abs(got[0] - want) < 1e-14


def test_lane_flag_is_respected(monkeypatch):
    p1, p2, p3, w, sig, act, zero_i = _random_problem(23)
    with_numba = quad_sums(p1, p2, p3, w, sig, act, zero_i)
    monkeypatch.setattr(kernels, "USE_NUMBA", False)
    without = quad_sums(p1, p2, p3, w, sig, act, zero_i)
    assert np.allclose(with_numba, without, rtol=1e-13, atol=0.0)
