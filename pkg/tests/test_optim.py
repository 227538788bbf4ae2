"""AdamW update semantics."""

import numpy as np
import pytest

from flowsr.numerics import AdamWState, ShapeError, Tensor, adamw_step


def hand_adamw_single_step(p, g, lr, b1, b2, eps, wd):
    """The documented update executed literally, outside the optimizer."""
    p = p * (1.0 - lr * wd)
    m = (1 - b1) * g
    v = (1 - b2) * g * g
    mhat = m / (1 - b1)
    vhat = v / (1 - b2)
    return p - lr * mhat / (np.sqrt(vhat) + eps)


def test_zero_grad_zero_decay_is_identity():
    p = Tensor(np.array([1.0, -2.0, 3.0]), requires_grad=True)
    state = AdamWState(lr=0.1)
    adamw_step({"p": p}, {"p": np.zeros(3)}, state)
    np.testing.assert_array_equal(p.data, [1.0, -2.0, 3.0])
    assert state.step == 1


def test_single_scalar_step_matches_hand_update():
    lr, b1, b2, eps, wd = 0.1, 0.9, 0.999, 1e-8, 0.01
    p0, g = 1.0, 0.5
    expected = hand_adamw_single_step(p0, g, lr, b1, b2, eps, wd)
    p = Tensor(np.array([p0]), requires_grad=True)
    state = AdamWState(lr=lr, beta1=b1, beta2=b2, epsilon=eps, weight_decay=wd)
    adamw_step({"p": p}, {"p": np.array([g])}, state)
    assert p.data[0] == pytest.approx(expected, abs=1e-15)


def test_decoupled_decay_shrinks_parameter():
    p = Tensor(np.array([2.0]), requires_grad=True)
    state = AdamWState(lr=0.1, weight_decay=0.5)
    adamw_step({"p": p}, {"p": np.zeros(1)}, state)
    assert abs(p.data[0]) < 2.0
    assert p.data[0] == pytest.approx(2.0 * (1 - 0.1 * 0.5))


def test_step_counter_increments_and_bias_correction_applies():
    p = Tensor(np.array([0.0]), requires_grad=True)
    state = AdamWState(lr=1e-2)
    for expected_step in (1, 2, 3):
        adamw_step({"p": p}, {"p": np.array([1.0])}, state)
        assert state.step == expected_step
    # With constant unit gradient every bias-corrected step is ~ -lr.
    assert p.data[0] == pytest.approx(-3e-2, rel=1e-6)


def test_bitwise_deterministic():
    rng = np.random.default_rng(0)
    init = rng.normal(size=(4, 3))
    grad = rng.normal(size=(4, 3))

    outs = []
    for _ in range(2):
        p = Tensor(init.copy(), requires_grad=True)
        state = AdamWState(lr=3e-4, weight_decay=0.01)
        for _ in range(5):
            adamw_step({"p": p}, {"p": grad}, state)
        outs.append(p.data.copy())
    assert outs[0].tobytes() == outs[1].tobytes()


def test_shape_mismatch_rejected():
    p = Tensor(np.zeros((2, 2)), requires_grad=True)
    state = AdamWState(lr=0.1)
    with pytest.raises(ShapeError):
        adamw_step({"p": p}, {"p": np.zeros(3)}, state)


def test_missing_grad_rejected():
    p = Tensor(np.zeros(2), requires_grad=True)
    with pytest.raises(KeyError):
        adamw_step({"p": p}, {}, AdamWState(lr=0.1))


def test_nonpositive_lr_rejected():
    with pytest.raises(ValueError):
        AdamWState(lr=0.0)


def test_moment_shapes_match_params():
    p = Tensor(np.zeros((3, 5)), requires_grad=True)
    state = AdamWState(lr=0.1)
    adamw_step({"p": p}, {"p": np.ones((3, 5))}, state)
    assert state.m["p"].shape == (3, 5)
    assert state.v["p"].shape == (3, 5)
