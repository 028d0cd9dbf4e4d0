import numpy as np
import pytest

from trendopt.data import make_blobs
from trendopt.errors import InvalidShape, ShapeMismatch
from trendopt.model import (Batch, backward, finite_diff, forward,
                            gradient_check, init_model, loss,
                            min_preactivation_magnitude)


def make_case(loss_kind, seed, n=12):
    rng = np.random.default_rng(seed)
    if loss_kind == "mse":
        model = init_model([5, 8, 10, 1], seed)
        batch = Batch(rng.normal(size=(n, 5)), rng.normal(size=n))
    else:
        blobs = make_blobs(n=n, k=3, dim=4, seed=seed)
        model = init_model([4, 8, 10, 3], seed)
        batch = Batch(blobs.features, blobs.targets)
    return model, batch


# --- construction -------------------------------------------------------------

def test_param_count_regression_architecture():
    model = init_model([13, 8, 10, 1], seed=0)
    assert model.param_count == 13 * 8 + 8 + 8 * 10 + 10 + 10 * 1 + 1  # = 213


def test_init_deterministic_and_biases_zero():
    a = init_model([4, 3, 2], seed=9)
    b = init_model([4, 3, 2], seed=9)
    for wa, wb in zip(a.weights, b.weights):
        assert np.array_equal(wa, wb)
    for bias in a.biases:
        assert np.array_equal(bias, np.zeros_like(bias))
    c = init_model([4, 3, 2], seed=10)
    assert not np.array_equal(a.weights[0], c.weights[0])


def test_init_glorot_limits():
    model = init_model([6, 4], seed=3)
    limit = np.sqrt(6.0 / 10.0)
    assert np.all(np.abs(model.weights[0]) <= limit)


def test_init_rejects_bad_shapes():
    with pytest.raises(InvalidShape):
        init_model([5], seed=0)
    with pytest.raises(InvalidShape):
        init_model([5, 0, 1], seed=0)


def test_params_roundtrip():
    model = init_model([3, 4, 2], seed=1)
    flat = model.get_params()
    other = init_model([3, 4, 2], seed=2)
    other.set_params(flat)
    assert np.array_equal(other.get_params(), flat)
    with pytest.raises(ShapeMismatch):
        model.set_params(flat[:-1])


# --- forward -------------------------------------------------------------------

def test_forward_zero_network_outputs_zero():
    model = init_model([3, 4, 2], seed=0)
    model.set_params(np.zeros(model.param_count))
    out = forward(model, np.ones((5, 3)))
    assert np.array_equal(out, np.zeros((5, 2)))


def test_forward_identity_single_weight():
    model = init_model([1, 1], seed=0)
    model.set_params(np.array([1.0, 0.0]))  # weight 1, bias 0
    assert forward(model, np.array([[3.0]]))[0, 0] == 3.0


def test_forward_hand_computed_221_network():
    # hidden weights [[1, -1], [0.5, 0.25]], biases [0.5, -1]; output [[2, -3]], bias 0.25
    # x = (1, 2): z = (1*1 + 2*(-1) + 0.5, 0.5 + 0.5 - 1) = (-0.5, 0)
    # relu -> (0, 0); out = 0.25
    model = init_model([2, 2, 1], seed=0)
    model.weights[0][:] = [[1.0, -1.0], [0.5, 0.25]]
    model.biases[0][:] = [0.5, -1.0]
    model.weights[1][:] = [[2.0, -3.0]]
    model.biases[1][:] = [0.25]
    assert forward(model, np.array([[1.0, 2.0]]))[0, 0] == pytest.approx(0.25, abs=1e-15)
    # x = (2, 1): z = (2 - 1 + 0.5, 1 + 0.25 - 1) = (1.5, 0.25); relu unchanged
    # out = 2*1.5 - 3*0.25 + 0.25 = 2.5
    assert forward(model, np.array([[2.0, 1.0]]))[0, 0] == pytest.approx(2.5, abs=1e-15)


def test_forward_shape_mismatch():
    model = init_model([3, 2], seed=0)
    with pytest.raises(ShapeMismatch):
        forward(model, np.ones((4, 5)))


# --- losses ---------------------------------------------------------------------

def test_mse_zero_when_equal():
    assert loss("mse", np.array([[1.0], [2.0]]), np.array([1.0, 2.0])) == 0.0


def test_mse_hand_value():
    assert loss("mse", np.array([[1.0], [2.0]]), np.array([0.0, 0.0])) == pytest.approx(2.5)


def test_cross_entropy_uniform_logits():
    for k in (2, 3, 10):
        logits = np.zeros((4, k))
        labels = np.array([0, 1 % k, (k - 1), 0])
        assert loss("cross_entropy", logits, labels) == pytest.approx(np.log(k), rel=1e-12)


def test_cross_entropy_stable_on_huge_logits():
    logits = np.array([[1000.0, -1000.0], [-1000.0, 1000.0]])
    value = loss("cross_entropy", logits, np.array([0, 1]))
    assert np.isfinite(value) and value == pytest.approx(0.0, abs=1e-12)


def test_loss_validation():
    with pytest.raises(ShapeMismatch):
        loss("mse", np.ones((3, 1)), np.ones(4))
    with pytest.raises(ShapeMismatch):
        loss("cross_entropy", np.ones((3, 2)), np.array([0.0, 1.0, 0.0]))  # not ints
    with pytest.raises(ShapeMismatch):
        loss("cross_entropy", np.ones((3, 2)), np.array([0, 2, 0]))  # index out of range
    with pytest.raises(ValueError):
        loss("huber", np.ones((3, 1)), np.ones(3))


def test_loss_nonnegative():
    rng = np.random.default_rng(0)
    assert loss("mse", rng.normal(size=(8, 1)), rng.normal(size=8)) >= 0.0
    assert loss("cross_entropy", rng.normal(size=(8, 3)),
                rng.integers(0, 3, size=8)) >= 0.0


# --- backward -------------------------------------------------------------------

def test_backward_zero_network_output_bias_gradient():
    # all-zero weights: prediction 0, hidden relu(0) with subgradient 0, so the
    # only nonzero gradient is the output bias: d mean (0 - y)^2 / db = -2 mean(y)
    model = init_model([3, 4, 1], seed=0)
    model.set_params(np.zeros(model.param_count))
    y = np.array([1.0, 3.0, -2.0, 4.0])
    batch = Batch(np.random.default_rng(1).normal(size=(4, 3)), y)
    _, grads = backward(model, batch, "mse")
    assert grads.biases[-1][0] == pytest.approx(-2.0 * y.mean(), rel=1e-14)
    assert np.array_equal(grads.weights[0], np.zeros_like(grads.weights[0]))
    assert np.array_equal(grads.biases[0], np.zeros_like(grads.biases[0]))


def test_backward_loss_value_matches_loss():
    model, batch = make_case("mse", 5)
    value, _ = backward(model, batch, "mse")
    assert value == pytest.approx(loss("mse", forward(model, batch), batch.targets),
                                  rel=1e-15)


def test_backward_batch_duplication_invariance():
    model, batch = make_case("mse", 6)
    _, g1 = backward(model, batch, "mse")
    doubled = Batch(np.vstack([batch.inputs, batch.inputs]),
                    np.concatenate([batch.targets, batch.targets]))
    _, g2 = backward(model, doubled, "mse")
    assert g1.flat() == pytest.approx(g2.flat(), rel=1e-12, abs=1e-15)


def test_cross_entropy_logit_gradients_sum_to_zero():
    # softmax rows sum to 1, so per-sample logit gradients sum to 0; the
    # output-bias gradient is their batch sum and must vanish classwise
    model, batch = make_case("cross_entropy", 7)
    _, grads = backward(model, batch, "cross_entropy")
    assert abs(grads.biases[-1].sum()) <= 1e-12


@pytest.mark.parametrize("loss_kind", ["mse", "cross_entropy"])
def test_backward_matches_finite_differences(loss_kind):
    for seed in (11, 12, 13, 14, 15):
        model, batch = make_case(loss_kind, seed)
        if min_preactivation_magnitude(model, batch) < 1e-4:
            continue  # relu kink within the finite-difference step
        max_rel, max_abs = gradient_check(model, batch, loss_kind, h=1e-6)
        assert max_rel <= 1e-5
        assert max_abs <= 1e-8


# --- finite differences ----------------------------------------------------------

def test_finite_diff_known_quadratic():
    # linear 1->1 model, x=1, target 0: L = (w + b)^2; dL/dw at w=3, b=0 is 6
    model = init_model([1, 1], seed=0)
    model.set_params(np.array([3.0, 0.0]))
    batch = Batch(np.array([[1.0]]), np.array([0.0]))
    grads = finite_diff(model, batch, "mse", h=1e-6)
    assert grads.weights[0][0, 0] == pytest.approx(6.0, abs=1e-6)


def test_finite_diff_error_shrinks_quadratically():
    # smooth non-quadratic loss (cross entropy on a linear model, no relu kinks)
    rng = np.random.default_rng(21)
    model = init_model([3, 4], seed=21)
    labels = rng.integers(0, 4, size=10)
    batch = Batch(rng.normal(size=(10, 3)), labels)
    _, analytic = backward(model, batch, "cross_entropy")
    a = analytic.flat()

    def fd_err(h):
        return np.max(np.abs(finite_diff(model, batch, "cross_entropy", h).flat() - a))

    e1, e2 = fd_err(1e-3), fd_err(5e-4)
    order = np.log2(e1 / e2)
    assert order >= 1.8


def test_finite_diff_rejects_nonpositive_h():
    model, batch = make_case("mse", 30)
    with pytest.raises(ValueError):
        finite_diff(model, batch, "mse", h=0.0)
