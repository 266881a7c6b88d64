import numpy as np
import pytest

from tomfn import tensor
from tomfn.errors import ShapeError


def test_reshape_preserves_flat_order():
    t = tensor.as_tensor([0, 1, 2, 3, 4, 5])
    r = tensor.reshape(t, [2, 3])
    assert r.shape == (2, 3)
    assert np.array_equal(r.ravel(), t)


def test_reshape_roundtrip():
    t = tensor.as_tensor(np.arange(6.0), shape=[2, 3])
    back = tensor.reshape(tensor.reshape(t, [3, 2]), [6])
    assert np.array_equal(back, np.arange(6.0))


def test_reshape_count_mismatch():
    with pytest.raises(ShapeError):
        tensor.reshape(tensor.as_tensor([1.0, 2, 3, 4]), [3])


def test_matvec_identity():
    x = tensor.as_tensor([1.5, -2.0, 0.25])
    assert np.array_equal(tensor.matvec(np.eye(3), x), x)


def test_matvec_hand_example():
    w = tensor.as_tensor([[1, 2], [3, 4]])
    y = tensor.matvec(w, tensor.as_tensor([1, 1]))
    assert np.array_equal(y, [3.0, 7.0])


def test_matvec_against_double_loop_oracle():
    rng = np.random.default_rng(7)
    w = rng.normal(size=(5, 4))
    x = rng.normal(size=4)
    # Independent oracle: explicit double loop.
    expect = np.zeros(5)
    for i in range(5):
        for j in range(4):
            expect[i] += w[i, j] * x[j]
    assert np.allclose(tensor.matvec(w, x), expect, rtol=0, atol=1e-14)


def test_matvec_dim_mismatch():
    with pytest.raises(ShapeError):
        tensor.matvec(np.eye(3), np.zeros(4))


def test_matvec_identity_random_sizes():
    rng = np.random.default_rng(1)
    for n in range(1, 17):
        x = rng.normal(size=n)
        assert np.array_equal(tensor.matvec(np.eye(n), x), x)


def test_matvec_distributes():
    rng = np.random.default_rng(2)
    w = rng.normal(size=(6, 5))
    x, y = rng.normal(size=5), rng.normal(size=5)
    lhs = tensor.matvec(w, x + y)
    rhs = tensor.matvec(w, x) + tensor.matvec(w, y)
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_elementwise_mul():
    a = tensor.as_tensor([1, 2, 3])
    assert np.array_equal(tensor.elementwise_mul(a, np.ones(3)), a)
    assert np.array_equal(tensor.elementwise_mul(a, np.zeros(3)), np.zeros(3))
    assert np.array_equal(
        tensor.elementwise_mul(a, tensor.as_tensor([4, 5, 6])), [4.0, 10.0, 18.0]
    )
    with pytest.raises(ShapeError):
        tensor.elementwise_mul(a, np.ones(4))


def test_elementwise_mul_commutes():
    rng = np.random.default_rng(3)
    a, b = rng.normal(size=(2, 9))
    assert np.array_equal(tensor.elementwise_mul(a, b), tensor.elementwise_mul(b, a))


def test_outer3():
    ones = np.ones(2)
    assert np.array_equal(tensor.outer3(ones, ones, ones), np.ones((2, 2, 2)))
    t = tensor.outer3(tensor.as_tensor([1, 0]), np.ones(3), np.ones(4))
    assert np.all(t[1] == 0)
    t = tensor.outer3(
        tensor.as_tensor([1, 2]), tensor.as_tensor([3]), tensor.as_tensor([4, 5])
    )
    assert np.array_equal(t, [[[12, 15]], [[24, 30]]])


def test_softmax_values():
    assert np.allclose(tensor.softmax(np.zeros(2)), [0.5, 0.5], atol=1e-15)
    p = tensor.softmax(tensor.as_tensor([0.0, np.log(3.0)]))
    assert np.allclose(p, [0.25, 0.75], atol=1e-14)


def test_softmax_shift_invariance_and_normalization():
    rng = np.random.default_rng(4)
    for _ in range(20):
        v = rng.normal(size=rng.integers(1, 12))
        p = tensor.softmax(v)
        assert abs(p.sum() - 1.0) < 1e-12
        assert np.all(p > 0)
        assert np.allclose(p, tensor.softmax(v + 1000.0), atol=1e-12)


def test_relu():
    assert np.array_equal(tensor.relu(tensor.as_tensor([-1, 0, 2])), [0, 0, 2])
    v = tensor.as_tensor([0.5, 3.0])
    assert np.array_equal(tensor.relu(v), v)
    w = tensor.as_tensor([-2.0, 1.0, -0.5])
    assert np.array_equal(tensor.relu(tensor.relu(w)), tensor.relu(w))


def test_json_roundtrip():
    rng = np.random.default_rng(5)
    t = rng.normal(size=(2, 3, 4))
    obj = tensor.to_json_obj(t)
    assert obj["shape"] == [2, 3, 4]
    back = tensor.from_json_obj(obj)
    assert np.array_equal(back, t)


def test_json_rejects_nonfinite():
    with pytest.raises(ShapeError):
        tensor.from_json_obj({"shape": [2], "data": [1.0, float("nan")]})
