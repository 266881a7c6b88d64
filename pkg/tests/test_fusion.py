import numpy as np
import pytest

from tomfn.errors import ShapeError
from tomfn.fusion import LMFLayer, fusion_full_tensor, lmf_forward, tfn_forward


def make_layer(rng, rank, d_h, dims):
    dv, da, dt = dims
    return LMFLayer(
        fusion_rank=rank,
        out_dim=d_h,
        factors={
            "v": [rng.normal(size=(d_h, dv + 1)) for _ in range(rank)],
            "a": [rng.normal(size=(d_h, da + 1)) for _ in range(rank)],
            "t": [rng.normal(size=(d_h, dt + 1)) for _ in range(rank)],
        },
    )


def ones_layer():
    return LMFLayer(
        fusion_rank=1,
        out_dim=1,
        factors={m: [np.ones((1, 2))] for m in ("v", "a", "t")},
    )


def test_bias_only():
    h = lmf_forward(ones_layer(), np.zeros(1), np.zeros(1), np.zeros(1))
    assert np.allclose(h, [1.0], atol=0)


def test_single_active_modality():
    h = lmf_forward(ones_layer(), np.ones(1), np.zeros(1), np.zeros(1))
    assert np.allclose(h, [2.0], atol=0)


def test_input_length_checked():
    with pytest.raises(ShapeError):
        lmf_forward(ones_layer(), np.zeros(2), np.zeros(1), np.zeros(1))


def test_full_tensor_all_ones():
    t = fusion_full_tensor(ones_layer())
    assert np.array_equal(t, np.ones((1, 2, 2, 2)))


def test_full_tensor_zero_rank_term():
    rng = np.random.default_rng(0)
    base = make_layer(rng, 1, 3, (2, 2, 2))
    padded = LMFLayer(
        fusion_rank=2,
        out_dim=3,
        factors={m: [base.factors[m][0], np.zeros((3, 3))] for m in ("v", "a", "t")},
    )
    assert np.allclose(fusion_full_tensor(padded), fusion_full_tensor(base), atol=0)


def test_full_tensor_against_quadruple_loop():
    rng = np.random.default_rng(1)
    layer = make_layer(rng, 2, 3, (2, 2, 2))
    t = fusion_full_tensor(layer)
    for j in range(3):
        for p in range(3):
            for q in range(3):
                for s in range(3):
                    want = sum(
                        layer.factors["v"][i][j, p]
                        * layer.factors["a"][i][j, q]
                        * layer.factors["t"][i][j, s]
                        for i in range(2)
                    )
                    assert abs(t[j, p, q, s] - want) < 1e-12


def test_tfn_zero_tensor():
    t = np.zeros((3, 2, 2, 2))
    assert np.array_equal(tfn_forward(t, np.ones(1), np.ones(1), np.ones(1)), np.zeros(3))


def test_tfn_indicator():
    t = np.zeros((2, 3, 3, 3))
    t[1, 2, 0, 1] = 1.0
    zv, za, zt = np.array([4.0, 5.0]), np.array([6.0, 7.0]), np.array([8.0, 9.0])
    h = tfn_forward(t, zv, za, zt)
    # index 2 of augmented z_v is the appended 1; index 0 of z'_a is za[0]; etc.
    assert h[0] == 0.0
    assert abs(h[1] - 1.0 * 6.0 * 9.0) < 1e-12


def test_cp_equivalence_randomized():
    rng = np.random.default_rng(2)
    for _ in range(100):
        rank = int(rng.integers(1, 5))
        d_h = int(rng.integers(1, 5))
        dims = tuple(int(rng.integers(1, 5)) for _ in range(3))
        layer = make_layer(rng, rank, d_h, dims)
        zs = [rng.normal(size=d) for d in dims]
        direct = lmf_forward(layer, *zs)
        via_tensor = tfn_forward(fusion_full_tensor(layer), *zs)
        assert np.max(np.abs(direct - via_tensor)) < 1e-10


def test_affine_in_each_modality():
    # Fixing two modalities, h is affine in the third: midpoint maps to midpoint.
    rng = np.random.default_rng(3)
    layer = make_layer(rng, 3, 4, (3, 2, 2))
    za, zt = rng.normal(size=2), rng.normal(size=2)
    x0, x1 = rng.normal(size=3), rng.normal(size=3)
    mid = 0.5 * (x0 + x1)
    h_mid = lmf_forward(layer, mid, za, zt)
    h_avg = 0.5 * (lmf_forward(layer, x0, za, zt) + lmf_forward(layer, x1, za, zt))
    assert np.allclose(h_mid, h_avg, atol=1e-12)


def test_rank_terms_additive():
    rng = np.random.default_rng(4)
    layer = make_layer(rng, 2, 3, (2, 2, 2))
    zeroed = LMFLayer(
        fusion_rank=2,
        out_dim=3,
        factors={
            m: [layer.factors[m][0], np.zeros((3, 3))] if m == "v" else layer.factors[m]
            for m in ("v", "a", "t")
        },
    )
    solo = LMFLayer(
        fusion_rank=1,
        out_dim=3,
        factors={m: [layer.factors[m][0]] for m in ("v", "a", "t")},
    )
    zs = [rng.normal(size=2) for _ in range(3)]
    assert np.allclose(lmf_forward(zeroed, *zs), lmf_forward(solo, *zs), atol=1e-12)
