"""Low-rank multimodal fusion and the full-tensor oracle it compresses.

The fused representation is a CP-style sum over `fusion_rank` terms: each
term projects every (bias-augmented) modality embedding and multiplies
the three projections elementwise.  `fusion_full_tensor` materializes the
equivalent 4-way weight tensor so the cheap path can be checked against
the explicit contraction (`tfn_forward`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tt as tt_mod
from .errors import ShapeError

MODALITIES = ("v", "a", "t")


@dataclass
class LMFLayer:
    """CP factor stacks, one list of rank-many (d_h, d_m + 1) matrices per modality."""

    fusion_rank: int
    out_dim: int
    factors: dict[str, list]  # values are np.ndarray or TTMatrix, len == fusion_rank

    def __post_init__(self):
        if self.fusion_rank < 1:
            raise ShapeError("fusion rank must be >= 1")
        if set(self.factors) != set(MODALITIES):
            raise ShapeError(f"factors must cover exactly modalities {MODALITIES}")
        for m, mats in self.factors.items():
            if len(mats) != self.fusion_rank:
                raise ShapeError(f"modality '{m}' needs {self.fusion_rank} factors")
            shapes = {self._dense(w).shape for w in mats}
            if len(shapes) != 1:
                raise ShapeError(f"modality '{m}' factors disagree on shape: {shapes}")
            (dh, _din) = shapes.pop()
            if dh != self.out_dim:
                raise ShapeError(f"modality '{m}' factor rows {dh} != out_dim {self.out_dim}")

    @staticmethod
    def _dense(w) -> np.ndarray:
        return tt_mod.tt_to_dense(w) if isinstance(w, tt_mod.TTMatrix) else w

    def input_dim(self, modality: str) -> int:
        return self._dense(self.factors[modality][0]).shape[1] - 1


def _project(w, z1: np.ndarray) -> np.ndarray:
    if isinstance(w, tt_mod.TTMatrix):
        return tt_mod.tt_matvec(w, z1)
    return w @ z1


def append_one(z: np.ndarray) -> np.ndarray:
    """Bias-augment an embedding: z -> [z, 1]."""
    return np.concatenate([z, [1.0]])


def lmf_forward(layer: LMFLayer, z_v: np.ndarray, z_a: np.ndarray, z_t: np.ndarray) -> np.ndarray:
    """h = sum_i (W_v^i z'_v) * (W_a^i z'_a) * (W_t^i z'_t), all elementwise."""
    inputs = {"v": z_v, "a": z_a, "t": z_t}
    for m, z in inputs.items():
        want = layer.input_dim(m)
        if z.shape != (want,):
            raise ShapeError(f"modality '{m}' input has shape {z.shape}, expected ({want},)")
    augmented = {m: append_one(z) for m, z in inputs.items()}
    h = np.zeros(layer.out_dim)
    for i in range(layer.fusion_rank):
        term = np.ones(layer.out_dim)
        for m in MODALITIES:
            term = term * _project(layer.factors[m][i], augmented[m])
        h += term
    return h


def fusion_full_tensor(layer: LMFLayer) -> np.ndarray:
    """Materialize T[j,p,q,s] = sum_i Wv_i[j,p] Wa_i[j,q] Wt_i[j,s]."""
    dv = layer.input_dim("v") + 1
    da = layer.input_dim("a") + 1
    dt = layer.input_dim("t") + 1
    t = np.zeros((layer.out_dim, dv, da, dt))
    for i in range(layer.fusion_rank):
        wv = layer._dense(layer.factors["v"][i])
        wa = layer._dense(layer.factors["a"][i])
        wt = layer._dense(layer.factors["t"][i])
        t += np.einsum("jp,jq,js->jpqs", wv, wa, wt)
    return t


def tfn_forward(t: np.ndarray, z_v: np.ndarray, z_a: np.ndarray, z_t: np.ndarray) -> np.ndarray:
    """Contract the explicit fusion tensor with the augmented outer product."""
    if t.ndim != 4:
        raise ShapeError("fusion tensor must be 4-way")
    zv, za, zt = append_one(z_v), append_one(z_a), append_one(z_t)
    if t.shape[1:] != (zv.size, za.size, zt.size):
        raise ShapeError(f"tensor shape {t.shape} does not match inputs")
    return np.einsum("jpqs,p,q,s->j", t, zv, za, zt)
