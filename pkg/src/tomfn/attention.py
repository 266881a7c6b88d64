"""Multi-head self-attention text encoder.

Tokens arrive as precomputed feature vectors (rows of X).  Heads run in
parallel on the full model width, their outputs are concatenated back to
that width, and a single feed-forward matrix plus relu produces per-token
features that are pooled into one embedding.  There is no positional
encoding, residual path, or normalization, so with mean pooling the
encoder is permutation-invariant over tokens.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tt as tt_mod
from .errors import ShapeError
from .tensor import relu, row_softmax


@dataclass
class AttentionHead:
    """Projection weights, each (d_model, d_head); dense array or TTMatrix."""

    w_q: object
    w_k: object
    w_v: object

    def __post_init__(self):
        shapes = {self.shape_of(w) for w in (self.w_q, self.w_k, self.w_v)}
        if len(shapes) != 1:
            raise ShapeError(f"q/k/v weights disagree on shape: {shapes}")

    @staticmethod
    def shape_of(w) -> tuple[int, int]:
        if isinstance(w, tt_mod.TTMatrix):
            # TT projections are stored as (d_head, d_model) operators.
            return (w.ncols, w.nrows)
        return w.shape

    @property
    def d_model(self) -> int:
        return self.shape_of(self.w_q)[0]

    @property
    def d_head(self) -> int:
        return self.shape_of(self.w_q)[1]


@dataclass
class TextEncoder:
    heads: list[AttentionHead]
    ff: object  # (d_model, d_out), dense or TTMatrix
    pooling: str = "mean"

    def __post_init__(self):
        if self.pooling not in ("mean", "last"):
            raise ShapeError(f"unknown pooling '{self.pooling}'")
        if not self.heads:
            raise ShapeError("need at least one attention head")
        d_model = self.heads[0].d_model
        if any(h.d_model != d_model for h in self.heads):
            raise ShapeError("heads disagree on model width")
        if sum(h.d_head for h in self.heads) != d_model:
            raise ShapeError("concatenated head widths must restore the model width")
        if AttentionHead.shape_of(self.ff)[0] != d_model:
            raise ShapeError("feed-forward input width must equal the model width")

    @property
    def d_model(self) -> int:
        return self.heads[0].d_model

    @property
    def d_out(self) -> int:
        return AttentionHead.shape_of(self.ff)[1]


def scaled_dot_attention(q: np.ndarray, k: np.ndarray, v: np.ndarray) -> np.ndarray:
    """rowsoftmax(Q K^T / sqrt(d_k)) V for row-stacked sequences."""
    if q.shape != k.shape or q.shape != v.shape or q.ndim != 2:
        raise ShapeError(f"q/k/v must share an LxD shape, got {q.shape}/{k.shape}/{v.shape}")
    d_k = q.shape[1]
    scores = (q @ k.T) / np.sqrt(d_k)
    return row_softmax(scores) @ v


def _project_rows(x: np.ndarray, w) -> np.ndarray:
    """X @ W for dense W; per-row TT matvec for a TT operator."""
    if isinstance(w, tt_mod.TTMatrix):
        return np.stack([tt_mod.tt_matvec(w, row) for row in x])
    return x @ w


def encode_text(enc: TextEncoder, x: np.ndarray) -> np.ndarray:
    """Encode an L x d_model token matrix into a d_out embedding."""
    if x.ndim != 2 or x.shape[0] < 1:
        raise ShapeError("token matrix must be L x d_model with L >= 1")
    if x.shape[1] != enc.d_model:
        raise ShapeError(f"token width {x.shape[1]} != model width {enc.d_model}")
    outs = []
    for head in enc.heads:
        q = _project_rows(x, head.w_q)
        k = _project_rows(x, head.w_k)
        v = _project_rows(x, head.w_v)
        outs.append(scaled_dot_attention(q, k, v))
    concat = np.concatenate(outs, axis=1)
    features = relu(_project_rows(concat, enc.ff))
    if enc.pooling == "mean":
        return features.mean(axis=0)
    return features[-1]
