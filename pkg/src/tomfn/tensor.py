"""Dense tensor kernels shared by every other module.

All values are float64 numpy arrays in row-major (C) order; the flat
row-major layout is also the on-disk layout, so ``reshape`` never moves
data.  Nothing here broadcasts: shape mismatches raise ``ShapeError``
instead of silently expanding.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError


def as_tensor(data, shape=None) -> np.ndarray:
    """Coerce nested lists / arrays to a float64 C-order array.

    Rejects non-finite entries; optionally reshapes flat data to `shape`.
    """
    t = np.asarray(data, dtype=np.float64)
    if not np.all(np.isfinite(t)):
        raise ShapeError("tensor contains non-finite entries")
    if shape is not None:
        if t.size != int(np.prod(shape)):
            raise ShapeError(f"cannot view {t.size} elements as shape {list(shape)}")
        t = t.reshape(shape)
    return np.ascontiguousarray(t)


def reshape(t: np.ndarray, new_shape) -> np.ndarray:
    """Relabel `t` with `new_shape`; element count must be preserved."""
    new_shape = tuple(int(d) for d in new_shape)
    if any(d < 1 for d in new_shape):
        raise ShapeError(f"shape entries must be >= 1, got {list(new_shape)}")
    if t.size != int(np.prod(new_shape)):
        raise ShapeError(f"cannot reshape {t.size} elements to {list(new_shape)}")
    return t.reshape(new_shape)


def matvec(w: np.ndarray, x: np.ndarray) -> np.ndarray:
    """y = W @ x for a 2-way W and 1-way x."""
    if w.ndim != 2 or x.ndim != 1:
        raise ShapeError(f"matvec needs a matrix and a vector, got {w.ndim}-way and {x.ndim}-way")
    if w.shape[1] != x.shape[0]:
        raise ShapeError(f"inner dimensions differ: {w.shape[1]} vs {x.shape[0]}")
    return w @ x


def elementwise_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hadamard product; shapes must match exactly."""
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a * b


def outer3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Three-way outer product T[p,q,s] = a[p] b[q] c[s]."""
    for v in (a, b, c):
        if v.ndim != 1:
            raise ShapeError("outer3 takes three 1-way tensors")
    return np.einsum("p,q,s->pqs", a, b, c)


def softmax(v: np.ndarray) -> np.ndarray:
    """Max-shifted softmax of a 1-way tensor; output sums to 1."""
    if v.ndim != 1 or v.size < 1:
        raise ShapeError("softmax takes a nonempty 1-way tensor")
    e = np.exp(v - np.max(v))
    return e / np.sum(e)


def row_softmax(m: np.ndarray) -> np.ndarray:
    """Softmax applied independently to each row of a matrix."""
    if m.ndim != 2:
        raise ShapeError("row_softmax takes a 2-way tensor")
    e = np.exp(m - np.max(m, axis=1, keepdims=True))
    return e / np.sum(e, axis=1, keepdims=True)


def relu(v: np.ndarray) -> np.ndarray:
    """Elementwise max(0, x)."""
    return np.maximum(v, 0.0)


def to_json_obj(t: np.ndarray) -> dict:
    """Encode as {"shape": [...], "data": [...]} with row-major data."""
    return {"shape": list(t.shape), "data": np.ravel(t, order="C").tolist()}


def from_json_obj(obj: dict) -> np.ndarray:
    """Decode the {"shape","data"} encoding produced by `to_json_obj`."""
    if not isinstance(obj, dict) or "shape" not in obj or "data" not in obj:
        raise ShapeError("tensor object must carry 'shape' and 'data'")
    return as_tensor(obj["data"], shape=obj["shape"])
