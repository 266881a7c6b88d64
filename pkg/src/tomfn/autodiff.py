"""Minimal reverse-mode automatic differentiation over numpy arrays.

A `Var` records its value and, for non-leaf nodes, a vector-Jacobian
callback that maps the upstream gradient to gradients for its parents.
`backward` walks the tape in reverse topological order and accumulates
into `.grad`.  Only the handful of operations the network needs exist
here; every one of them is checked against central finite differences
in the test suite.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError


class Var:
    __slots__ = ("value", "grad", "parents", "vjp", "requires_grad")

    def __init__(self, value, parents=(), vjp=None, requires_grad=True):
        self.value = np.asarray(value, dtype=np.float64)
        self.grad = None
        self.parents = parents
        self.vjp = vjp
        self.requires_grad = requires_grad or any(p.requires_grad for p in parents)

    @property
    def shape(self):
        return self.value.shape


def leaf(value, requires_grad=True) -> Var:
    return Var(value, requires_grad=requires_grad)


def constant(value) -> Var:
    return Var(value, requires_grad=False)


def _toposort(root: Var) -> list[Var]:
    order, seen, stack = [], set(), [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node.parents:
            if p.requires_grad:
                stack.append((p, False))
    return order


def backward(root: Var, seed=None):
    """Accumulate d(root)/d(leaf) into every reachable leaf's `.grad`."""
    if seed is None:
        if root.value.ndim != 0:
            raise ShapeError("backward without a seed requires a scalar root")
        seed = np.array(1.0)
    root.grad = np.asarray(seed, dtype=np.float64)
    for node in reversed(_toposort(root)):
        if node.vjp is None or node.grad is None:
            continue
        for parent, contribution in zip(node.parents, node.vjp(node.grad)):
            if not parent.requires_grad or contribution is None:
                continue
            if parent.grad is None:
                parent.grad = np.zeros_like(parent.value)
            parent.grad = parent.grad + contribution


def matmul(a: Var, b: Var) -> Var:
    """np.matmul for the shape combinations the model uses."""
    av, bv = a.value, b.value
    case = (av.ndim, bv.ndim)
    if case not in {(2, 2), (2, 1), (1, 2), (3, 2), (3, 3)}:
        raise ShapeError(f"unsupported matmul arity {case}")
    out = np.matmul(av, bv)

    def vjp(g):
        if case == (2, 2):
            return g @ bv.T, av.T @ g
        if case == (2, 1):
            return np.outer(g, bv), av.T @ g
        if case == (1, 2):
            return bv @ g, np.outer(av, g)
        if case == (3, 2):
            return g @ bv.T, np.einsum("bmk,bmn->kn", av, g)
        return g @ bv.swapaxes(1, 2), av.swapaxes(1, 2) @ g

    return Var(out, (a, b), vjp)


def add(a: Var, b: Var) -> Var:
    if a.shape != b.shape:
        raise ShapeError(f"add shape mismatch: {a.shape} vs {b.shape}")
    return Var(a.value + b.value, (a, b), lambda g: (g, g))


def mul(a: Var, b: Var) -> Var:
    if a.shape != b.shape:
        raise ShapeError(f"mul shape mismatch: {a.shape} vs {b.shape}")
    return Var(a.value * b.value, (a, b), lambda g: (g * b.value, g * a.value))


def scale(a: Var, c: float) -> Var:
    return Var(a.value * c, (a,), lambda g: (g * c,))


def relu(a: Var) -> Var:
    mask = a.value > 0
    return Var(np.where(mask, a.value, 0.0), (a,), lambda g: (g * mask,))


def reshape(a: Var, shape) -> Var:
    old = a.value.shape
    return Var(a.value.reshape(shape), (a,), lambda g: (g.reshape(old),))


def transpose(a: Var, perm) -> Var:
    perm = tuple(perm)
    inv = tuple(np.argsort(perm))
    return Var(a.value.transpose(perm), (a,), lambda g: (g.transpose(inv),))


def concat(parts: list[Var], axis: int) -> Var:
    sizes = [p.value.shape[axis] for p in parts]
    splits = np.cumsum(sizes)[:-1]
    out = np.concatenate([p.value for p in parts], axis=axis)
    return Var(out, tuple(parts), lambda g: tuple(np.split(g, splits, axis=axis)))


def softmax_last(a: Var) -> Var:
    e = np.exp(a.value - np.max(a.value, axis=-1, keepdims=True))
    p = e / np.sum(e, axis=-1, keepdims=True)

    def vjp(g):
        inner = np.sum(g * p, axis=-1, keepdims=True)
        return (p * (g - inner),)

    return Var(p, (a,), vjp)


def logsumexp_last(a: Var) -> Var:
    m = np.max(a.value, axis=-1, keepdims=True)
    e = np.exp(a.value - m)
    s = np.sum(e, axis=-1, keepdims=True)
    out = (m + np.log(s)).squeeze(-1)
    softmax = e / s
    return Var(out, (a,), lambda g: (np.expand_dims(g, -1) * softmax,))


def gather_last(a: Var, idx: np.ndarray) -> Var:
    """out[...] = a[..., idx[...]] for an integer index array."""
    idx = np.asarray(idx, dtype=np.int64)
    if idx.shape != a.value.shape[:-1]:
        raise ShapeError(f"index shape {idx.shape} must equal {a.value.shape[:-1]}")
    out = np.take_along_axis(a.value, idx[..., None], axis=-1)[..., 0]

    def vjp(g):
        full = np.zeros_like(a.value)
        np.put_along_axis(full, idx[..., None], g[..., None], axis=-1)
        return (full,)

    return Var(out, (a,), vjp)


def take(a: Var, index: int, axis: int) -> Var:
    """Select one slice along `axis` (e.g. the last token for 'last' pooling)."""
    out = np.take(a.value, index, axis=axis)

    def vjp(g):
        full = np.zeros_like(a.value)
        sl = [slice(None)] * a.value.ndim
        sl[axis] = index
        full[tuple(sl)] = g
        return (full,)

    return Var(out, (a,), vjp)


def slice_axis(a: Var, axis: int, start: int, stop: int) -> Var:
    """Contiguous slice along one axis; the VJP zero-pads back."""
    sl = [slice(None)] * a.value.ndim
    sl[axis] = slice(start, stop)
    sl = tuple(sl)

    def vjp(g):
        full = np.zeros_like(a.value)
        full[sl] = g
        return (full,)

    return Var(a.value[sl], (a,), vjp)


def mean_axis(a: Var, axis: int) -> Var:
    n = a.value.shape[axis]
    out = a.value.mean(axis=axis)
    return Var(out, (a,), lambda g: (np.repeat(np.expand_dims(g / n, axis), n, axis=axis),))


def sum_all(a: Var) -> Var:
    return Var(a.value.sum(), (a,), lambda g: (np.broadcast_to(g, a.value.shape).copy(),))


def mean_all(a: Var) -> Var:
    return scale(sum_all(a), 1.0 / a.value.size)
