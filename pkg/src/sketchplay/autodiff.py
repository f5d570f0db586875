"""Minimal reverse-mode automatic differentiation over float64 numpy arrays.

Every operation records its parents and vector-Jacobian closures; the
closures are themselves written in terms of these operations, so the
gradients returned by `grad` are graph nodes that can be differentiated
again (the critic's gradient-norm penalty needs exactly that double
backward). Evaluation is eager and deterministic; there is no implicit
global state beyond the `no_grad` switch.
"""

from __future__ import annotations

from contextlib import contextmanager

import numpy as np

from .errors import ShapeError

_GRAD_ENABLED = True


@contextmanager
def no_grad():
    """Disable graph construction inside the block (pure evaluation)."""
    global _GRAD_ENABLED
    old = _GRAD_ENABLED
    _GRAD_ENABLED = False
    try:
        yield
    finally:
        _GRAD_ENABLED = old


@contextmanager
def enable_grad():
    """Force graph construction, e.g. for an inner grad under `no_grad`."""
    global _GRAD_ENABLED
    old = _GRAD_ENABLED
    _GRAD_ENABLED = True
    try:
        yield
    finally:
        _GRAD_ENABLED = old


class Tensor:
    """A float64 array plus the tape entry that produced it."""

    __slots__ = ("data", "requires_grad", "_parents", "_vjps")

    def __init__(self, data, requires_grad: bool = False):
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = bool(requires_grad)
        self._parents: tuple["Tensor", ...] = ()
        self._vjps: tuple = ()

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    def item(self) -> float:
        return float(self.data)

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    # Operator sugar; scalars are wrapped as constants.
    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return neg(self)

    def __matmul__(self, other):
        return matmul(self, other)


def as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _make(data, parents: tuple, vjps: tuple) -> Tensor:
    out = Tensor(data)
    if _GRAD_ENABLED and any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = parents
        out._vjps = vjps
    return out


# Elementwise arithmetic -------------------------------------------------------


def _sum_to(g: Tensor, shape: tuple[int, ...]) -> Tensor:
    """Reduce a broadcast gradient back to `shape`."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = tsum(g, axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = tsum(g, axis=axes, keepdims=True)
    return g


def add(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    return _make(
        a.data + b.data,
        (a, b),
        (lambda g: _sum_to(g, a.shape), lambda g: _sum_to(g, b.shape)),
    )


def sub(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    return _make(
        a.data - b.data,
        (a, b),
        (lambda g: _sum_to(g, a.shape), lambda g: _sum_to(neg(g), b.shape)),
    )


def neg(a) -> Tensor:
    a = as_tensor(a)
    return _make(-a.data, (a,), (lambda g: neg(g),))


def mul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    return _make(
        a.data * b.data,
        (a, b),
        (lambda g: _sum_to(mul(g, b), a.shape), lambda g: _sum_to(mul(g, a), b.shape)),
    )


def div(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    return _make(
        a.data / b.data,
        (a, b),
        (
            lambda g: _sum_to(div(g, b), a.shape),
            lambda g: _sum_to(neg(div(mul(g, a), mul(b, b))), b.shape),
        ),
    )


def scale(a, c: float) -> Tensor:
    a = as_tensor(a)
    c = float(c)
    return _make(a.data * c, (a,), (lambda g: scale(g, c),))


def square(a) -> Tensor:
    return mul(a, a)


def sqrt(a) -> Tensor:
    a = as_tensor(a)
    out = Tensor(np.sqrt(a.data))
    if _GRAD_ENABLED and a.requires_grad:
        out.requires_grad = True
        out._parents = (a,)
        out._vjps = (lambda g: scale(div(g, out), 0.5),)
    return out


def tabs(a) -> Tensor:
    a = as_tensor(a)
    sign = Tensor(np.sign(a.data))
    return _make(np.abs(a.data), (a,), (lambda g: mul(g, sign),))


def relu(a) -> Tensor:
    a = as_tensor(a)
    mask = Tensor((a.data > 0).astype(np.float64))
    return _make(a.data * mask.data, (a,), (lambda g: mul(g, mask),))


def sigmoid(a) -> Tensor:
    a = as_tensor(a)
    x = a.data
    data = np.where(x >= 0, 1.0 / (1.0 + np.exp(-np.abs(x))), np.exp(-np.abs(x)) / (1.0 + np.exp(-np.abs(x))))
    out = Tensor(data)
    if _GRAD_ENABLED and a.requires_grad:
        out.requires_grad = True
        out._parents = (a,)
        out._vjps = (lambda g: mul(g, mul(out, sub(1.0, out))),)
    return out


def clip(a, lo: float, hi: float) -> Tensor:
    a = as_tensor(a)
    mask = Tensor(((a.data > lo) & (a.data < hi)).astype(np.float64))
    return _make(np.clip(a.data, lo, hi), (a,), (lambda g: mul(g, mask),))


def atan2(y, x) -> Tensor:
    y, x = as_tensor(y), as_tensor(x)

    def vjp_y(g):
        return _sum_to(div(mul(g, x), add(square(x), square(y))), y.shape)

    def vjp_x(g):
        return _sum_to(neg(div(mul(g, y), add(square(x), square(y)))), x.shape)

    return _make(np.arctan2(y.data, x.data), (y, x), (vjp_y, vjp_x))


# Shape ops --------------------------------------------------------------------


def reshape(a, shape) -> Tensor:
    a = as_tensor(a)
    shape = tuple(shape)
    return _make(a.data.reshape(shape), (a,), (lambda g: reshape(g, a.shape),))


def broadcast_to(a, shape) -> Tensor:
    a = as_tensor(a)
    shape = tuple(shape)
    return _make(
        np.broadcast_to(a.data, shape).copy(), (a,), (lambda g: _sum_to(g, a.shape),)
    )


def transpose2(a) -> Tensor:
    """Swap the last two axes."""
    a = as_tensor(a)
    if a.ndim < 2:
        raise ShapeError("transpose2 needs at least 2 dimensions")
    return _make(np.swapaxes(a.data, -1, -2), (a,), (lambda g: transpose2(g),))


def tsum(a, axis=None, keepdims: bool = False) -> Tensor:
    a = as_tensor(a)
    if axis is not None and not isinstance(axis, tuple):
        axis = (axis,)

    def vjp(g):
        if axis is None:
            r = reshape(g, (1,) * a.ndim)
        elif not keepdims:
            kshape = list(a.shape)
            for ax in axis:
                kshape[ax] = 1
            r = reshape(g, kshape)
        else:
            r = g
        return broadcast_to(r, a.shape)

    return _make(np.sum(a.data, axis=axis, keepdims=keepdims), (a,), (vjp,))


def mean(a, axis=None, keepdims: bool = False) -> Tensor:
    a = as_tensor(a)
    if axis is None:
        n = a.data.size
    else:
        axes = axis if isinstance(axis, tuple) else (axis,)
        n = int(np.prod([a.shape[ax] for ax in axes]))
    return scale(tsum(a, axis=axis, keepdims=keepdims), 1.0 / n)


def concat(parts, axis: int) -> Tensor:
    parts = [as_tensor(p) for p in parts]
    sizes = [p.shape[axis] for p in parts]
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)

    def make_vjp(i):
        return lambda g: slice_ax(g, axis, int(offsets[i]), int(offsets[i + 1]))

    return _make(
        np.concatenate([p.data for p in parts], axis=axis),
        tuple(parts),
        tuple(make_vjp(i) for i in range(len(parts))),
    )


def slice_ax(a, axis: int, start: int, stop: int) -> Tensor:
    a = as_tensor(a)
    idx = (slice(None),) * axis + (slice(start, stop),)
    after = a.shape[axis] - stop
    return _make(a.data[idx].copy(), (a,), (lambda g: pad_ax(g, axis, start, after),))


def pad_ax(a, axis: int, before: int, after: int) -> Tensor:
    a = as_tensor(a)
    widths = [(0, 0)] * a.ndim
    widths[axis] = (before, after)
    stop = before + a.shape[axis]
    return _make(
        np.pad(a.data, widths), (a,), (lambda g: slice_ax(g, axis, before, stop),)
    )


# Linear algebra ---------------------------------------------------------------


def matmul(a, b) -> Tensor:
    """a @ b where b is a 2-D weight; a may carry leading batch axes."""
    a, b = as_tensor(a), as_tensor(b)
    if b.ndim != 2:
        raise ShapeError(f"matmul weight must be 2-D, got {b.shape}")
    if a.shape[-1] != b.shape[0]:
        raise ShapeError(f"matmul mismatch: {a.shape} @ {b.shape}")
    k, n = b.shape

    def vjp_a(g):
        return matmul(g, transpose2(b))

    def vjp_b(g):
        return matmul(transpose2(reshape(a, (-1, k))), reshape(g, (-1, n)))

    return _make(a.data @ b.data, (a, b), (vjp_a, vjp_b))


def unfold(a, k: int) -> Tensor:
    """(B, T, C) -> (B, T, k*C): the k temporal taps around each frame,
    zero-padded at the sequence ends. Tap i covers offset i - k//2."""
    a = as_tensor(a)
    if a.ndim != 3:
        raise ShapeError(f"unfold expects (B, T, C), got {a.shape}")
    _, t, _ = a.shape
    pad = k // 2
    xp = np.pad(a.data, ((0, 0), (pad, pad), (0, 0)))
    data = np.concatenate([xp[:, i : i + t, :] for i in range(k)], axis=2)
    return _make(data, (a,), (lambda g: fold(g, k),))


def fold(a, k: int) -> Tensor:
    """Adjoint of `unfold`: scatter-add taps back to (B, T, C)."""
    a = as_tensor(a)
    if a.ndim != 3 or a.shape[2] % k != 0:
        raise ShapeError(f"fold expects (B, T, k*C), got {a.shape}")
    b, t, kc = a.shape
    c = kc // k
    pad = k // 2
    acc = np.zeros((b, t + 2 * pad, c))
    for i in range(k):
        acc[:, i : i + t, :] += a.data[:, :, i * c : (i + 1) * c]
    return _make(acc[:, pad : pad + t, :], (a,), (lambda g: unfold(g, k),))


# Backward ---------------------------------------------------------------------


def grad(output: Tensor, wrt: list[Tensor], allow_unused: bool = True) -> list[Tensor]:
    """Gradients of a scalar output with respect to `wrt`.

    Returned tensors are themselves graph nodes, so expressions built from
    them support a further `grad` call (double backward).
    """
    if output.data.size != 1:
        raise ShapeError("grad requires a scalar output")
    if not output.requires_grad:
        if allow_unused:
            return [Tensor(np.zeros_like(w.data)) for w in wrt]
        raise ValueError("output does not depend on any differentiable input")

    # Iterative post-order topo sort over grad-requiring nodes.
    topo: list[Tensor] = []
    state: dict[int, int] = {}
    stack = [output]
    while stack:
        node = stack[-1]
        st = state.get(id(node))
        if st is None:
            state[id(node)] = 0
            for p in node._parents:
                if p.requires_grad and state.get(id(p)) is None:
                    stack.append(p)
        else:
            stack.pop()
            if st == 0:
                state[id(node)] = 1
                topo.append(node)

    grads: dict[int, Tensor] = {id(output): Tensor(np.ones_like(output.data))}
    for node in reversed(topo):
        g = grads.get(id(node))
        if g is None:
            continue
        for parent, vjp in zip(node._parents, node._vjps):
            if vjp is None or not parent.requires_grad:
                continue
            pg = vjp(g)
            if pg.shape != parent.shape:
                raise ShapeError(
                    f"vjp produced {pg.shape} for parent of shape {parent.shape}"
                )
            prev = grads.get(id(parent))
            grads[id(parent)] = pg if prev is None else add(prev, pg)

    out = []
    for w in wrt:
        g = grads.get(id(w))
        if g is None:
            if not allow_unused:
                raise ValueError("an input is unused by the output")
            g = Tensor(np.zeros_like(w.data))
        out.append(g)
    return out


# Finite-difference verification -------------------------------------------------


def grad_check(f, point, h: float = 1e-5, max_samples: int = 200, seed: int = 0) -> float:
    """Worst relative error of analytic gradients vs central differences.

    `f` maps Tensors to a scalar Tensor; `point` is one array or a list of
    arrays giving the evaluation point. Up to `max_samples` coordinates
    per input are probed (all of them when the input is small). The
    relative error is |a - n| / max(|a|, |n|, floor) with a floor scaled
    to the magnitude of f, which keeps finite-difference roundoff on dead
    coordinates from registering as failures.
    """
    arrays = point if isinstance(point, (list, tuple)) else [point]
    tensors = [Tensor(np.asarray(x, dtype=np.float64), requires_grad=True) for x in arrays]
    out = f(*tensors)
    f0 = float(out.data)
    analytic = [g.data for g in grad(out, tensors)]
    floor = 1e-6 * (1.0 + abs(f0))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for x, a in zip(tensors, analytic):
        n = x.data.size
        if n <= max_samples:
            idxs = np.arange(n)
        else:
            idxs = rng.choice(n, size=max_samples, replace=False)
        flat = x.data.reshape(-1)
        aflat = a.reshape(-1)
        for i in idxs:
            # No no_grad here: f may differentiate internally (gradient
            # penalties), which needs the tape even for value-only calls.
            orig = flat[i]
            flat[i] = orig + h
            fp = float(f(*tensors).data)
            flat[i] = orig - h
            fm = float(f(*tensors).data)
            flat[i] = orig
            num = (fp - fm) / (2.0 * h)
            err = abs(aflat[i] - num) / max(abs(aflat[i]), abs(num), floor)
            worst = max(worst, err)
    return worst
