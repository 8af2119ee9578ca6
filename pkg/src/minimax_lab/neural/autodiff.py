"""A small reverse-mode autodiff tape over numpy arrays.

Every op appends its output node to the tape, so the tape order is already a
topological order and the backward pass is a single reversed sweep.
"""

from __future__ import annotations

from typing import Callable

import numpy as np


class Node:
    __slots__ = ("tape", "value", "parents", "vjp", "requires_grad", "index")

    def __init__(self, tape: "Tape", value: np.ndarray, parents=(), vjp=None, requires_grad=False):
        self.tape = tape
        self.value = value
        self.parents = parents
        self.vjp = vjp
        self.requires_grad = requires_grad
        self.index = len(tape.nodes)
        tape.nodes.append(self)

    @property
    def shape(self):
        return self.value.shape

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, neg(self.tape.lift(other)))

    def __neg__(self):
        return neg(self)

    def __mul__(self, c):
        return scale(self, c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return matmul(self, other)

    def __repr__(self) -> str:
        return f"Node(#{self.index}, shape={self.value.shape}, grad={self.requires_grad})"


class Tape:
    def __init__(self):
        self.nodes: list[Node] = []

    def leaf(self, value, requires_grad: bool = True) -> Node:
        return Node(self, np.asarray(value, dtype=float), requires_grad=requires_grad)

    def const(self, value) -> Node:
        return self.leaf(value, requires_grad=False)

    def lift(self, x) -> Node:
        return x if isinstance(x, Node) else self.const(x)

    def __len__(self) -> int:
        return len(self.nodes)


def _op(parents: tuple[Node, ...], value: np.ndarray, vjp: Callable) -> Node:
    tape = parents[0].tape
    needs = any(p.requires_grad for p in parents)
    return Node(tape, value, parents if needs else (), vjp if needs else None, needs)


def _unbroadcast(g: np.ndarray, shape: tuple) -> np.ndarray:
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for ax, n in enumerate(shape):
        if n == 1 and g.shape[ax] != 1:
            g = g.sum(axis=ax, keepdims=True)
    return g


def add(a, b) -> Node:
    tape = a.tape if isinstance(a, Node) else b.tape
    a, b = tape.lift(a), tape.lift(b)
    sa, sb = a.value.shape, b.value.shape
    return _op((a, b), a.value + b.value, lambda g: (_unbroadcast(g, sa), _unbroadcast(g, sb)))


def neg(a: Node) -> Node:
    return _op((a,), -a.value, lambda g: (-g,))


def scale(a: Node, c: float) -> Node:
    c = float(c)
    return _op((a,), a.value * c, lambda g: (g * c,))


def matmul(a, b) -> Node:
    tape = a.tape if isinstance(a, Node) else b.tape
    a, b = tape.lift(a), tape.lift(b)
    av, bv = a.value, b.value
    return _op((a, b), av @ bv, lambda g: (g @ bv.T, av.T @ g))


def relu(a: Node) -> Node:
    mask = a.value > 0
    return _op((a,), np.where(mask, a.value, 0.0), lambda g: (g * mask,))


def sigmoid_value(z: np.ndarray) -> np.ndarray:
    # tanh form does not overflow for large |z|
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def sigmoid(a: Node) -> Node:
    s = sigmoid_value(a.value)
    return _op((a,), s, lambda g: (g * s * (1.0 - s),))


def clip(a: Node, lo: float, hi: float) -> Node:
    v = a.value
    inside = (v >= lo) & (v <= hi)
    return _op((a,), np.clip(v, lo, hi), lambda g: (g * inside,))


def log(a: Node) -> Node:
    v = a.value
    return _op((a,), np.log(v), lambda g: (g / v,))


def log1m(a: Node) -> Node:
    """log(1 - a)."""
    v = a.value
    return _op((a,), np.log1p(-v), lambda g: (-g / (1.0 - v),))


def square(a: Node) -> Node:
    v = a.value
    return _op((a,), v * v, lambda g: (2.0 * v * g,))


def mean(a: Node) -> Node:
    v = a.value
    n = v.size
    return _op((a,), np.asarray(v.mean()), lambda g: (np.full(v.shape, g / n),))


def total(a: Node) -> Node:
    v = a.value
    return _op((a,), np.asarray(v.sum()), lambda g: (np.full(v.shape, g),))


def backward(tape: Tape, output: Node, adjoint=1.0) -> dict[int, np.ndarray]:
    """Reverse sweep from ``output``; returns gradients keyed by node index.

    Only nodes that require gradients get an entry.
    """
    grads: dict[int, np.ndarray] = {output.index: np.broadcast_to(np.asarray(adjoint, dtype=float), output.value.shape).copy()}
    for node in reversed(tape.nodes[: output.index + 1]):
        g = grads.get(node.index)
        if g is None or node.vjp is None:
            continue
        for parent, pg in zip(node.parents, node.vjp(g)):
            if not parent.requires_grad:
                continue
            if parent.index in grads:
                grads[parent.index] = grads[parent.index] + pg
            else:
                grads[parent.index] = pg
    return grads
