"""Fully connected networks with flat parameter storage."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import autodiff as ad


@dataclass(frozen=True)
class MlpSpec:
    """Layer widths and head activation. Hidden layers always use ReLU."""

    input_dim: int
    hidden: tuple[int, ...]
    output_dim: int
    head: str = "linear"  # "linear" or "sigmoid"
    init: str = "xavier_uniform"

    def __post_init__(self):
        if self.head not in ("linear", "sigmoid"):
            raise ValueError(f"unknown head {self.head!r}")
        if self.init not in ("xavier_uniform", "zeros"):
            raise ValueError(f"unknown init scheme {self.init!r}")

    @property
    def widths(self) -> tuple[int, ...]:
        return (self.input_dim, *self.hidden, self.output_dim)

    @property
    def shapes(self) -> tuple[tuple[int, ...], ...]:
        w = self.widths
        out = []
        for a, b in zip(w[:-1], w[1:]):
            out += [(a, b), (b,)]
        return tuple(out)


def generator_spec(noise_dim: int = 16, width: int = 128) -> MlpSpec:
    return MlpSpec(noise_dim, (width, width), 2, "linear")


def discriminator_spec(width: int = 128) -> MlpSpec:
    return MlpSpec(2, (width,), 1, "sigmoid")


class ParamVector:
    """Flat float64 storage plus the per-layer shapes that slice it."""

    __slots__ = ("flat", "shapes")

    def __init__(self, flat: np.ndarray, shapes):
        flat = np.asarray(flat, dtype=float)
        shapes = tuple(tuple(s) for s in shapes)
        expected = sum(int(np.prod(s)) for s in shapes)
        if flat.ndim != 1 or flat.size != expected:
            raise ValueError(f"flat vector of size {flat.size} does not fit shapes {shapes}")
        self.flat = flat
        self.shapes = shapes

    def arrays(self) -> list[np.ndarray]:
        out, i = [], 0
        for s in self.shapes:
            n = int(np.prod(s))
            out.append(self.flat[i : i + n].reshape(s))
            i += n
        return out

    @classmethod
    def from_arrays(cls, arrays) -> "ParamVector":
        return cls(np.concatenate([np.ravel(a) for a in arrays]), [np.shape(a) for a in arrays])

    def snapshot(self) -> "ParamVector":
        """Read-only copy."""
        f = self.flat.copy()
        f.setflags(write=False)
        return ParamVector(f, self.shapes)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.flat)))

    def __len__(self) -> int:
        return self.flat.size

    def __repr__(self) -> str:
        return f"ParamVector(size={self.flat.size}, layers={len(self.shapes) // 2})"


def init_params(spec: MlpSpec, rng: np.random.Generator) -> ParamVector:
    """Zero biases; weights U(-a, a) with a = sqrt(6 / (fan_in + fan_out))."""
    arrays = []
    for shape in spec.shapes:
        if len(shape) == 1 or spec.init == "zeros":
            arrays.append(np.zeros(shape))
        else:
            fan_in, fan_out = shape
            a = np.sqrt(6.0 / (fan_in + fan_out))
            arrays.append(rng.uniform(-a, a, size=shape))
    return ParamVector.from_arrays(arrays)


def _relu(v: np.ndarray) -> np.ndarray:
    return np.where(v > 0, v, 0.0)


def apply(spec: MlpSpec, params: ParamVector, x: np.ndarray) -> np.ndarray:
    """Forward pass without recording; bit-identical to the taped pass."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != spec.input_dim:
        raise ValueError(f"batch shape {x.shape} does not match input dim {spec.input_dim}")
    arrays = params.arrays()
    h = x
    n_layers = len(arrays) // 2
    for i in range(n_layers):
        W, b = arrays[2 * i], arrays[2 * i + 1]
        h = h @ W + b
        if i < n_layers - 1:
            h = _relu(h)
    if spec.head == "sigmoid":
        h = ad.sigmoid_value(h)
    return h


def forward_nodes(spec: MlpSpec, weights: list[ad.Node], x: ad.Node) -> ad.Node:
    """Record the network on ``x.tape`` with the given weight nodes."""
    if x.value.ndim != 2 or x.value.shape[1] != spec.input_dim:
        raise ValueError(f"batch shape {x.value.shape} does not match input dim {spec.input_dim}")
    h = x
    n_layers = len(weights) // 2
    for i in range(n_layers):
        h = ad.add(ad.matmul(h, weights[2 * i]), weights[2 * i + 1])
        if i < n_layers - 1:
            h = ad.relu(h)
    if spec.head == "sigmoid":
        h = ad.sigmoid(h)
    return h


def forward(spec: MlpSpec, params: ParamVector, batch: np.ndarray, tape: ad.Tape | None = None, trainable: bool = True):
    """Taped forward pass.

    Returns ``(output_node, tape, weight_nodes)``; pass ``weight_nodes`` to
    :func:`gradient` after calling backward.
    """
    tape = ad.Tape() if tape is None else tape
    weights = [tape.leaf(a, requires_grad=trainable) for a in params.arrays()]
    out = forward_nodes(spec, weights, tape.const(batch))
    return out, tape, weights


def gradient(grads: dict[int, np.ndarray], weights: list[ad.Node], shapes) -> ParamVector:
    """Assemble a ParamVector gradient from a backward pass (zeros where untouched)."""
    parts = []
    for w in weights:
        g = grads.get(w.index)
        parts.append(np.zeros(w.value.shape) if g is None else g)
    return ParamVector(np.concatenate([np.ravel(p) for p in parts]), shapes)


def backward(tape: ad.Tape, output: ad.Node, weights: list[ad.Node], shapes, adjoint=1.0) -> ParamVector:
    """Gradient of ``output`` (contracted with ``adjoint``) w.r.t. the weight leaves."""
    return gradient(ad.backward(tape, output, adjoint), weights, shapes)
