"""Adam with bias correction, on flat parameter vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mlp import ParamVector


class NonFiniteGradientError(FloatingPointError):
    pass


@dataclass(frozen=True)
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, size: int) -> "AdamState":
        return cls(np.zeros(size), np.zeros(size), 0)


def adam_step(
    params: ParamVector,
    grad: ParamVector | np.ndarray,
    state: AdamState,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> tuple[ParamVector, AdamState]:
    """One descent step; returns new params and state (inputs are not modified)."""
    g = np.asarray(getattr(grad, "flat", grad), dtype=float)
    if g.shape != params.flat.shape or state.m.shape != g.shape:
        raise ValueError(f"shape mismatch: params {params.flat.shape}, grad {g.shape}, state {state.m.shape}")
    if not np.all(np.isfinite(g)):
        raise NonFiniteGradientError(f"non-finite gradient at Adam step {state.t + 1}")
    t = state.t + 1
    m = beta1 * state.m + (1.0 - beta1) * g
    v = beta2 * state.v + (1.0 - beta2) * (g * g)
    m_hat = m / (1.0 - beta1**t)
    v_hat = v / (1.0 - beta2**t)
    new = params.flat - lr * m_hat / (np.sqrt(v_hat) + eps)
    return ParamVector(new, params.shapes), AdamState(m, v, t)
