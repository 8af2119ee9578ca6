"""Discriminator and generator losses against queues of opponent snapshots.

All losses are minimized. The discriminator loss is the negated ascent
objective. Opponent snapshots enter as constants, so no gradient reaches them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import autodiff as ad
from .mlp import MlpSpec, ParamVector, apply, backward, forward_nodes
from .queue import ModelQueue

D_CLAMP = 1e-7


class EmptyQueueError(RuntimeError):
    pass


@dataclass
class LossResult:
    value: float
    grad: ParamVector
    tape: ad.Tape


def _check_queue(queue) -> list[ParamVector]:
    items = list(queue)
    if not items:
        raise EmptyQueueError("opponent queue is empty")
    return items


def _log_d(node: ad.Node) -> ad.Node:
    return ad.log(ad.clip(node, D_CLAMP, 1.0 - D_CLAMP))


def _log_1m_d(node: ad.Node) -> ad.Node:
    return ad.log1m(ad.clip(node, D_CLAMP, 1.0 - D_CLAMP))


def mixture_d_loss(
    d_spec: MlpSpec,
    d_params: ParamVector,
    g_spec: MlpSpec,
    generator_queue: ModelQueue | list[ParamVector],
    data_batch: np.ndarray,
    noise_batch: np.ndarray,
) -> LossResult:
    """-(1/m) sum_i [log D(x_i) + (1/|G|) sum_w log(1 - D(G_w(z_i)))]."""
    gens = _check_queue(generator_queue)
    fakes = [apply(g_spec, g, noise_batch) for g in gens]
    fake = fakes[0] if len(fakes) == 1 else np.concatenate(fakes, axis=0)

    tape = ad.Tape()
    w = [tape.leaf(a) for a in d_params.arrays()]
    real_term = ad.mean(_log_d(forward_nodes(d_spec, w, tape.const(data_batch))))
    # the mean over all |G|*m fake rows equals (1/|G|) sum_w of per-snapshot means
    fake_term = ad.mean(_log_1m_d(forward_nodes(d_spec, w, tape.const(fake))))
    loss = ad.neg(ad.add(real_term, fake_term))
    return LossResult(float(loss.value), backward(tape, loss, w, d_params.shapes), tape)


def mixture_g_loss(
    g_spec: MlpSpec,
    g_params: ParamVector,
    d_spec: MlpSpec,
    discriminator_queue: ModelQueue | list[ParamVector],
    noise_batch: np.ndarray,
) -> LossResult:
    """(1/(m |D|)) sum_i sum_w log(1 - D_w(G(z_i)))."""
    discs = _check_queue(discriminator_queue)
    tape = ad.Tape()
    w = [tape.leaf(a) for a in g_params.arrays()]
    out = forward_nodes(g_spec, w, tape.const(noise_batch))
    acc = None
    for d in discs:
        dw = [tape.const(a) for a in d.arrays()]
        term = ad.mean(_log_1m_d(forward_nodes(d_spec, dw, out)))
        acc = term if acc is None else ad.add(acc, term)
    loss = ad.scale(acc, 1.0 / len(discs))
    return LossResult(float(loss.value), backward(tape, loss, w, g_params.shapes), tape)


def standard_d_loss(d_spec, d_params, g_spec, g_params, data_batch, noise_batch) -> LossResult:
    """Plain GAN discriminator loss against one generator."""
    fake = apply(g_spec, g_params, noise_batch)
    tape = ad.Tape()
    w = [tape.leaf(a) for a in d_params.arrays()]
    real_term = ad.mean(_log_d(forward_nodes(d_spec, w, tape.const(data_batch))))
    fake_term = ad.mean(_log_1m_d(forward_nodes(d_spec, w, tape.const(fake))))
    loss = ad.neg(ad.add(real_term, fake_term))
    return LossResult(float(loss.value), backward(tape, loss, w, d_params.shapes), tape)


def standard_g_loss(g_spec, g_params, d_spec, d_params, noise_batch) -> LossResult:
    """Plain (saturating) GAN generator loss against one discriminator."""
    tape = ad.Tape()
    w = [tape.leaf(a) for a in g_params.arrays()]
    out = forward_nodes(g_spec, w, tape.const(noise_batch))
    dw = [tape.const(a) for a in d_params.arrays()]
    loss = ad.mean(_log_1m_d(forward_nodes(d_spec, dw, out)))
    return LossResult(float(loss.value), backward(tape, loss, w, g_params.shapes), tape)
