"""Fictitious GAN training on the 2-D Gaussian mixture, plus the plain alternating baseline."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .adam import AdamState, NonFiniteGradientError, adam_step
from .gauss8 import REFERENCE_NOISE_DIM, Gauss8Config, mode_coverage, sample_gauss8
from .losses import mixture_d_loss, mixture_g_loss, standard_d_loss, standard_g_loss
from .mlp import MlpSpec, ParamVector, apply, discriminator_spec, generator_spec, init_params
from .queue import ModelQueue

log = logging.getLogger(__name__)


class TrainingDivergedError(FloatingPointError):
    def __init__(self, iteration: int, what: str):
        super().__init__(f"{what} became non-finite at outer iteration {iteration}")
        self.iteration = iteration


@dataclass(frozen=True)
class TrainConfig:
    k0: int = 3
    queue_capacity: int = 5
    batch_size: int = 64
    outer_iters: int = 5000
    lr_d: float = 2e-4
    lr_g: float = 1.2e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eval_every: int = 500
    eval_samples: int = 2000
    final_samples: int = 10_000
    sample_every: int = 0  # 0 disables sample dumps
    seed: int = 0

    def __post_init__(self):
        if self.k0 < 1 or self.batch_size < 1 or self.queue_capacity < 1:
            raise ValueError("k0, batch_size and queue_capacity must all be >= 1")
        if self.outer_iters < 0:
            raise ValueError("outer_iters must be >= 0")

    @classmethod
    def reference(cls, **overrides) -> "TrainConfig":
        """The reported synthetic-data setting: 34k outer iterations."""
        return cls(**{"outer_iters": 34_000, "eval_every": 2000, "sample_every": 10_000, **overrides})


def reference_gauss8(seed: int = 0) -> Gauss8Config:
    return Gauss8Config(noise_dim=REFERENCE_NOISE_DIM, seed=seed)


@dataclass
class TrainTrace:
    iters: list[int] = field(default_factory=list)
    d_loss: list[float] = field(default_factory=list)
    g_loss: list[float] = field(default_factory=list)
    d_queue: list[int] = field(default_factory=list)
    g_queue: list[int] = field(default_factory=list)
    eval_iters: list[int] = field(default_factory=list)
    covered: list[int] = field(default_factory=list)
    hq_fraction: list[float] = field(default_factory=list)
    samples: dict[int, np.ndarray] = field(default_factory=dict)

    def to_csv(self) -> str:
        """iter, d_loss, g_loss, covered_modes, hq_fraction (blank between evaluations)."""
        evals = dict(zip(self.eval_iters, zip(self.covered, self.hq_fraction)))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter", "d_loss", "g_loss", "covered_modes", "hq_fraction"])
        for it, dl, gl in zip(self.iters, self.d_loss, self.g_loss):
            cov, hq = evals.get(it, ("", ""))
            w.writerow([it, repr(dl), repr(gl), cov, hq if hq == "" else repr(hq)])
        return buf.getvalue()


@dataclass
class TrainResult:
    d_params: ParamVector
    g_params: ParamVector
    d_queue: ModelQueue | None
    g_queue: ModelQueue | None
    trace: TrainTrace
    final_samples: np.ndarray
    final_covered: int
    final_hq_fraction: float
    final_counts: np.ndarray
    config: dict


def _streams(seed: int) -> dict[str, np.random.Generator]:
    init, data, noise, evals = np.random.SeedSequence(seed).spawn(4)
    return {
        "init": np.random.default_rng(init),
        "data": np.random.default_rng(data),
        "noise": np.random.default_rng(noise),
        "eval": np.random.default_rng(evals),
    }


def _evaluate(trace: TrainTrace, it: int, g_spec, g_params, gauss: Gauss8Config, tc: TrainConfig, rng) -> None:
    z = rng.standard_normal((tc.eval_samples, g_spec.input_dim))
    cov = mode_coverage(apply(g_spec, g_params, z), gauss)
    trace.eval_iters.append(it)
    trace.covered.append(cov.covered)
    trace.hq_fraction.append(cov.hq_fraction)
    log.debug("iter %d: %d modes covered, hq %.3f", it, cov.covered, cov.hq_fraction)


def _run(
    d_spec: MlpSpec,
    g_spec: MlpSpec,
    gauss: Gauss8Config,
    tc: TrainConfig,
    use_queues: bool,
) -> TrainResult:
    if g_spec.input_dim != gauss.noise_dim:
        raise ValueError(f"generator input dim {g_spec.input_dim} != noise dim {gauss.noise_dim}")
    rng = _streams(tc.seed)
    d = init_params(d_spec, rng["init"])
    g = init_params(g_spec, rng["init"])
    d_state = AdamState.zeros(len(d))
    g_state = AdamState.zeros(len(g))
    d_queue = g_queue = None
    if use_queues:
        d_queue = ModelQueue(tc.queue_capacity)
        g_queue = ModelQueue(tc.queue_capacity)
        # the first round needs an opponent: seed both queues with the initial models
        d_queue.push(d)
        g_queue.push(g)
    m = tc.batch_size
    trace = TrainTrace()
    if tc.sample_every:
        trace.samples[0] = apply(g_spec, g, rng["eval"].standard_normal((tc.eval_samples, gauss.noise_dim)))

    for it in range(1, tc.outer_iters + 1):
        try:
            for _ in range(tc.k0):
                x = sample_gauss8(gauss, m, rng["data"])
                z = rng["noise"].standard_normal((m, gauss.noise_dim))
                if use_queues:
                    res = mixture_d_loss(d_spec, d, g_spec, g_queue, x, z)
                else:
                    res = standard_d_loss(d_spec, d, g_spec, g, x, z)
                d, d_state = adam_step(d, res.grad, d_state, tc.lr_d, tc.beta1, tc.beta2)
            d_loss = res.value
            if use_queues:
                # inserted before the generator phase so that capacity 1 is exactly
                # alternating training
                d_queue.push(d)
            for _ in range(tc.k0):
                z = rng["noise"].standard_normal((m, gauss.noise_dim))
                if use_queues:
                    res = mixture_g_loss(g_spec, g, d_spec, d_queue, z)
                else:
                    res = standard_g_loss(g_spec, g, d_spec, d, z)
                g, g_state = adam_step(g, res.grad, g_state, tc.lr_g, tc.beta1, tc.beta2)
            g_loss = res.value
        except NonFiniteGradientError as exc:
            raise TrainingDivergedError(it, f"gradient ({exc})") from exc
        if not (d.is_finite() and g.is_finite()):
            raise TrainingDivergedError(it, "parameters")
        if use_queues:
            g_queue.push(g)

        trace.iters.append(it)
        trace.d_loss.append(d_loss)
        trace.g_loss.append(g_loss)
        trace.d_queue.append(len(d_queue) if d_queue else 0)
        trace.g_queue.append(len(g_queue) if g_queue else 0)
        if tc.eval_every and it % tc.eval_every == 0:
            _evaluate(trace, it, g_spec, g, gauss, tc, rng["eval"])
        if tc.sample_every and it % tc.sample_every == 0:
            trace.samples[it] = apply(g_spec, g, rng["eval"].standard_normal((tc.eval_samples, gauss.noise_dim)))

    final = apply(g_spec, g, rng["eval"].standard_normal((tc.final_samples, gauss.noise_dim)))
    cov = mode_coverage(final, gauss)
    config = {"train": asdict(tc), "gauss8": asdict(gauss), "d_spec": asdict(d_spec), "g_spec": asdict(g_spec)}
    return TrainResult(d, g, d_queue, g_queue, trace, final, cov.covered, cov.hq_fraction, cov.counts, config)


def train_fictitious_gan(
    d_spec: MlpSpec | None = None,
    g_spec: MlpSpec | None = None,
    gauss8: Gauss8Config | None = None,
    config: TrainConfig | None = None,
    **overrides,
) -> TrainResult:
    """Fictitious GAN training loop.

    Each outer iteration runs ``k0`` Adam steps for the discriminator against
    the generator queue, pushes the discriminator, runs ``k0`` Adam steps for
    the generator against the discriminator queue, and pushes the generator.
    Keyword overrides are applied to ``config``.
    """
    gauss8 = gauss8 or Gauss8Config()
    tc = config or TrainConfig()
    if overrides:
        tc = TrainConfig(**{**asdict(tc), **overrides})
    d_spec = d_spec or discriminator_spec()
    g_spec = g_spec or generator_spec(gauss8.noise_dim)
    return _run(d_spec, g_spec, gauss8, tc, use_queues=True)


def train_standard_gan(
    d_spec: MlpSpec | None = None,
    g_spec: MlpSpec | None = None,
    gauss8: Gauss8Config | None = None,
    config: TrainConfig | None = None,
    **overrides,
) -> TrainResult:
    """Alternating training: k0 discriminator steps, then k0 generator steps, no history."""
    gauss8 = gauss8 or Gauss8Config()
    tc = config or TrainConfig()
    if overrides:
        tc = TrainConfig(**{**asdict(tc), **overrides})
    d_spec = d_spec or discriminator_spec()
    g_spec = g_spec or generator_spec(gauss8.noise_dim)
    return _run(d_spec, g_spec, gauss8, tc, use_queues=False)
