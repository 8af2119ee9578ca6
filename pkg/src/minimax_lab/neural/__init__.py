"""Tiny numpy neural stack for Fictitious GAN on the 2-D Gaussian mixture."""

from .adam import AdamState, NonFiniteGradientError, adam_step
from .gauss8 import Coverage, Gauss8Config, mode_coverage, sample_gauss8
from .losses import EmptyQueueError, mixture_d_loss, mixture_g_loss, standard_d_loss, standard_g_loss
from .mlp import MlpSpec, ParamVector, apply, discriminator_spec, forward, generator_spec, init_params
from .queue import ModelQueue
from .train import TrainConfig, TrainingDivergedError, TrainResult, train_fictitious_gan, train_standard_gan

__all__ = [
    "AdamState", "NonFiniteGradientError", "adam_step",
    "Coverage", "Gauss8Config", "mode_coverage", "sample_gauss8",
    "EmptyQueueError", "mixture_d_loss", "mixture_g_loss", "standard_d_loss", "standard_g_loss",
    "MlpSpec", "ParamVector", "apply", "discriminator_spec", "forward", "generator_spec", "init_params",
    "ModelQueue",
    "TrainConfig", "TrainingDivergedError", "TrainResult", "train_fictitious_gan", "train_standard_gan",
]
