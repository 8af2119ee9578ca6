"""Mixture of Gaussians on a circle, and a mode-coverage score for generated samples."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Gauss8Config:
    n_modes: int = 8
    radius: float = 1.0
    std: float = 0.02
    noise_dim: int = 16
    seed: int = 0

    def centers(self) -> np.ndarray:
        ang = 2.0 * np.pi * np.arange(self.n_modes) / self.n_modes
        return self.radius * np.stack([np.cos(ang), np.sin(ang)], axis=1)


REFERENCE_NOISE_DIM = 256


def sample_gauss8(cfg: Gauss8Config, n: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """n x 2 draws: an equiprobable mode, plus isotropic noise of scale ``cfg.std``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    modes = rng.integers(0, cfg.n_modes, size=n)
    return cfg.centers()[modes] + cfg.std * rng.standard_normal((n, 2))


@dataclass
class Coverage:
    counts: np.ndarray  # per-mode count of high-quality samples
    assigned: np.ndarray  # per-mode count of all nearest-center assignments
    covered: int
    hq_fraction: float


def mode_coverage(samples: np.ndarray, cfg: Gauss8Config, radius_sigmas: float = 4.0, min_share: float = 0.02) -> Coverage:
    """Nearest-center assignment; a mode counts as covered when at least
    ``min_share`` of all samples land within ``radius_sigmas * std`` of it."""
    x = np.asarray(samples, dtype=float)
    if x.ndim != 2 or x.shape[1] != 2 or x.shape[0] < 1:
        raise ValueError("samples must be a nonempty n x 2 array")
    c = cfg.centers()
    d2 = ((x[:, None, :] - c[None, :, :]) ** 2).sum(-1)
    nearest = np.argmin(d2, axis=1)
    dist = np.sqrt(d2[np.arange(x.shape[0]), nearest])
    hq = dist <= radius_sigmas * cfg.std
    counts = np.bincount(nearest[hq], minlength=cfg.n_modes)
    assigned = np.bincount(nearest, minlength=cfg.n_modes)
    covered = int(np.sum(counts >= min_share * x.shape[0]))
    return Coverage(counts, assigned, covered, float(hq.mean()))
