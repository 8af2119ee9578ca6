"""Simultaneous gradient descent-ascent on u(x, y) = x*y.

The update (x, y) -> (x + step*y, y - step*x) is sqrt(1 + step^2) times a
rotation, so every iterate off the origin spirals outward.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GdaState:
    x: float
    y: float
    step: float
    n: int = 0

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ValueError(f"step must be positive and finite, got {self.step}")

    @property
    def norm(self) -> float:
        return math.hypot(self.x, self.y)


def gda_step(state: GdaState) -> GdaState:
    """One unclipped simultaneous step: x ascends, y descends."""
    d = state.step
    return GdaState(state.x + d * state.y, state.y - d * state.x, d, state.n + 1)


def clipped_gda_step(state: GdaState, bound: float = 10.0) -> GdaState:
    """Same step, projected back onto the box [-bound, bound]^2."""
    nxt = gda_step(state)
    return GdaState(
        min(max(nxt.x, -bound), bound), min(max(nxt.y, -bound), bound), nxt.step, nxt.n
    )


def closed_form_trajectory(x0: float, y0: float, step: float, n: int) -> tuple[float, float]:
    """Iterate n of the GDA map without iterating.

    With r = |(x0, y0)|, c = sqrt(1 + step^2), theta = arctan(step) and
    beta = -atan2(x0, y0), the iterate is r * c**n * (-sin(beta - n*theta), cos(beta - n*theta)).
    The map rotates clockwise in this parametrization, hence ``beta - n*theta``.
    """
    if x0 == 0 and y0 == 0:
        raise ValueError("closed form undefined at the origin (phase is undefined)")
    r = math.hypot(x0, y0)
    c = math.sqrt(1.0 + step * step)
    theta = math.atan(step)
    beta = -math.atan2(x0, y0)
    phase = beta - n * theta
    amp = r * c**n
    return -amp * math.sin(phase), amp * math.cos(phase)


def closed_form_path(x0: float, y0: float, step: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form iterates for n = 0..n_max, vectorized."""
    if x0 == 0 and y0 == 0:
        raise ValueError("closed form undefined at the origin (phase is undefined)")
    n = np.arange(n_max + 1)
    phase = -math.atan2(x0, y0) - n * math.atan(step)
    amp = math.hypot(x0, y0) * math.sqrt(1.0 + step * step) ** n
    return -amp * np.sin(phase), amp * np.cos(phase)


def divergence_threshold_step(step: float, factor: float = 10.0) -> int:
    """Smallest n with (1 + step^2)^(n/2) > factor."""
    n = math.floor(2.0 * math.log(factor) / math.log1p(step * step)) + 1
    # guard the floor against rounding at the boundary
    while (1 + step * step) ** ((n - 1) / 2) > factor:
        n -= 1
    while (1 + step * step) ** (n / 2) <= factor:
        n += 1
    return n


@dataclass
class GdaTrace:
    n: np.ndarray
    x: np.ndarray
    y: np.ndarray
    divergence_flag: bool
    divergence_step: int | None

    @property
    def xy(self) -> np.ndarray:
        return self.x * self.y

    @property
    def norm(self) -> np.ndarray:
        return np.hypot(self.x, self.y)

    def to_csv(self, every: int = 1) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "x", "y", "xy", "norm"])
        sl = slice(None, None, every)
        for k, x, y, p, r in zip(self.n[sl], self.x[sl], self.y[sl], self.xy[sl], self.norm[sl]):
            w.writerow([int(k), repr(float(x)), repr(float(y)), repr(float(p)), repr(float(r))])
        return buf.getvalue()


def run_gda(x0: float, y0: float, step: float, n_iters: int, clip: float | None = None) -> GdaTrace:
    """Iterate GDA, recording n = 0..n_iters.

    The divergence flag trips the first time the norm exceeds 10x the initial
    norm. ``clip`` switches to the box-projected variant (display only).
    """
    if n_iters < 1:
        raise ValueError("n_iters must be >= 1")
    state = GdaState(float(x0), float(y0), float(step))
    xs = np.empty(n_iters + 1)
    ys = np.empty(n_iters + 1)
    xs[0], ys[0] = state.x, state.y
    limit = 10.0 * state.norm
    first = None
    for k in range(1, n_iters + 1):
        state = gda_step(state) if clip is None else clipped_gda_step(state, clip)
        xs[k], ys[k] = state.x, state.y
        if first is None and state.norm > limit:
            first = k
    return GdaTrace(np.arange(n_iters + 1), xs, ys, first is not None, first)
