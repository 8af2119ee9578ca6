"""Two-player zero-sum games: finite matrix games and the bilinear interval game.

Payoffs are always stored from the point of view of player 1 (the maximizer).
Player 2 receives the negation, so the zero-sum property holds by construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

SUM_TOL = 1e-12


class MixedStrategy:
    """Probability vector over a finite set of pure strategies."""

    __slots__ = ("probs",)

    def __init__(self, probs: Sequence[float] | np.ndarray):
        p = np.array(probs, dtype=float).ravel()
        if p.size == 0:
            raise ValueError("mixed strategy needs at least one pure strategy")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValueError(f"weights must be finite and nonnegative, got {p}")
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"weights must sum to 1, got sum {p.sum()!r}")
        p.setflags(write=False)
        self.probs = p

    @classmethod
    def pure(cls, index: int, size: int) -> "MixedStrategy":
        p = np.zeros(size)
        p[index] = 1.0
        return cls(p)

    @classmethod
    def uniform(cls, size: int) -> "MixedStrategy":
        return cls(np.full(size, 1.0 / size))

    def __len__(self) -> int:
        return self.probs.size

    def __repr__(self) -> str:
        return f"MixedStrategy({self.probs.tolist()})"


def _as_probs(mu: MixedStrategy | Sequence[float] | np.ndarray) -> np.ndarray:
    if isinstance(mu, MixedStrategy):
        return mu.probs
    return MixedStrategy(mu).probs


@dataclass(frozen=True)
class FiniteZeroSumGame:
    """Matrix game; ``payoff[i, j]`` is player 1's utility for row i vs column j."""

    payoff: np.ndarray

    def __post_init__(self):
        a = np.array(self.payoff, dtype=float)
        if a.ndim != 2 or 0 in a.shape:
            raise ValueError(f"payoff must be a nonempty 2-D matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("payoff entries must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "payoff", a)

    @property
    def shape(self) -> tuple[int, int]:
        return self.payoff.shape

    def _check(self, p1: np.ndarray, p2: np.ndarray) -> None:
        m1, m2 = self.payoff.shape
        if p1.size != m1 or p2.size != m2:
            raise ValueError(
                f"strategy sizes ({p1.size}, {p2.size}) do not match payoff {self.payoff.shape}"
            )


@dataclass(frozen=True)
class BilinearIntervalGame:
    """u(x, y) = x*y on a box; player 1 picks x to maximize, player 2 picks y to minimize."""

    x_lo: float = -10.0
    x_hi: float = 10.0
    y_lo: float = -10.0
    y_hi: float = 10.0

    def __post_init__(self):
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise ValueError("interval bounds must satisfy lo < hi")

    def utility(self, x: float, y: float) -> float:
        return x * y

    def restricted(self) -> FiniteZeroSumGame:
        """Matrix game over the box corners, rows (x_lo, x_hi) and columns (y_lo, y_hi)."""
        xs = np.array([self.x_lo, self.x_hi])
        ys = np.array([self.y_lo, self.y_hi])
        return FiniteZeroSumGame(np.outer(xs, ys))


def expected_utility(game: FiniteZeroSumGame, mu1, mu2) -> float:
    """Player 1's expected payoff sum_ij A[i,j] mu1[i] mu2[j]."""
    p1, p2 = _as_probs(mu1), _as_probs(mu2)
    game._check(p1, p2)
    return float(p1 @ game.payoff @ p2)


def best_response_pure(game: FiniteZeroSumGame, player: int, opponent_mix) -> int:
    """Lowest-index pure best response of ``player`` against the opponent's mix."""
    q = _as_probs(opponent_mix)
    m1, m2 = game.shape
    if player == 1:
        if q.size != m2:
            raise ValueError(f"opponent mix has size {q.size}, expected {m2}")
        # np.argmax/argmin return the first extremum, which is the tie-break we want
        return int(np.argmax(game.payoff @ q))
    if player == 2:
        if q.size != m1:
            raise ValueError(f"opponent mix has size {q.size}, expected {m1}")
        return int(np.argmin(q @ game.payoff))
    raise ValueError(f"player must be 1 or 2, got {player}")


def bilinear_best_response(game: BilinearIntervalGame, player: int, opponent_empirical_mean: float) -> float:
    """Best response in the x*y game to the opponent's mean action.

    A zero mean makes every action optimal; 0.0 is returned in that case.
    """
    m = float(opponent_empirical_mean)
    if not math.isfinite(m):
        raise ValueError("opponent mean must be finite")
    if player == 1:
        if m > 0:
            return game.x_hi
        if m < 0:
            return game.x_lo
        return 0.0
    if player == 2:
        if m > 0:
            return game.y_lo
        if m < 0:
            return game.y_hi
        return 0.0
    raise ValueError(f"player must be 1 or 2, got {player}")


def game_value_bounds(game: FiniteZeroSumGame, mu1, mu2) -> tuple[float, float]:
    """Certified bracket (lower, upper) on the value of the game.

    ``lower`` is what mu1 guarantees against any column, ``upper`` is what mu2
    concedes to the best row. The true value always lies in between.
    """
    p1, p2 = _as_probs(mu1), _as_probs(mu2)
    game._check(p1, p2)
    lower = float(np.min(p1 @ game.payoff))
    upper = float(np.max(game.payoff @ p2))
    return lower, upper


def epsilon_nash_check(game: FiniteZeroSumGame, mu1, mu2, eps: float) -> tuple[bool, float]:
    """Return (is_eps_nash, largest pure-deviation gain over both players)."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    p1, p2 = _as_probs(mu1), _as_probs(mu2)
    game._check(p1, p2)
    value = float(p1 @ game.payoff @ p2)
    gain1 = float(np.max(game.payoff @ p2)) - value
    gain2 = value - float(np.min(p1 @ game.payoff))
    gain = max(gain1, gain2, 0.0)
    return gain <= eps, gain


def load_game(source: str | Path | dict) -> FiniteZeroSumGame | BilinearIntervalGame:
    """Build a game from ``{"payoff": [[...]]}`` or ``{"bilinear": {"x": [lo, hi], "y": [lo, hi]}}``.

    ``source`` may be a dict, a path to a JSON file, or a JSON string.
    """
    if isinstance(source, dict):
        doc = source
    else:
        text = str(source)
        path = Path(text)
        if not text.lstrip().startswith("{") and path.exists():
            text = path.read_text()
        doc = json.loads(text)
    if "payoff" in doc:
        return FiniteZeroSumGame(np.asarray(doc["payoff"], dtype=float))
    if "bilinear" in doc:
        b = doc["bilinear"]
        (x_lo, x_hi), (y_lo, y_hi) = b["x"], b["y"]
        return BilinearIntervalGame(float(x_lo), float(x_hi), float(y_lo), float(y_hi))
    raise ValueError("game document needs a 'payoff' or 'bilinear' key")


def dump_game(game: FiniteZeroSumGame | BilinearIntervalGame) -> dict:
    if isinstance(game, FiniteZeroSumGame):
        return {"payoff": game.payoff.tolist()}
    return {"bilinear": {"x": [game.x_lo, game.x_hi], "y": [game.y_lo, game.y_hi]}}
