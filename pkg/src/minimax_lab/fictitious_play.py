"""Fictitious play for finite matrix games and the bilinear interval game.

Both players move simultaneously: at round n each one best-responds to the
empirical distribution of the opponent's first n actions (rounds 0..n-1).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .games import BilinearIntervalGame, FiniteZeroSumGame, bilinear_best_response

Game = FiniteZeroSumGame | BilinearIntervalGame


class InvalidStateError(RuntimeError):
    pass


@dataclass(frozen=True)
class FictitiousPlayState:
    """Immutable snapshot of a fictitious-play run after ``n`` rounds.

    For finite games ``history1``/``history2`` hold pure-strategy indices and
    ``counts1``/``counts2`` the integer play counts. For the bilinear game the
    histories hold real actions and ``sum1``/``sum2`` their running sums.
    """

    n: int = 0
    history1: tuple = ()
    history2: tuple = ()
    counts1: tuple[int, ...] = ()
    counts2: tuple[int, ...] = ()
    sum1: float = 0.0
    sum2: float = 0.0
    utility_sum: float = 0.0

    @classmethod
    def empty(cls, game: Game) -> "FictitiousPlayState":
        if isinstance(game, FiniteZeroSumGame):
            m1, m2 = game.shape
            return cls(counts1=(0,) * m1, counts2=(0,) * m2)
        return cls()

    def empirical(self, player: int) -> np.ndarray:
        """Empirical mixed strategy (finite games only): counts / n."""
        if self.n == 0:
            raise InvalidStateError("no empirical strategy before the first round")
        counts = self.counts1 if player == 1 else self.counts2
        return np.asarray(counts, dtype=float) / self.n

    def mean_action(self, player: int) -> float:
        if self.n == 0:
            raise InvalidStateError("no mean action before the first round")
        return (self.sum1 if player == 1 else self.sum2) / self.n

    @property
    def average_utility(self) -> float:
        return self.utility_sum / self.n


def _finite_responses(payoff: np.ndarray, c1: np.ndarray, c2: np.ndarray) -> tuple[int, int]:
    # argmax/argmin over unnormalized counts: same maximizer as counts/n, and exact
    # for integer payoffs so that ties resolve to the lowest index reliably
    return int(np.argmax(payoff @ c2)), int(np.argmin(c1 @ payoff))


def fp_step(state: FictitiousPlayState, game: Game, init_actions: Sequence | None = None) -> FictitiousPlayState:
    """Advance one simultaneous round and return the new state.

    At ``n == 0`` there is nothing to respond to, so ``init_actions`` must
    supply the opening pair.
    """
    finite = isinstance(game, FiniteZeroSumGame)
    if state.n == 0:
        if init_actions is None:
            raise InvalidStateError("the first round needs explicit initial actions")
        a1, a2 = init_actions
        if finite:
            m1, m2 = game.shape
            a1, a2 = int(a1), int(a2)
            if not (0 <= a1 < m1 and 0 <= a2 < m2):
                raise ValueError(f"initial actions {init_actions} outside game of shape {game.shape}")
    elif finite:
        a1, a2 = _finite_responses(game.payoff, np.asarray(state.counts1), np.asarray(state.counts2))
    else:
        a1 = bilinear_best_response(game, 1, state.mean_action(2))
        a2 = bilinear_best_response(game, 2, state.mean_action(1))

    if finite:
        c1 = list(state.counts1 or (0,) * game.shape[0])
        c2 = list(state.counts2 or (0,) * game.shape[1])
        c1[a1] += 1
        c2[a2] += 1
        u = float(game.payoff[a1, a2])
        return replace(
            state,
            n=state.n + 1,
            history1=state.history1 + (a1,),
            history2=state.history2 + (a2,),
            counts1=tuple(c1),
            counts2=tuple(c2),
            utility_sum=state.utility_sum + u,
        )
    a1, a2 = float(a1), float(a2)
    return replace(
        state,
        n=state.n + 1,
        history1=state.history1 + (a1,),
        history2=state.history2 + (a2,),
        sum1=state.sum1 + a1,
        sum2=state.sum2 + a2,
        utility_sum=state.utility_sum + game.utility(a1, a2),
    )


@dataclass
class FpTrace:
    """Per-round record for n = 1..n_iters.

    ``emp1``/``emp2`` are empirical strategies (finite games) or empirical
    frequencies of (lo, hi) endpoints (bilinear game). ``avg_utility`` is the
    realized average (1/n) sum_k u(s1^k, s2^k); ``exp_utility`` is the expected
    utility of the empirical mixed profile.
    """

    n: np.ndarray
    emp1: np.ndarray
    emp2: np.ndarray
    avg_utility: np.ndarray
    exp_utility: np.ndarray
    bound_lo: np.ndarray
    bound_hi: np.ndarray
    actions1: np.ndarray
    actions2: np.ndarray
    final_state: FictitiousPlayState | None = field(default=None, repr=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = (
            ["n"]
            + [f"emp_p1_{i}" for i in range(self.emp1.shape[1])]
            + [f"emp_p2_{j}" for j in range(self.emp2.shape[1])]
            + ["avg_utility", "bound_lo", "bound_hi"]
        )
        w.writerow(header)
        for k in range(self.n.size):
            w.writerow(
                [int(self.n[k])]
                + [repr(float(v)) for v in self.emp1[k]]
                + [repr(float(v)) for v in self.emp2[k]]
                + [repr(float(self.avg_utility[k])), repr(float(self.bound_lo[k])), repr(float(self.bound_hi[k]))]
            )
        return buf.getvalue()


def run_fp(game: Game, n_iters: int, init_actions: Sequence | None = None) -> FpTrace:
    """Run fictitious play for ``n_iters`` rounds (the opening round included).

    Defaults for ``init_actions``: (0, 0) for finite games, (0.1, 0.1) for the
    bilinear game.
    """
    if n_iters < 1:
        raise ValueError("n_iters must be >= 1")
    if isinstance(game, FiniteZeroSumGame):
        return _run_finite(game, n_iters, (0, 0) if init_actions is None else init_actions)
    return _run_bilinear(game, n_iters, (0.1, 0.1) if init_actions is None else init_actions)


def _run_finite(game: FiniteZeroSumGame, n_iters: int, init_actions) -> FpTrace:
    A = game.payoff
    m1, m2 = A.shape
    c1 = np.zeros(m1)
    c2 = np.zeros(m2)
    emp1 = np.empty((n_iters, m1))
    emp2 = np.empty((n_iters, m2))
    avg = np.empty(n_iters)
    exp_u = np.empty(n_iters)
    lo = np.empty(n_iters)
    hi = np.empty(n_iters)
    acts1 = np.empty(n_iters, dtype=int)
    acts2 = np.empty(n_iters, dtype=int)
    state = fp_step(FictitiousPlayState.empty(game), game, init_actions)
    a1, a2 = state.history1[0], state.history2[0]
    usum = 0.0
    for k in range(n_iters):
        if k > 0:
            a1, a2 = _finite_responses(A, c1, c2)
        c1[a1] += 1
        c2[a2] += 1
        usum += A[a1, a2]
        n = k + 1
        p1, p2 = c1 / n, c2 / n
        emp1[k], emp2[k] = p1, p2
        acts1[k], acts2[k] = a1, a2
        avg[k] = usum / n
        exp_u[k] = p1 @ A @ p2
        lo[k] = np.min(p1 @ A)
        hi[k] = np.max(A @ p2)
    final = FictitiousPlayState(
        n=n_iters,
        history1=tuple(int(a) for a in acts1),
        history2=tuple(int(a) for a in acts2),
        counts1=tuple(int(c) for c in c1),
        counts2=tuple(int(c) for c in c2),
        utility_sum=usum,
    )
    return FpTrace(np.arange(1, n_iters + 1), emp1, emp2, avg, exp_u, lo, hi, acts1, acts2, final)


def _run_bilinear(game: BilinearIntervalGame, n_iters: int, init_actions) -> FpTrace:
    x, y = float(init_actions[0]), float(init_actions[1])
    sx = sy = usum = 0.0
    hx = hy = lx = ly = 0
    xs = np.empty(n_iters)
    ys = np.empty(n_iters)
    emp1 = np.empty((n_iters, 2))
    emp2 = np.empty((n_iters, 2))
    avg = np.empty(n_iters)
    exp_u = np.empty(n_iters)
    lo = np.empty(n_iters)
    hi = np.empty(n_iters)
    for k in range(n_iters):
        if k > 0:
            x = bilinear_best_response(game, 1, sy / k)
            y = bilinear_best_response(game, 2, sx / k)
        xs[k], ys[k] = x, y
        sx += x
        sy += y
        usum += game.utility(x, y)
        lx += x == game.x_lo
        hx += x == game.x_hi
        ly += y == game.y_lo
        hy += y == game.y_hi
        n = k + 1
        emp1[k] = (lx / n, hx / n)
        emp2[k] = (ly / n, hy / n)
        avg[k] = usum / n
        mx, my = sx / n, sy / n
        # u is bilinear, so the empirical profile's expected utility is mean(x)*mean(y)
        exp_u[k] = mx * my
        lo[k] = min(mx * game.y_lo, mx * game.y_hi)
        hi[k] = max(game.x_lo * my, game.x_hi * my)
    final = FictitiousPlayState(
        n=n_iters,
        history1=tuple(float(v) for v in xs),
        history2=tuple(float(v) for v in ys),
        sum1=sx,
        sum2=sy,
        utility_sum=usum,
    )
    return FpTrace(np.arange(1, n_iters + 1), emp1, emp2, avg, exp_u, lo, hi, xs, ys, final)


def endpoint_mixture(trace: FpTrace, player: int) -> np.ndarray:
    """Empirical (lo, hi) frequencies renormalized over the two endpoints only."""
    e = (trace.emp1 if player == 1 else trace.emp2)[-1]
    total = e.sum()
    if total == 0:
        raise InvalidStateError("player never played an endpoint")
    return e / total
