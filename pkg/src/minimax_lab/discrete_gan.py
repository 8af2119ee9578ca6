"""The GAN game on a finite sample space, where both best responses are closed-form.

The discriminator's best response to a generated distribution is the density
ratio p_d / (p_d + p_g); the generator's best response to a discriminator (or a
mixture of discriminators) is a point mass wherever log(1 - D) is smallest.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

CLAMP = 1e-7
SUM_TOL = 1e-12


class SupportMismatchError(ValueError):
    pass


class CategoricalDist:
    """Probability mass function over a finite list of distinct labels."""

    __slots__ = ("support", "pmf")

    def __init__(self, pmf: Sequence[float] | np.ndarray, support: Sequence | None = None):
        p = np.array(pmf, dtype=float).ravel()
        if p.size == 0:
            raise ValueError("empty distribution")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValueError("pmf entries must be finite and nonnegative")
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"pmf must sum to 1, got {p.sum()!r}")
        labels = tuple(range(p.size)) if support is None else tuple(support)
        if len(labels) != p.size or len(set(labels)) != len(labels):
            raise ValueError("support must list one distinct label per pmf entry")
        p.setflags(write=False)
        self.support = labels
        self.pmf = p

    @classmethod
    def delta(cls, index: int, size: int, support: Sequence | None = None) -> "CategoricalDist":
        p = np.zeros(size)
        p[index] = 1.0
        return cls(p, support)

    @classmethod
    def bernoulli(cls, a: float) -> "CategoricalDist":
        """Distribution on labels (0, 1) with P(1) = a."""
        return cls([1.0 - a, a], (0, 1))

    def __len__(self) -> int:
        return self.pmf.size

    def __repr__(self) -> str:
        return f"CategoricalDist({self.pmf.tolist()}, support={list(self.support)})"


class DiscriminatorTable:
    """D(x) per support label, clamped into [CLAMP, 1 - CLAMP].

    ``raw`` keeps the unclamped values so closed-form checks can see D(1) = 1.
    """

    __slots__ = ("support", "values", "raw")

    def __init__(self, values: Sequence[float] | np.ndarray, support: Sequence | None = None):
        raw = np.array(values, dtype=float).ravel()
        if np.any(np.isnan(raw)):
            raise ValueError("discriminator values must not be NaN")
        v = np.clip(raw, CLAMP, 1.0 - CLAMP)
        raw.setflags(write=False)
        v.setflags(write=False)
        self.support = tuple(range(raw.size)) if support is None else tuple(support)
        self.raw = raw
        self.values = v

    @classmethod
    def constant(cls, value: float, size: int, support: Sequence | None = None) -> "DiscriminatorTable":
        return cls(np.full(size, float(value)), support)

    def __len__(self) -> int:
        return self.values.size

    def __repr__(self) -> str:
        return f"DiscriminatorTable({self.values.tolist()})"


def _same_support(*objs) -> None:
    first = objs[0].support
    for o in objs[1:]:
        if o.support != first:
            raise SupportMismatchError(f"supports differ: {first} vs {o.support}")


def gan_value(p_d: CategoricalDist, p_g: CategoricalDist, D: DiscriminatorTable) -> float:
    """V(p_g, D) = sum p_d log D + sum p_g log(1 - D), on the clamped table."""
    _same_support(p_d, p_g, D)
    return float(p_d.pmf @ np.log(D.values) + p_g.pmf @ np.log1p(-D.values))


def optimal_discriminator(p_d: CategoricalDist, p_g: CategoricalDist) -> DiscriminatorTable:
    """Pointwise maximizer p_d / (p_d + p_g); 1/2 where both masses vanish."""
    _same_support(p_d, p_g)
    return DiscriminatorTable(_ratio(p_d.pmf, p_g.pmf), p_d.support)


def _ratio(pd: np.ndarray, pg: np.ndarray) -> np.ndarray:
    den = pd + pg
    out = np.full(pd.shape, 0.5)
    pos = den > 0
    out[pos] = pd[pos] / den[pos]
    return out


def generator_best_response(D: DiscriminatorTable) -> CategoricalDist:
    """Point mass where log(1 - D) is smallest, i.e. where D is largest.

    Ties go to the lowest support index.
    """
    idx = int(np.argmin(np.log1p(-D.values)))
    return CategoricalDist.delta(idx, len(D), D.support)


def jsd(p: CategoricalDist, q: CategoricalDist) -> float:
    """Jensen-Shannon divergence in nats."""
    _same_support(p, q)
    return _jsd(p.pmf, q.pmf)


def _kl_to(a: np.ndarray, m: np.ndarray) -> float:
    nz = a > 0
    return float(np.sum(a[nz] * np.log(a[nz] / m[nz])))


def _jsd(a: np.ndarray, b: np.ndarray) -> float:
    m = 0.5 * (a + b)
    return 0.5 * _kl_to(a, m) + 0.5 * _kl_to(b, m)


def run_best_response_gan(p_d: CategoricalDist, init_pg: CategoricalDist, n_iters: int) -> list[CategoricalDist]:
    """Alternate exact best responses; entry 0 is ``init_pg``, entry t >= 1 the t-th generator.

    Each round fits D to the current generator, then moves the generator to
    its best response against that D.
    """
    if n_iters < 2:
        raise ValueError("n_iters must be >= 2")
    _same_support(p_d, init_pg)
    gens = [init_pg]
    for _ in range(1, n_iters):
        D = optimal_discriminator(p_d, gens[-1])
        gens.append(generator_best_response(D))
    return gens


@dataclass
class FictitiousGanTrace:
    """Rows n = 1..n_iters.

    ``pg[n-1]`` is the generator played at round n-1 (p_{g,n-1}); ``pbar[n-1]`` is
    the running mean of the first n generators; ``D[n-1]`` is D_n, the best
    response to ``pbar[n-1]``.
    """

    support: tuple
    pg: np.ndarray
    pbar: np.ndarray
    D: np.ndarray
    value: np.ndarray
    jsd: np.ndarray
    identity_residual: np.ndarray = field(repr=False)

    @property
    def n(self) -> np.ndarray:
        return np.arange(1, self.pbar.shape[0] + 1)

    def to_csv(self, every: int = 1) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        k = len(self.support)
        w.writerow(["n"] + [f"pbar_g_{i}" for i in range(k)] + [f"D_{i}" for i in range(k)] + ["V", "JSD"])
        rows = range(0, self.pbar.shape[0], every)
        for r in rows:
            w.writerow(
                [r + 1]
                + [repr(float(v)) for v in self.pbar[r]]
                + [repr(float(v)) for v in self.D[r]]
                + [repr(float(self.value[r])), repr(float(self.jsd[r]))]
            )
        return buf.getvalue()


def run_fictitious_gan_discrete(
    p_d: CategoricalDist,
    init_pg: CategoricalDist,
    init_D: DiscriminatorTable,
    n_iters: int,
) -> FictitiousGanTrace:
    """Fictitious play between exact best responses on a finite space.

    Round 0 plays (init_pg, init_D). At round w >= 1 the generator best-responds
    to the uniform mixture of D_0..D_{w-1} and the discriminator to the mean of
    p_{g,0}..p_{g,w-1}. Mixing discriminators means averaging log(1 - D), since
    V is linear in that term.

    The generator keeps its previous distribution while that distribution is
    still a best response (it always is at the equilibrium); otherwise it moves
    to a point mass at the lowest-index minimizer.
    """
    if n_iters < 1:
        raise ValueError("n_iters must be >= 1")
    _same_support(p_d, init_pg, init_D)
    k = len(p_d)
    pd = p_d.pmf
    mass = np.zeros(k)  # sum of generator pmfs, exact multiples of 1 for delta responses
    log1m_sum = np.zeros(k)  # sum over past discriminators of log(1 - D_w)
    pg_rows = np.empty((n_iters, k))
    pbar_rows = np.empty((n_iters, k))
    d_rows = np.empty((n_iters, k))

    pg = init_pg.pmf
    d_cur = np.clip(init_D.values, CLAMP, 1.0 - CLAMP)
    den = np.empty(k)
    scratch = np.empty(k)
    tol = 1e-12
    for r in range(n_iters):
        if r > 0:
            # (1/r) factor dropped: it does not move the minimizer
            g = int(log1m_sum.argmin())
            best = log1m_sum[g]
            if pg @ log1m_sum > best + tol * max(1.0, abs(best)):
                pg = np.zeros(k)
                pg[g] = 1.0
        np.negative(d_cur, out=scratch)
        log1m_sum += np.log1p(scratch, out=scratch)
        mass += pg
        pbar = pbar_rows[r]
        np.divide(mass, r + 1, out=pbar)
        np.add(pd, pbar, out=den)
        d_raw = d_rows[r]
        d_raw.fill(0.5)
        np.divide(pd, den, out=d_raw, where=den > 0)
        np.maximum(d_raw, CLAMP, out=d_cur)
        np.minimum(d_cur, 1.0 - CLAMP, out=d_cur)
        pg_rows[r] = pg

    val = _exact_values(pd, pbar_rows, d_rows)
    js = _jsd_rows(pbar_rows, pd)
    resid = val - (2.0 * js - math.log(4.0))
    d_clamped = np.clip(d_rows, CLAMP, 1.0 - CLAMP)
    return FictitiousGanTrace(p_d.support, pg_rows, pbar_rows, d_clamped, val, js, resid)


def _xlogy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a * log(b) with the 0 * log(0) = 0 convention."""
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
    a = np.broadcast_to(a, out.shape)
    b = np.broadcast_to(b, out.shape)
    nz = a > 0
    out[nz] = a[nz] * np.log(b[nz])
    return out


def _exact_values(pd: np.ndarray, pbar_rows: np.ndarray, d_rows: np.ndarray) -> np.ndarray:
    # V at the unclamped optimal discriminator; D hits exactly 1 where pbar is 0
    return _xlogy(pd, d_rows).sum(axis=1) + _xlogy(pbar_rows, 1.0 - d_rows).sum(axis=1)


def _jsd_rows(p_rows: np.ndarray, q: np.ndarray) -> np.ndarray:
    m = 0.5 * (p_rows + q)
    kl_p = _xlogy(p_rows, np.divide(p_rows, m, out=np.ones_like(m), where=m > 0)).sum(axis=1)
    kl_q = _xlogy(np.broadcast_to(q, m.shape), np.divide(q, m, out=np.ones_like(m), where=m > 0)).sum(axis=1)
    return 0.5 * kl_p + 0.5 * kl_q


def identity_x_init(size: int = 2) -> DiscriminatorTable:
    """D(x) = x read on the support {0, 1} (then clamped)."""
    if size != 2:
        raise ValueError("D(x) = x is only defined here on the Bernoulli support {0, 1}")
    return DiscriminatorTable([0.0, 1.0], (0, 1))


def random_pmf(rng: np.random.Generator, size: int) -> CategoricalDist:
    """Dirichlet(1) draw, renormalized so the sum is 1 to machine precision."""
    p = rng.dirichlet(np.ones(size))
    p = p / p.sum()
    return CategoricalDist(p)
