"""GAN variants as zero-sum games: V = E_pd f0(D) + E_pg f1(D).

Six rows: KL, reverse KL, Pearson chi^2, squared Hellinger, Jensen-Shannon and
WGAN, each with its expected optimal discriminator and game value at p_g = p_d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .discrete_gan import CategoricalDist, _same_support

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
GOLDEN_TOL = 1e-8
# open-interval domains are searched on this margin inside the endpoints
_EDGE = 1e-12


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class DivergenceSpec:
    name: str
    f0: Callable[[np.ndarray], np.ndarray]
    f1: Callable[[np.ndarray], np.ndarray]
    df0: Callable[[np.ndarray], np.ndarray]
    df1: Callable[[np.ndarray], np.ndarray]
    d_domain: tuple[float, float]
    open_lo: bool
    open_hi: bool
    d_star: float
    game_value: float

    def in_domain(self, d) -> bool:
        d = np.asarray(d, dtype=float)
        lo, hi = self.d_domain
        ok_lo = d > lo if self.open_lo else d >= lo
        ok_hi = d < hi if self.open_hi else d <= hi
        return bool(np.all(ok_lo & ok_hi & np.isfinite(d)))


_REGISTRY: tuple[DivergenceSpec, ...] = (
    DivergenceSpec(
        "Kullback-Leibler",
        f0=np.log, f1=lambda d: 1.0 - d,
        df0=lambda d: 1.0 / d, df1=lambda d: -np.ones_like(d),
        # closed at 1 so that D* = 1 itself is admissible
        d_domain=(0.0, 1.0), open_lo=True, open_hi=False,
        d_star=1.0, game_value=0.0,
    ),
    DivergenceSpec(
        "Reverse KL",
        f0=lambda d: -d, f1=np.log,
        df0=lambda d: -np.ones_like(d), df1=lambda d: 1.0 / d,
        d_domain=(0.0, math.inf), open_lo=True, open_hi=True,
        d_star=1.0, game_value=-1.0,
    ),
    DivergenceSpec(
        "Pearson chi^2",
        f0=lambda d: d, f1=lambda d: -0.25 * d * d - d,
        df0=lambda d: np.ones_like(d), df1=lambda d: -0.5 * d - 1.0,
        d_domain=(-1e3, 1e3), open_lo=False, open_hi=False,
        d_star=0.0, game_value=0.0,
    ),
    DivergenceSpec(
        "Squared Hellinger",
        f0=lambda d: 1.0 - d, f1=lambda d: 1.0 - 1.0 / d,
        df0=lambda d: -np.ones_like(d), df1=lambda d: 1.0 / (d * d),
        d_domain=(0.0, math.inf), open_lo=True, open_hi=True,
        d_star=1.0, game_value=0.0,
    ),
    DivergenceSpec(
        "Jensen-Shannon",
        f0=np.log, f1=lambda d: np.log1p(-d),
        df0=lambda d: 1.0 / d, df1=lambda d: -1.0 / (1.0 - d),
        d_domain=(0.0, 1.0), open_lo=True, open_hi=True,
        d_star=0.5, game_value=-math.log(4.0),
    ),
    DivergenceSpec(
        "WGAN",
        f0=lambda d: d, f1=lambda d: -d,
        df0=lambda d: np.ones_like(d), df1=lambda d: -np.ones_like(d),
        d_domain=(-1e3, 1e3), open_lo=False, open_hi=False,
        d_star=0.0, game_value=0.0,
    ),
)

_ALIASES = {
    "kl": "Kullback-Leibler",
    "reverse-kl": "Reverse KL",
    "pearson": "Pearson chi^2",
    "hellinger": "Squared Hellinger",
    "squared-hellinger": "Squared Hellinger",
    "js": "Jensen-Shannon",
    "jensen-shannon": "Jensen-Shannon",
    "wgan": "WGAN",
}


def registry() -> list[DivergenceSpec]:
    return list(_REGISTRY)


def get_spec(name: str) -> DivergenceSpec:
    target = _ALIASES.get(name.lower(), name)
    for spec in _REGISTRY:
        if spec.name.lower() == target.lower():
            return spec
    raise KeyError(f"unknown divergence {name!r}")


def eval_objective(spec: DivergenceSpec, p_d: CategoricalDist, p_g: CategoricalDist, D) -> float:
    """sum_x p_d(x) f0(D(x)) + p_g(x) f1(D(x)).

    ``D`` is a sequence of raw discriminator outputs, or anything with a
    ``values`` array (no clamping is applied here; the domain is checked).
    """
    _same_support(p_d, p_g)
    d = np.asarray(getattr(D, "values", D), dtype=float).ravel()
    if d.size != len(p_d):
        raise ValueError(f"discriminator has {d.size} values, support has {len(p_d)}")
    if not spec.in_domain(d):
        raise DomainError(f"{spec.name}: discriminator values {d} outside domain {spec.d_domain}")
    return float(p_d.pmf @ spec.f0(d) + p_g.pmf @ spec.f1(d))


def _search_interval(spec: DivergenceSpec, pd: float, pg: float) -> tuple[float, float]:
    lo, hi = spec.d_domain
    if spec.open_lo:
        lo = lo + _EDGE
    if math.isinf(hi):
        # the integrand is concave with a finite maximizer; double until the
        # derivative turns negative to get a finite bracket
        hi = 1.0
        while pd * spec.df0(np.float64(hi)) + pg * spec.df1(np.float64(hi)) > 0 and hi < 1e12:
            hi *= 2.0
    elif spec.open_hi:
        hi = hi - _EDGE
    return lo, hi


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = GOLDEN_TOL) -> float:
    """Maximizer of a unimodal function on [lo, hi], to absolute tolerance ``tol``."""
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def pointwise_optimal_d(spec: DivergenceSpec, pd_mass: float, pg_mass: float) -> float:
    """Maximizer over the domain of pd*f0(D) + pg*f1(D).

    WGAN has a linear integrand and no pointwise maximizer without the
    Lipschitz constraint; it returns the conventional 0.
    """
    if pd_mass < 0 or pg_mass < 0 or pd_mass + pg_mass <= 0:
        raise ValueError("masses must be nonnegative with a positive sum")
    if spec.name == "WGAN":
        return 0.0
    lo, hi = _search_interval(spec, pd_mass, pg_mass)

    def integrand(d: float) -> float:
        d = np.float64(d)
        return float(pd_mass * spec.f0(d) + pg_mass * spec.f1(d))

    return golden_section_max(integrand, lo, hi)


@dataclass
class FixedPointReport:
    name: str
    d_star_expected: float
    d_star_computed: np.ndarray
    value_expected: float
    value_computed: float
    d_residual: float
    value_residual: float
    d_star_ok: bool
    value_ok: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "d_star_expected": self.d_star_expected,
            "d_star_computed": float(np.mean(self.d_star_computed)),
            "value_expected": self.value_expected,
            "value_computed": self.value_computed,
            "d_residual": self.d_residual,
            "value_residual": self.value_residual,
            "d_star_ok": self.d_star_ok,
            "value_ok": self.value_ok,
        }


def check_fixed_point(spec: DivergenceSpec, rng: np.random.Generator | None = None, size: int = 8, tol: float = 1e-6) -> FixedPointReport:
    """Verify D* and the game value at p_g = p_d for a random p_d."""
    rng = np.random.default_rng(0) if rng is None else rng
    p = rng.dirichlet(np.ones(size))
    p_d = CategoricalDist(p / p.sum())
    d = np.array([pointwise_optimal_d(spec, m, m) for m in p_d.pmf])
    value = eval_objective(spec, p_d, p_d, d)
    d_res = float(np.max(np.abs(d - spec.d_star)))
    v_res = abs(value - spec.game_value)
    return FixedPointReport(
        spec.name, spec.d_star, d, spec.game_value, value, d_res, v_res, d_res <= tol, v_res <= tol
    )


def format_table(reports: list[FixedPointReport]) -> str:
    head = f"{'divergence':<20} {'D* exp':>8} {'D* got':>12} {'value exp':>10} {'value got':>13} {'d_res':>9} {'v_res':>9}"
    lines = [head, "-" * len(head)]
    for r in reports:
        lines.append(
            f"{r.name:<20} {r.d_star_expected:>8.4g} {float(np.mean(r.d_star_computed)):>12.8f} "
            f"{r.value_expected:>10.6f} {r.value_computed:>13.9f} {r.d_residual:>9.1e} {r.value_residual:>9.1e}"
        )
    return "\n".join(lines)
