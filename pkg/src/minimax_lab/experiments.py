"""Named experiments: each runs one dynamics, emits traces and a pass/fail summary.

An experiment is a pure function of its validated config. Outputs are built
in memory and written only after the run succeeds, so a failed or rejected
run leaves no partial files behind.
"""

from __future__ import annotations

import json
import math
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import criteria
from .criteria import check
from .discrete_gan import (
    CategoricalDist,
    DiscriminatorTable,
    gan_value,
    identity_x_init,
    random_pmf,
    run_best_response_gan,
    run_fictitious_gan_discrete,
)
from .fgan import check_fixed_point, format_table, get_spec
from .fictitious_play import endpoint_mixture, run_fp
from .games import BilinearIntervalGame, epsilon_nash_check
from .gda import closed_form_path, run_gda
from .svg import line_plot, scatter_plot

THREADS_ENV = "MINIMAX_LAB_THREADS"


class ConfigError(ValueError):
    """Rejected experiment configuration."""


@dataclass(frozen=True)
class Param:
    default: Any
    kind: type
    minimum: float | None = None
    maximum: float | None = None
    exclusive_min: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    seed: int = 0
    params: dict = field(default_factory=dict)
    svg: bool = False


@dataclass
class ExperimentResult:
    name: str
    summary: dict
    files: dict[str, str]
    report: str

    @property
    def passed(self) -> bool:
        return criteria.all_pass(self.summary)


# --- individual experiments -------------------------------------------------

def _example1_br(p: dict, seed: int, svg: bool) -> tuple[dict, dict, str]:
    gens = run_best_response_gan(CategoricalDist.bernoulli(p["a"]), CategoricalDist.bernoulli(p["init"]), p["iters"])
    pmfs = np.array([g.pmf for g in gens])
    expected = np.array([[0.0, 1.0] if t % 2 == 1 else [1.0, 0.0] for t in range(1, len(gens))])
    mismatches = int(np.sum(np.any(pmfs[1:] != expected, axis=1)))
    rows = ["t,pg_0,pg_1"] + [f"{t},{repr(float(a))},{repr(float(b))}" for t, (a, b) in enumerate(pmfs)]
    files = {"trace.csv": "\n".join(rows) + "\n"}
    if svg:
        files["trace.svg"] = line_plot(np.arange(len(gens)), {"p_g(1)": pmfs[:, 1]}, "best-response generator")
    summary = {"alternation_mismatches": check("example1-br.alternation_mismatches", mismatches)}
    note = f"p_g(1) over the last 6 rounds: {pmfs[-6:, 1].tolist()}"
    return summary, files, note


def _example1_fp(p: dict, seed: int, svg: bool) -> tuple[dict, dict, str]:
    p_d = CategoricalDist.bernoulli(p["a"])
    tr = run_fictitious_gan_discrete(p_d, CategoricalDist.bernoulli(p["init"]), identity_x_init(), p["iters"])
    l1 = float(np.abs(tr.pbar[-1] - p_d.pmf).sum())
    on = p_d.pmf > 0
    d_last = tr.D[-1][on]
    worst = float(d_last[np.argmax(np.abs(d_last - 0.5))])
    files = {"trace.csv": tr.to_csv()}
    if svg:
        files["trace.svg"] = line_plot(tr.n, {"pbar_g(1)": tr.pbar[:, 1], "D(0)": tr.D[:, 0], "D(1)": tr.D[:, 1]}, "fictitious play, Bernoulli data")
    summary = {
        "pbar_l1": check("example1-fp.pbar_l1", l1),
        "d_gap": check("example1-fp.d_gap", worst),
    }
    checkpoints = [n for n in (100, 1000, 2000, 5000, 10_000) if n <= p["iters"]]
    note = "||pbar - p_d||_1 at " + ", ".join(f"n={n}: {np.abs(tr.pbar[n - 1] - p_d.pmf).sum():.4g}" for n in checkpoints)
    return summary, files, note


def _example2_gda(p: dict, seed: int, svg: bool) -> tuple[dict, dict, str]:
    step = p["step"]
    tr = run_gda(p["x0"], p["y0"], step, p["iters"])
    norm = tr.norm
    ratio_dev = float(np.max(np.abs(norm[1:] / norm[:-1] / math.sqrt(1.0 + step * step) - 1.0)))
    n_max = min(p["closed_form_max_n"], p["iters"])
    cx, cy = closed_form_path(p["x0"], p["y0"], step, n_max)
    gaps = np.hypot(cx - tr.x[: n_max + 1], cy - tr.y[: n_max + 1]) / norm[: n_max + 1]
    files = {"trace.csv": tr.to_csv(every=p["csv_every"])}
    if svg:
        files["trace.svg"] = line_plot(tr.n, {"x": tr.x, "y": tr.y}, "gradient descent-ascent on xy")
    summary = {
        "norm_ratio": check("example2-gda.norm_ratio", ratio_dev),
        "closed_form": check("example2-gda.closed_form", float(max(gaps))),
        "divergence_flag": check("example2-gda.divergence_flag", bool(tr.divergence_flag)),
    }
    note = f"flag tripped at n = {tr.divergence_step}; final norm / initial = {norm[-1] / norm[0]:.6g}"
    return summary, files, note


def _example2_fp(p: dict, seed: int, svg: bool) -> tuple[dict, dict, str]:
    game = BilinearIntervalGame()
    tr = run_fp(game, p["iters"], (p["x0"], p["y0"]))
    mu1, mu2 = endpoint_mixture(tr, 1), endpoint_mixture(tr, 2)
    _, gain = epsilon_nash_check(game.restricted(), mu1, mu2, 0.3)
    files = {"trace.csv": tr.to_csv()}
    if svg:
        files["trace.svg"] = line_plot(tr.n, {"freq x=+10": tr.emp1[:, 1], "freq y=+10": tr.emp2[:, 1]}, "fictitious play on xy")
    summary = {
        "freq_p1": check("example2-fp.freq_p1", float(tr.emp1[-1][1])),
        "freq_p2": check("example2-fp.freq_p2", float(tr.emp2[-1][1])),
        "avg_utility": check("example2-fp.avg_utility", float(tr.avg_utility[-1])),
        "eps_nash_gain": check("example2-fp.eps_nash_gain", float(gain)),
    }
    note = (
        f"expected utility of the empirical profile: {tr.exp_utility[-1]:.6g}; "
        f"value bounds [{tr.bound_lo[-1]:.6g}, {tr.bound_hi[-1]:.6g}]"
    )
    return summary, files, note


def _gan_discrete(p: dict, seed: int, svg: bool) -> tuple[dict, dict, str]:
    vrng = np.random.default_rng([seed, 1])
    worst_value = 0.0
    for _ in range(p["value_trials"]):
        pd = random_pmf(vrng, int(vrng.integers(2, 17)))
        v = gan_value(pd, pd, DiscriminatorTable.constant(0.5, len(pd)))
        worst_value = max(worst_value, abs(v + math.log(4.0)))

    rows = ["run,jsd_final,max_identity_residual"]
    jsds, resids, first = [], [], None
    for i in range(p["n_dists"]):
        rng = np.random.default_rng([seed, 2, i])
        p_d = random_pmf(rng, p["size"])
        init = random_pmf(rng, p["size"])
        tr = run_fictitious_gan_discrete(p_d, init, DiscriminatorTable.constant(0.5, p["size"]), p["iters"])
        jsds.append(float(tr.jsd[-1]))
        resids.append(float(np.max(np.abs(tr.identity_residual))))
        rows.append(f"{i},{jsds[-1]!r},{resids[-1]!r}")
        first = tr if first is None else first
    files = {"runs.csv": "\n".join(rows) + "\n", "trace_run0.csv": first.to_csv(every=p["csv_every"])}
    if svg:
        files["jsd_run0.svg"] = line_plot(first.n, {"JSD": first.jsd}, "JSD(pbar_g || p_d), run 0")
    summary = {
        "value_at_half": check("gan-discrete.value_at_half", worst_value),
        "jsd_final": check("gan-discrete.jsd_final", max(jsds)),
        "identity_residual": check("gan-discrete.identity_residual", max(resids)),
    }
    note = f"median final JSD {statistics.median(jsds):.3g} over {len(jsds)} runs"
    return summary, files, note


def _fgan_table(p: dict, seed: int, svg: bool) -> tuple[dict, dict, str]:
    rng = np.random.default_rng(seed)
    names = ("kl", "reverse-kl", "pearson", "hellinger", "js", "wgan")
    reports = [check_fixed_point(get_spec(n), rng, size=p["size"]) for n in names]
    summary = {}
    for n, r in zip(names, reports):
        summary[f"{n}.d_star_residual"] = check(f"fgan-table.{n}.d_star_residual", r.d_residual)
        summary[f"{n}.value_residual"] = check(f"fgan-table.{n}.value_residual", r.value_residual)
    table = format_table(reports)
    files = {
        "table.txt": table + "\n",
        "table.json": json.dumps([r.as_dict() for r in reports], indent=2, sort_keys=True) + "\n",
    }
    return summary, files, table


def _train_kwargs(p: dict) -> dict:
    keys = ("k0", "queue_capacity", "batch_size", "outer_iters", "lr_d", "lr_g", "eval_every", "final_samples", "sample_every")
    return {k: p[k] for k in keys}


def _gauss8_one(p: dict, seed: int):
    from .neural import Gauss8Config, TrainConfig, train_fictitious_gan

    tc = TrainConfig(seed=seed, **_train_kwargs(p))
    gauss = Gauss8Config(noise_dim=p["noise_dim"], seed=seed)
    return train_fictitious_gan(gauss8=gauss, config=tc), gauss


def _points_csv(points: np.ndarray) -> str:
    return "x,y\n" + "".join(f"{float(a)!r},{float(b)!r}\n" for a, b in points)


def _gauss8(p: dict, seed: int, svg: bool) -> tuple[dict, dict, str]:
    res, gauss = _gauss8_one(p, seed)
    files = {"trace.csv": res.trace.to_csv(), "samples_final.csv": _points_csv(res.final_samples)}
    for it, pts in sorted(res.trace.samples.items()):
        files[f"samples_{it}.csv"] = _points_csv(pts)
    if svg:
        files["samples_final.svg"] = scatter_plot(res.final_samples[:2000], "generated samples", marks=gauss.centers())
    summary = {
        "covered_modes": check("gauss8.covered_modes", int(res.final_covered)),
        "hq_fraction": check("gauss8.hq_fraction", float(res.final_hq_fraction)),
    }
    note = f"per-mode high-quality counts: {res.final_counts.tolist()}"
    return summary, files, note


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _gauss8_queue_sweep(p: dict, seed: int, svg: bool) -> tuple[dict, dict, str]:
    capacities = list(range(1, p["max_capacity"] + 1))
    seeds = [seed + i for i in range(p["n_seeds"])]
    jobs = [(c, s) for c in capacities for s in seeds]

    def one(job):
        c, s = job
        res, _ = _gauss8_one({**p, "queue_capacity": c, "sample_every": 0}, s)
        return c, s, int(res.final_covered), float(res.final_hq_fraction)

    with ThreadPoolExecutor(max_workers=min(thread_count(), len(jobs))) as pool:
        results = list(pool.map(one, jobs))
    rows = ["capacity,seed,covered_modes,hq_fraction"] + [f"{c},{s},{cov},{hq!r}" for c, s, cov, hq in results]
    medians = [statistics.median(cov for c, _, cov, _ in results if c == cap) for cap in capacities]
    nondecreasing = all(a <= b for a, b in zip(medians, medians[1:]))
    files = {"sweep.csv": "\n".join(rows) + "\n"}
    if svg:
        files["sweep.svg"] = line_plot(capacities, {"median covered": medians}, "coverage vs queue capacity")
    summary = {"median_coverage_nondecreasing": check("gauss8-queue-sweep.median_coverage_nondecreasing", nondecreasing)}
    note = "median covered modes by capacity: " + ", ".join(f"{c}: {m}" for c, m in zip(capacities, medians))
    return summary, files, note


# --- registry ---------------------------------------------------------------

_TRAIN_PARAMS = {
    "outer_iters": Param(5000, int, 0),
    "noise_dim": Param(16, int, 1),
    "k0": Param(3, int, 1),
    "queue_capacity": Param(5, int, 1),
    "batch_size": Param(64, int, 1),
    "lr_d": Param(2e-4, float, 0, exclusive_min=True),
    "lr_g": Param(1.2e-4, float, 0, exclusive_min=True),
    "eval_every": Param(500, int, 0),
    "final_samples": Param(10_000, int, 1),
    "sample_every": Param(0, int, 0),
    "reference": Param(False, bool),
}


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    params: dict[str, Param]
    runner: Callable[[dict, int, bool], tuple[dict, dict, str]]


EXPERIMENTS: dict[str, Experiment] = {
    e.name: e
    for e in (
        Experiment("example1-br", "best-response dynamics on Bernoulli data oscillate", {
            "a": Param(0.25, float, 0, 1), "init": Param(0.1, float, 0, 1), "iters": Param(100, int, 2),
        }, _example1_br),
        Experiment("example1-fp", "fictitious play on Bernoulli data converges", {
            "a": Param(0.25, float, 0, 1), "init": Param(0.1, float, 0, 1), "iters": Param(2000, int, 1),
        }, _example1_fp),
        Experiment("example2-gda", "gradient descent-ascent on xy spirals outward", {
            "x0": Param(0.1, float), "y0": Param(0.1, float), "step": Param(0.01, float, 0, exclusive_min=True),
            "iters": Param(50_000, int, 1), "closed_form_max_n": Param(10_000, int, 0), "csv_every": Param(10, int, 1),
        }, _example2_gda),
        Experiment("example2-fp", "fictitious play on xy over [-10, 10]^2", {
            "x0": Param(0.1, float, -10, 10), "y0": Param(0.1, float, -10, 10), "iters": Param(10_000, int, 1),
        }, _example2_fp),
        Experiment("gan-discrete", "discrete Fictitious GAN with exact best responses", {
            "n_dists": Param(20, int, 1), "size": Param(16, int, 1), "iters": Param(10_000, int, 1),
            "value_trials": Param(100, int, 1), "csv_every": Param(100, int, 1),
        }, _gan_discrete),
        Experiment("fgan-table", "fixed points of six f-GAN style objectives", {
            "size": Param(8, int, 1),
        }, _fgan_table),
        Experiment("gauss8", "Fictitious GAN on the 8-Gaussian ring", dict(_TRAIN_PARAMS), _gauss8),
        Experiment("gauss8-queue-sweep", "mode coverage against queue capacity", {
            **{k: v for k, v in _TRAIN_PARAMS.items() if k not in ("queue_capacity", "sample_every", "reference")},
            "reference": Param(False, bool), "sample_every": Param(0, int, 0),
            "queue_capacity": Param(1, int, 1), "max_capacity": Param(5, int, 1), "n_seeds": Param(5, int, 1),
        }, _gauss8_queue_sweep),
    )
}


def _coerce(name: str, value, spec: Param):
    if spec.kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{name} must be a boolean, got {value!r}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    if spec.kind is int:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{name} must be an integer, got {value!r}")
        value = int(value)
    else:
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError(f"{name} must be finite, got {value!r}")
    if spec.minimum is not None and (value <= spec.minimum if spec.exclusive_min else value < spec.minimum):
        rel = ">" if spec.exclusive_min else ">="
        raise ConfigError(f"{name} must be {rel} {spec.minimum}, got {value!r}")
    if spec.maximum is not None and value > spec.maximum:
        raise ConfigError(f"{name} must be <= {spec.maximum}, got {value!r}")
    return value


def _reference_defaults(name: str) -> dict:
    from .neural import TrainConfig
    from .neural.gauss8 import REFERENCE_NOISE_DIM

    tc = TrainConfig.reference()
    out = {"outer_iters": tc.outer_iters, "noise_dim": REFERENCE_NOISE_DIM, "eval_every": tc.eval_every}
    if name == "gauss8":
        out["sample_every"] = tc.sample_every
    return out


def make_config(name: str, params: dict | None = None, seed: int = 0, svg: bool = False) -> ExperimentConfig:
    """Validate parameters against the experiment's schema and fill defaults."""
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed must be a nonnegative integer, got {seed!r}")
    schema = EXPERIMENTS[name].params
    params = dict(params or {})
    unknown = sorted(set(params) - set(schema))
    if unknown:
        raise ConfigError(f"unknown parameters for {name}: {', '.join(unknown)}")
    defaults = {k: spec.default for k, spec in schema.items()}
    if "reference" in schema and _coerce("reference", params.get("reference", False), schema["reference"]):
        # explicit keys still win over the long-run settings
        defaults.update(_reference_defaults(name))
    full = {k: _coerce(k, params.get(k, defaults[k]), spec) for k, spec in schema.items()}
    return ExperimentConfig(name, seed, full, svg)


def load_config_file(path: str | Path, name: str) -> tuple[dict, int | None]:
    """Read a JSON config: either a bare parameter object or
    ``{"experiment": ..., "seed": ..., "params": {...}}``."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    if "params" in data or "experiment" in data or "seed" in data:
        extra = set(data) - {"params", "experiment", "seed"}
        if extra:
            raise ConfigError(f"{path}: unknown top-level keys {sorted(extra)}")
        if data.get("experiment", name) != name:
            raise ConfigError(f"{path}: config is for {data['experiment']!r}, not {name!r}")
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError(f"{path}: params must be an object")
        return params, data.get("seed")
    return data, None


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    exp = EXPERIMENTS[cfg.name]
    summary, files, note = exp.runner(cfg.params, cfg.seed, cfg.svg)
    report = render_report(cfg, summary, note)
    files = {
        **files,
        "summary.json": json.dumps(summary, indent=2, sort_keys=True) + "\n",
        "config.json": json.dumps({"experiment": cfg.name, "seed": cfg.seed, "params": cfg.params}, indent=2, sort_keys=True) + "\n",
        "report.txt": report,
    }
    return ExperimentResult(cfg.name, summary, files, report)


def render_report(cfg: ExperimentConfig, summary: dict, note: str = "") -> str:
    lines = [f"experiment: {cfg.name} ({EXPERIMENTS[cfg.name].description})", f"seed: {cfg.seed}", ""]
    for key in sorted(summary):
        e = summary[key]
        status = "RECORDED" if e["pass"] is None else ("PASS" if e["pass"] else "FAIL")
        lines.append(f"[{status}] {key}: observed {e['observed']!r}, expected {e['expected']!r}, tolerance {e['tolerance']!r}")
    if note:
        lines += ["", note]
    verdict = "all checks passed" if criteria.all_pass(summary) else "some checks FAILED"
    lines += ["", verdict]
    return "\n".join(lines) + "\n"


def write_outputs(result: ExperimentResult, out_dir: str | Path) -> list[Path]:
    """Write every artifact; on failure remove whatever was written."""
    out = Path(out_dir)
    created_dir = not out.exists()
    written: list[Path] = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name in sorted(result.files):
            path = out / name
            path.write_text(result.files[name], newline="\n")
            written.append(path)
    except OSError:
        for path in written:
            path.unlink(missing_ok=True)
        if created_dir and out.exists() and not any(out.iterdir()):
            out.rmdir()
        raise
    return written


def verify_summary(out_dir: str | Path) -> tuple[str, dict[str, bool | None]]:
    """Re-judge ``summary.json`` in ``out_dir`` against the current thresholds."""
    out = Path(out_dir)
    try:
        cfg = json.loads((out / "config.json").read_text())
        summary = json.loads((out / "summary.json").read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{out}: unreadable summary ({exc})") from exc
    name = cfg.get("experiment")
    if name not in EXPERIMENTS or not isinstance(summary, dict):
        raise ConfigError(f"{out}: not an experiment output directory")
    return name, criteria.verify(name, summary)
