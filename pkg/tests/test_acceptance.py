"""Acceptance gate: one test per criterion, one printed PASS/FAIL line per check.

Thresholds come from ``minimax_lab.criteria``, the same table the CLI
summaries use. Nothing here is loosened to make a run pass.
"""

import time

import numpy as np
import pytest

from helpers import central_difference, probe_coords, relative_errors
from minimax_lab import criteria
from minimax_lab.criteria import RUNTIME_BUDGET_S
from minimax_lab.experiments import make_config, run_experiment
from minimax_lab.neural import (
    Gauss8Config,
    ModelQueue,
    ParamVector,
    apply,
    discriminator_spec,
    forward,
    generator_spec,
    init_params,
    mixture_d_loss,
    mixture_g_loss,
    sample_gauss8,
    train_fictitious_gan,
    train_standard_gan,
)
from minimax_lab.neural import autodiff as ad
from minimax_lab.neural.mlp import backward


@pytest.fixture
def emit(capsys):
    lines = []

    def _emit(criterion, name, ok, detail):
        status = "RECORDED" if ok is None else ("PASS" if ok else "FAIL")
        line = f"CRITERION {criterion:>2} {name:<40} {status:<8} {detail}"
        lines.append((ok, line))
        with capsys.disabled():
            print("\n" + line, end="")

    yield _emit
    with capsys.disabled():
        print()


def _summary_lines(emit, criterion, summary, prefix=""):
    ok = True
    for key in sorted(summary):
        e = summary[key]
        if e["criterion"] != criterion:
            continue
        emit(criterion, prefix + key, e["pass"], f"observed={e['observed']!r} tol={e['tolerance']!r}")
        ok = ok and e["pass"] is not False
    return ok


def _timed_experiment(name, **params):
    cfg = make_config(name, params)
    t0 = time.perf_counter()
    res = run_experiment(cfg)
    return res, time.perf_counter() - t0


def _runtime(emit, criterion, elapsed):
    budget = RUNTIME_BUDGET_S[criterion]
    ok = elapsed < budget
    emit(criterion, "runtime", ok, f"{elapsed:.3f} s (budget {budget} s)")
    return ok


def test_criterion_01_best_response_oscillation(emit):
    res, elapsed = _timed_experiment("example1-br")
    ok = _summary_lines(emit, 1, res.summary)
    ok &= _runtime(emit, 1, elapsed)
    assert ok


def test_criterion_02_example1_fictitious_play(emit):
    res, elapsed = _timed_experiment("example1-fp")
    ok = _summary_lines(emit, 2, res.summary)
    ok &= _runtime(emit, 2, elapsed)
    assert ok


def test_criterion_03_gda_divergence(emit):
    res, elapsed = _timed_experiment("example2-gda")
    ok = _summary_lines(emit, 3, res.summary)
    ok &= _runtime(emit, 3, elapsed)
    assert ok


def test_criterion_04_bilinear_fictitious_play(emit):
    res, elapsed = _timed_experiment("example2-fp")
    ok = _summary_lines(emit, 4, res.summary)
    ok &= _runtime(emit, 4, elapsed)
    assert ok


def test_criterion_05_value_at_half(emit):
    res, _ = _timed_experiment("gan-discrete", n_dists=1, iters=1)
    assert _summary_lines(emit, 5, res.summary)


def test_criterion_06_discrete_fictitious_gan(emit):
    res, elapsed = _timed_experiment("gan-discrete")
    ok = _summary_lines(emit, 6, res.summary)
    ok &= _runtime(emit, 6, elapsed)
    assert ok


def test_criterion_07_fgan_fixed_points(emit):
    res, elapsed = _timed_experiment("fgan-table")
    ok = _summary_lines(emit, 7, res.summary)
    ok &= _runtime(emit, 7, elapsed)
    assert ok


def test_criterion_08_gradient_correctness(emit):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    g_spec, d_spec = generator_spec(), discriminator_spec()
    cfg = Gauss8Config()
    x = sample_gauss8(cfg, 64, rng)
    z = rng.standard_normal((64, g_spec.input_dim))
    d = init_params(d_spec, rng)
    g = init_params(g_spec, rng)
    g_queue, d_queue = ModelQueue(3), ModelQueue(3)
    for _ in range(3):
        g_queue.push(init_params(g_spec, rng))
        d_queue.push(init_params(d_spec, rng))

    def plain_loss(flat):
        return float(np.mean(apply(g_spec, ParamVector(flat, g.shapes), z) ** 2))

    out, tape, w = forward(g_spec, g, z)
    plain_grad = backward(tape, ad.mean(ad.square(out)), w, g.shapes).flat

    cases = {
        "plain MLP loss": (plain_loss, g, plain_grad),
        "mixture_d_loss (queue 3)": (
            lambda f: mixture_d_loss(d_spec, ParamVector(f, d.shapes), g_spec, g_queue, x, z).value,
            d,
            mixture_d_loss(d_spec, d, g_spec, g_queue, x, z).grad.flat,
        ),
        "mixture_g_loss (queue 3)": (
            lambda f: mixture_g_loss(g_spec, ParamVector(f, g.shapes), d_spec, d_queue, z).value,
            g,
            mixture_g_loss(g_spec, g, d_spec, d_queue, z).grad.flat,
        ),
    }
    ok = True
    for name, (fn, params, grad) in cases.items():
        coords = probe_coords(rng, params, criteria.GRADIENT_PROBES)
        fd = central_difference(fn, params.flat, coords, criteria.GRADIENT_FD_STEP)
        err = float(np.max(relative_errors(grad[coords], fd)))
        passed = err < criteria.GRADIENT_REL_TOL and len(coords) >= criteria.GRADIENT_PROBES
        emit(8, name, passed, f"max rel err {err:.2e} over {len(coords)} coords")
        ok &= passed
    ok &= _runtime(emit, 8, time.perf_counter() - t0)
    assert ok


def test_criterion_09_capacity_one_equivalence(emit):
    kw = dict(outer_iters=criteria.DEGENERACY_ITERS, queue_capacity=1, eval_every=0, final_samples=100, seed=11)
    fict = train_fictitious_gan(**kw)
    std = train_standard_gan(**kw)
    same_loss = fict.trace.d_loss == std.trace.d_loss and fict.trace.g_loss == std.trace.g_loss
    same_params = np.array_equal(fict.g_params.flat, std.g_params.flat) and np.array_equal(fict.d_params.flat, std.d_params.flat)
    emit(9, "losses bit-identical", same_loss, f"{criteria.DEGENERACY_ITERS} outer iterations")
    emit(9, "parameters bit-identical", same_params, "generator and discriminator")
    assert same_loss and same_params


@pytest.mark.slow
def test_criterion_10_gauss8_coverage(emit):
    passing = 0
    for seed in criteria.GAUSS8_SEEDS:
        t0 = time.perf_counter()
        res = run_experiment(make_config("gauss8", seed=seed))
        cov, hq = res.summary["covered_modes"], res.summary["hq_fraction"]
        ok = cov["pass"] and hq["pass"]
        passing += ok
        emit(10, f"seed {seed}", ok, f"covered={cov['observed']} hq={hq['observed']:.3f} ({time.perf_counter() - t0:.0f} s)")
    need = criteria.GAUSS8_MIN_PASSING
    emit(10, "seeds passing", passing >= need, f"{passing}/{len(criteria.GAUSS8_SEEDS)} (need {need})")
    assert passing >= need


def test_criterion_11_not_reproducible_at_desk_scale(emit):
    emit(11, "image-scale results", None, "Inception scores and image datasets are out of scope")
    emit(11, "queue sweep trend", None, "recorded by `minimax-lab run gauss8-queue-sweep`, never asserted")
    t = criteria.THRESHOLDS["gauss8-queue-sweep.median_coverage_nondecreasing"]
    assert not t.asserted and t.passes(False) is None
