"""Independent oracles shared by the unit and acceptance suites."""

import numpy as np

from minimax_lab.neural import ParamVector


def central_difference(loss_of_flat, flat, coords, h=1e-5):
    """Central finite differences of a scalar function at selected coordinates."""
    out = np.empty(len(coords))
    for k, i in enumerate(coords):
        up, down = flat.copy(), flat.copy()
        up[i] += h
        down[i] -= h
        out[k] = (loss_of_flat(up) - loss_of_flat(down)) / (2 * h)
    return out


def relative_errors(analytic, numeric, floor=1e-8):
    a, b = np.asarray(analytic), np.asarray(numeric)
    return np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)


def probe_coords(rng, params: ParamVector, n=20):
    """Random coordinates, at least one from every layer when ``n`` allows."""
    sizes = [int(np.prod(s)) for s in params.shapes]
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    picks = {int(s + rng.integers(sz)) for s, sz in zip(starts, sizes)}
    pool = np.setdiff1d(np.arange(len(params)), sorted(picks))
    rest = rng.choice(pool, size=max(0, n - len(picks)), replace=False)
    return sorted(picks | {int(r) for r in rest})
