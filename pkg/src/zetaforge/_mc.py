"""Reproducible Monte Carlo plumbing.

Counter-based Philox streams keyed by (operation, parameters, seed), so a
given job is bit-reproducible regardless of evaluation order, and shards
can run independently and merge deterministically.  Reductions use
math.fsum over shard partials.
"""

from __future__ import annotations

import hashlib
import math
from typing import Callable, Tuple

import numpy as np


def philox_rng(op: str, params: tuple, seed: int) -> np.random.Generator:
    """Deterministic generator keyed by (op, params, seed)."""
    msg = f"{op}|{params!r}|{seed}".encode()
    key = int.from_bytes(hashlib.sha256(msg).digest()[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))


def mc_mean(
    f: Callable[[np.ndarray], np.ndarray],
    dim: int,
    samples: int,
    rng: np.random.Generator,
    batch: int = 1 << 18,
) -> Tuple[float, float, int]:
    """Mean and standard error of f over the unit cube [0,1]^dim.

    ``f`` maps an (m, dim) array to an (m,) array.  Returns
    (mean, std_error, n_used).
    """
    sums = []
    sq_sums = []
    n_done = 0
    while n_done < samples:
        m = min(batch, samples - n_done)
        pts = rng.random((m, dim))
        vals = f(pts)
        sums.append(float(np.sum(vals)))
        sq_sums.append(float(np.sum(vals * vals)))
        n_done += m
    total = math.fsum(sums)
    total_sq = math.fsum(sq_sums)
    mean = total / n_done
    var = max(total_sq / n_done - mean * mean, 0.0)
    std_err = math.sqrt(var / n_done)
    return mean, std_err, n_done


def gauss_legendre_unit(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def tensor_gauss(
    f: Callable[[np.ndarray], np.ndarray], dim: int, nodes_per_axis: int
) -> Tuple[float, int]:
    """Tensor-product Gauss-Legendre integral of f over [0,1]^dim.

    Evaluates in slabs over the leading axes so dim = 4 stays in memory.
    """
    x, w = gauss_legendre_unit(nodes_per_axis)
    if dim == 1:
        pts = x[:, None]
        return float(np.dot(w, f(pts))), nodes_per_axis
    grids = np.meshgrid(*([x] * (dim - 1)), indexing="ij")
    wgrid = np.ones_like(grids[0])
    for g in np.meshgrid(*([w] * (dim - 1)), indexing="ij"):
        wgrid = wgrid * g
    flat = np.stack([g.ravel() for g in grids], axis=1)
    wflat = wgrid.ravel()
    acc = []
    for i, xi in enumerate(x):
        pts = np.concatenate(
            [flat, np.full((flat.shape[0], 1), xi)], axis=1
        )
        acc.append(float(np.dot(wflat, f(pts)) * w[i]))
    return math.fsum(acc), nodes_per_axis**dim
