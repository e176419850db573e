"""Shared numerical utilities for the non-convex rate optimizers."""

from __future__ import annotations

import numpy as np


def project_rows_onto_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of each trailing-axis row onto the simplex.

    Standard sort-based algorithm, vectorized over all leading axes.
    """
    n = v.shape[-1]
    u = np.sort(v, axis=-1)[..., ::-1]
    css = np.cumsum(u, axis=-1) - 1.0
    ind = np.arange(1, n + 1, dtype=float)
    cond = u - css / ind > 0  # first column is always true, so rho >= 1
    rho = np.count_nonzero(cond, axis=-1)
    theta = np.take_along_axis(css, rho[..., None] - 1, axis=-1) / rho[..., None]
    return np.maximum(v - theta, 0.0)


def dirichlet_rows(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Rows drawn from a flat Dirichlet over the trailing axis."""
    g = rng.gamma(1.0, 1.0, size=shape)
    g = np.maximum(g, 1e-300)
    return g / g.sum(axis=-1, keepdims=True)


def set_partitions(n: int) -> list[list[int]]:
    """All partitions of range(n) as restricted-growth label strings.

    Each partition is a length-n list: element i carries the block index of
    item i, blocks numbered by first appearance.  Deterministic order, from
    the single-block partition up to the all-singletons one.
    """
    if n == 0:
        return [[]]
    out: list[list[int]] = []

    def grow(prefix: list[int], top: int) -> None:
        if len(prefix) == n:
            out.append(prefix.copy())
            return
        for label in range(top + 2):
            prefix.append(label)
            grow(prefix, max(top, label))
            prefix.pop()

    grow([0], 0)
    return out


def one_hot_rows(labels, n_cols: int) -> np.ndarray:
    """Row-stochastic 0/1 matrix sending row i to column labels[i]."""
    m = np.zeros((len(labels), n_cols))
    m[np.arange(len(labels)), labels] = 1.0
    return m
