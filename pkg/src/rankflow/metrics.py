"""Wasserstein-1 distances and the two estimators against an exact CDF.

For equal-size empirical measures the optimal coupling pairs order
statistics, so the distance is a mean of sorted differences; equivalently
it is the L1 norm of the CDF difference, computed here by an exact event
sweep.  Against a continuous reference CDF two estimators are provided:

* grid-free: a trapezoid sum over the sorted sample, using the reference
  CDF at the sample points.  It integrates only between the extreme order
  statistics; the omitted tail mass is not corrected (it is part of the
  estimator's definition) but is documented;
* grid-based: a fixed quantile grid of the reference with the midpoint
  value (2k+1)/(2K) standing in for the CDF on each cell, and doubled
  boundary half-cells.  Suited to averaged CDF vectors where the sample
  itself is too large to keep.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, DegenerateInputWarning


def w_rho_empirical(a, b, rho: float = 1.0) -> float:
    """Wasserstein-rho distance between two equal-size empirical measures."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ConfigError("need two non-empty vectors of equal length")
    if rho < 1.0:
        raise ConfigError("rho must be >= 1")
    diff = np.abs(np.sort(a) - np.sort(b))
    return float(np.mean(diff**rho) ** (1.0 / rho))


def w1_cdf_form(a, b) -> float:
    """W1 as the exact L1 norm of the empirical CDF difference.

    Event sweep over the merged atoms; sizes may differ (each empirical
    measure weights its own atoms by 1/size).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or b.ndim != 1 or a.size == 0 or b.size == 0:
        raise ConfigError("need two non-empty vectors")
    grid = np.unique(np.concatenate([a, b]))
    if grid.size == 1:
        return 0.0
    cdf_a = np.searchsorted(np.sort(a), grid[:-1], side="right") / a.size
    cdf_b = np.searchsorted(np.sort(b), grid[:-1], side="right") / b.size
    return float(np.sum(np.abs(cdf_a - cdf_b) * np.diff(grid)))


def empirical_cdf_at(positions, x):
    """Fraction of positions <= x (weak inequality); vectorized in x."""
    pos = np.sort(np.asarray(positions, dtype=float))
    xx = np.asarray(x, dtype=float)
    out = np.searchsorted(pos, xx, side="right") / pos.size
    return float(out) if xx.ndim == 0 else out


def psi_grid_free(sorted_positions, exact_cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """Grid-free W1 estimate of a sorted sample against a reference CDF.

    Trapezoid sum between consecutive order statistics, with the empirical
    CDF equal to i/n on the i-th gap.  A single point makes the sum empty;
    that degenerate case warns and returns 0.
    """
    y = np.asarray(sorted_positions, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise ConfigError("need a non-empty 1-D vector")
    if np.any(np.diff(y) < 0.0):
        raise ConfigError("positions must be sorted nondecreasing")
    n = y.size
    if n == 1:
        warnings.warn("grid-free estimate of a single point is vacuous",
                      DegenerateInputWarning, stacklevel=2)
        return 0.0
    ref = np.asarray(exact_cdf(y), dtype=float)
    levels = np.arange(1, n) / n
    terms = 0.5 * np.diff(y) * (np.abs(ref[1:] - levels) + np.abs(ref[:-1] - levels))
    return float(np.sum(terms))


@dataclass(frozen=True)
class GridSpec:
    """Quantile grid of a reference law for the grid-based estimator.

    ``quantile_grid`` holds the cell edges (quantiles of k/K, k = 1..K-1)
    and ``midpoint_quantiles`` the evaluation abscissae (quantiles of
    (2k+1)/(2K), k = 0..K-1).
    """

    k_points: int
    quantile_grid: np.ndarray
    midpoint_quantiles: np.ndarray

    def __post_init__(self):
        if self.k_points < 2:
            raise ConfigError("need at least 2 grid cells")
        edges = np.asarray(self.quantile_grid, dtype=float)
        mids = np.asarray(self.midpoint_quantiles, dtype=float)
        if edges.size != self.k_points - 1 or mids.size != self.k_points:
            raise ConfigError("grid vectors must have lengths K-1 and K")
        if edges.size > 1 and np.any(np.diff(edges) <= 0.0):
            raise ConfigError("quantile grid must be strictly increasing")
        if np.any(np.diff(mids) <= 0.0):
            raise ConfigError("midpoint quantiles must be strictly increasing")
        object.__setattr__(self, "quantile_grid", edges)
        object.__setattr__(self, "midpoint_quantiles", mids)

    @classmethod
    def from_quantile(cls, quantile: Callable[[np.ndarray], np.ndarray], k_points: int) -> "GridSpec":
        """Build the grid by evaluating a (vectorized) quantile function."""
        k = int(k_points)
        if k < 2:
            raise ConfigError("need at least 2 grid cells")
        edges = np.asarray(quantile(np.arange(1, k) / k), dtype=float)
        mids = np.asarray(quantile((2.0 * np.arange(k) + 1.0) / (2.0 * k)), dtype=float)
        return cls(k, edges, mids)


def phi_grid(mean_cdf_values, grid: GridSpec) -> float:
    """Grid-based W1 estimate from CDF values at the midpoint quantiles.

    Interior cells contribute |u_k - (2k+1)/(2K)| times the cell width;
    the two boundary cells contribute twice their half-cell width, between
    the outermost midpoint and the outermost edge.
    """
    u = np.asarray(mean_cdf_values, dtype=float)
    k = grid.k_points
    if u.ndim != 1 or u.size != k:
        raise ConfigError("mean CDF vector must have length K")
    if np.any(u < 0.0) or np.any(u > 1.0):
        raise ConfigError("CDF values must lie in [0, 1]")
    targets = (2.0 * np.arange(k) + 1.0) / (2.0 * k)
    dev = np.abs(u - targets)
    edges = grid.quantile_grid
    mids = grid.midpoint_quantiles
    interior = float(np.sum(dev[1:-1] * np.diff(edges))) if k > 2 else 0.0
    left = 2.0 * dev[0] * (edges[0] - mids[0])
    right = 2.0 * dev[-1] * (mids[-1] - edges[-1])
    return interior + left + right
