"""Nested rejection paths and the false-discovery estimates V-hat.

A Path records an ordering of the hypotheses, per-step inclusion flags and
the resulting set sizes |R_k| for k = 0..n (index 0 is the empty set).  For
the p-value-sorted path, tied p-values collapse to the same set, so sizes
can jump by more than one there; all other kinds step by 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .accumulation import AccumulationFn
from .errors import (AllZeroStats, DomainError, EmptyInput,
                     InvalidPermutation, LambdaBelowPstar)


@dataclass(frozen=True)
class Path:
    ordering: np.ndarray      # 0-based hypothesis indices, step order
    include: np.ndarray       # bool, whether step j adds its hypothesis
    sizes: np.ndarray         # int, |R_k| for k = 0..n (sizes[0] == 0)
    n: int
    kind: str                 # "sorted" | "preordered" | "knockoff" | "online"
    dropped_zeros: int = 0    # knockoff statistics removed before ordering

    def __post_init__(self):
        if np.any(np.diff(self.sizes) < 0):
            raise DomainError("path sizes must be nondecreasing")

    @property
    def tie_block_last(self) -> np.ndarray:
        """Bool per step k=1..n: k closes a tie block (R_k is a maximal set).

        For kinds without ties this is all-True.
        """
        if self.kind != "sorted":
            return np.ones(self.n, dtype=bool)
        # |R_k| >= k always, with equality exactly at a tie block's last index
        return self.sizes[1:] == np.arange(1, self.n + 1)


@dataclass(frozen=True)
class VhatSeries:
    """Running estimate of the false-discovery count along a path.

    values has length n+1 and starts at 0 for the empty set.
    """

    values: np.ndarray
    estimator: str            # "sort" | "acc" | "sel" | "online-simple" | "online-adaptive"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values[0] != 0.0:
            raise DomainError("V-hat must start at 0 for the empty set")
        if np.any(np.diff(self.values) < -1e-12):
            raise DomainError("V-hat must be nondecreasing")


@dataclass(frozen=True)
class KnockoffStats:
    ids: list
    w: np.ndarray

    def __post_init__(self):
        if len(self.ids) != len(self.w):
            raise DomainError("ids and statistics must have equal length")


@dataclass(frozen=True)
class TruthMask:
    """Which hypotheses are null; only meaningful in simulations/oracles."""

    is_null: np.ndarray


def _as_pvalues(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.size == 0:
        raise EmptyInput("no p-values supplied")
    if np.any(np.isnan(p)) or np.any(p < 0) or np.any(p > 1):
        raise DomainError("p-values must lie in [0,1]")
    return p


def build_sorted_path(p) -> tuple[Path, VhatSeries]:
    """Path over sets {j: p_j <= p_(k)} with V-hat(R_k) = n * p_(k).

    Ties are stable by original index; |R_k| counts every p-value <= p_(k),
    so consecutive steps inside a tie block share the same set.
    """
    p = _as_pvalues(p)
    n = p.size
    ordering = np.argsort(p, kind="stable")
    sorted_p = p[ordering]
    sizes = np.concatenate(
        ([0], np.searchsorted(sorted_p, sorted_p, side="right")))
    path = Path(ordering=ordering, include=np.ones(n, dtype=bool),
                sizes=sizes, n=n, kind="sorted")
    vhat = VhatSeries(values=np.concatenate(([0.0], n * sorted_p)),
                      estimator="sort", params={"n": n})
    return path, vhat


def _check_permutation(pi, n: int) -> np.ndarray:
    pi = np.asarray(pi, dtype=np.int64)
    if pi.shape != (n,) or not np.array_equal(np.sort(pi), np.arange(n)):
        raise InvalidPermutation("ordering is not a permutation of range(n)")
    return pi


def build_preordered_path(p, pi, p_star: float) -> Path:
    """Path traversing a fixed ordering, keeping steps with p <= p_star."""
    p = _as_pvalues(p)
    if not 0 < p_star <= 1:
        raise DomainError(f"p_star must be in (0,1], got {p_star}")
    pi = _check_permutation(pi, p.size)
    include = p[pi] <= p_star
    sizes = np.concatenate(([0], np.cumsum(include)))
    return Path(ordering=pi, include=include, sizes=sizes, n=p.size,
                kind="preordered")


def vhat_acc(p, pi, h: AccumulationFn) -> VhatSeries:
    """Running sum of h(p) along the ordering."""
    p = np.asarray(p, dtype=float)
    if p.size == 0:
        return VhatSeries(values=np.zeros(1), estimator="acc",
                          params={"h": h.tag, "bound": h.bound})
    pi = _check_permutation(pi, p.size)
    increments = h(p[pi])
    return VhatSeries(values=np.concatenate(([0.0], np.cumsum(increments))),
                      estimator="acc", params={"h": h.tag, "bound": h.bound})


def vhat_sel(p, pi, p_star: float, lam: float) -> VhatSeries:
    """Running sum of (p_star/(1-lam)) * 1{p > lam} along the ordering."""
    if lam < p_star:
        raise LambdaBelowPstar(f"lambda={lam} below p_star={p_star}")
    if not 0 < p_star <= lam < 1:
        raise DomainError(f"need 0 < p_star <= lambda < 1, got ({p_star}, {lam})")
    p = np.asarray(p, dtype=float)
    pi = _check_permutation(pi, p.size)
    increments = np.where(p[pi] > lam, p_star / (1.0 - lam), 0.0)
    return VhatSeries(values=np.concatenate(([0.0], np.cumsum(increments))),
                      estimator="sel",
                      params={"p_star": p_star, "lambda": lam,
                              "B": p_star / (1.0 - lam)})


def build_knockoff_path(stats: KnockoffStats) -> tuple[Path, VhatSeries]:
    """Order by |W| descending; positives enter the set, negatives count
    toward V-hat.  Zero statistics carry no sign and are dropped (the count
    is kept on the path)."""
    w = np.asarray(stats.w, dtype=float)
    if w.size == 0:
        raise EmptyInput("no knockoff statistics supplied")
    nonzero = w != 0.0
    dropped = int(np.sum(~nonzero))
    if not np.any(nonzero):
        raise AllZeroStats("all knockoff statistics are zero")
    keep_idx = np.flatnonzero(nonzero)
    w = w[keep_idx]
    order_local = np.argsort(-np.abs(w), kind="stable")
    ordering = keep_idx[order_local]
    include = w[order_local] > 0
    sizes = np.concatenate(([0], np.cumsum(include)))
    path = Path(ordering=ordering, include=include, sizes=sizes,
                n=w.size, kind="knockoff", dropped_zeros=dropped)
    vhat = VhatSeries(
        values=np.concatenate(([0.0], np.cumsum(~include).astype(float))),
        estimator="sel", params={"p_star": 0.5, "lambda": 0.5, "B": 1.0,
                                 "knockoff": True})
    return path, vhat


def build_online_path(p, levels) -> Path:
    """Batch view of an online stream: step j admits hypothesis j iff
    p_j <= alpha_j.  Used for replay checks and simulations."""
    p = _as_pvalues(p)
    levels = np.asarray(levels, dtype=float)
    if levels.shape != p.shape:
        raise DomainError("levels and p-values must have equal length")
    include = p <= levels
    sizes = np.concatenate(([0], np.cumsum(include)))
    return Path(ordering=np.arange(p.size), include=include, sizes=sizes,
                n=p.size, kind="online")


def vhat_online_simple(levels) -> VhatSeries:
    levels = np.asarray(levels, dtype=float)
    return VhatSeries(values=np.concatenate(([0.0], np.cumsum(levels))),
                      estimator="online-simple", params={})


def vhat_online_adaptive(p, levels, lambdas, b_cap: float) -> VhatSeries:
    p = np.asarray(p, dtype=float)
    levels = np.asarray(levels, dtype=float)
    lambdas = np.asarray(lambdas, dtype=float)
    increments = np.where(p > lambdas, levels / (1.0 - lambdas), 0.0)
    return VhatSeries(values=np.concatenate(([0.0], np.cumsum(increments))),
                      estimator="online-adaptive", params={"b_cap": b_cap})
