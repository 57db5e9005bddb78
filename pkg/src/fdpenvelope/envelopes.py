"""Envelope curves: V-bar(R_k) = floor(c * (a + V-hat(R_k))) and the FDP
bound it implies, plus two classical baseline envelopes for the sorted path
and the true-FDP oracle used in simulations.
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from .constants import BoundConstant
from .errors import AlphaTooLargeForDKW, DomainError, FamilyMismatch
from .paths import Path, TruthMask, VhatSeries, build_sorted_path

# Guard against representation error pushing an exact integer product just
# below itself before the floor.
FLOOR_EPS = 1e-9

_COMPATIBLE = {
    "sort": {"sort"},
    "acc": {"preorder-acc-general", "preorder-acc-bounded"},
    "sel": {"sel", "knockoff"},
    "online-simple": {"online-simple"},
    "online-adaptive": {"online-adaptive"},
}


@dataclass(frozen=True)
class EnvelopeCurve:
    k: np.ndarray             # 0..n
    size: np.ndarray          # |R_k|
    v_hat: np.ndarray
    v_bar: np.ndarray         # integer envelope on the false-discovery count
    fdp_bar_raw: np.ndarray   # v_bar / size (0 at the empty set)
    fdp_bar: np.ndarray       # min(1, raw)
    family: str
    alpha: float
    a: float
    c: float
    tie_block_last: np.ndarray | None = None

    def __len__(self) -> int:
        return self.k.size

    def rows(self):
        """Iterate (k, size, v_hat, v_bar, fdp_bar_raw, fdp_bar) tuples."""
        for i in range(self.k.size):
            yield (int(self.k[i]), int(self.size[i]), float(self.v_hat[i]),
                   int(self.v_bar[i]), float(self.fdp_bar_raw[i]),
                   float(self.fdp_bar[i]))


def _curve_from_vbar(sizes: np.ndarray, v_hat: np.ndarray, v_bar: np.ndarray,
                     family: str, alpha: float, a: float, c: float,
                     tie_block_last=None) -> EnvelopeCurve:
    sizes = np.asarray(sizes, dtype=np.int64)
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = np.where(sizes > 0, v_bar / np.maximum(sizes, 1), 0.0)
    return EnvelopeCurve(k=np.arange(sizes.size), size=sizes,
                         v_hat=np.asarray(v_hat, dtype=float),
                         v_bar=v_bar.astype(np.int64),
                         fdp_bar_raw=raw, fdp_bar=np.minimum(raw, 1.0),
                         family=family, alpha=alpha, a=a, c=c,
                         tie_block_last=tie_block_last)


def compute_envelope(path: Path, vhat: VhatSeries,
                     constant: BoundConstant) -> EnvelopeCurve:
    """Combine a path, its V-hat series and a resolved constant.

    The constant's family must match the estimator that produced V-hat;
    applying e.g. the sorted constant to a selective series would silently
    void the guarantee, so the mismatch is an error.
    """
    if constant.family not in _COMPATIBLE[vhat.estimator]:
        raise FamilyMismatch(
            f"constant family {constant.family!r} incompatible with "
            f"estimator {vhat.estimator!r}")
    if vhat.values.size != path.sizes.size:
        raise DomainError("V-hat length does not match the path")
    v_bar = np.floor(constant.c * (constant.a + vhat.values) + FLOOR_EPS)
    return _curve_from_vbar(path.sizes, vhat.values, v_bar, constant.family,
                            constant.alpha, constant.a, constant.c,
                            tie_block_last=path.tie_block_last)


def robbins_envelope(p, alpha: float) -> EnvelopeCurve:
    """Classical linear envelope V-bar(t) = n*t/alpha at t = p_(k)."""
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must be in (0,1), got {alpha}")
    path, vhat = build_sorted_path(p)
    # vhat.values[k] = n * p_(k)
    v_bar = np.floor(vhat.values / alpha + FLOOR_EPS)
    return _curve_from_vbar(path.sizes, vhat.values, v_bar, "robbins",
                            alpha, 0.0, 1.0 / alpha,
                            tie_block_last=path.tie_block_last)


def dkw_envelope(p, alpha: float) -> EnvelopeCurve:
    """One-sided empirical-process band sqrt((n/2)log(1/alpha)) + n*t."""
    if not 0 < alpha < 0.5:
        raise AlphaTooLargeForDKW(
            f"the one-sided band requires alpha < 0.5, got {alpha}")
    path, vhat = build_sorted_path(p)
    offset = math.sqrt(0.5 * path.n * math.log(1.0 / alpha))
    v_bar = np.floor(offset + vhat.values + FLOOR_EPS)
    return _curve_from_vbar(path.sizes, vhat.values, v_bar, "dkw",
                            alpha, 0.0, float("nan"),
                            tie_block_last=path.tie_block_last)


def true_false_count(path: Path, truth: TruthMask) -> np.ndarray:
    """|R_k ∩ H_0| for k = 0..n."""
    is_null = np.asarray(truth.is_null, dtype=bool)
    if path.kind == "sorted":
        # R_k is the first sizes[k] hypotheses in sorted order, so index
        # the cumulative null count by set size to respect tie collapse.
        cum = np.concatenate(([0], np.cumsum(is_null[path.ordering])))
        return cum[path.sizes]
    return np.concatenate(
        ([0], np.cumsum(path.include & is_null[path.ordering])))


def true_fdp_curve(path: Path, truth: TruthMask) -> np.ndarray:
    """Oracle FDP(R_k) for k = 0..n, 0 at empty sets."""
    v = true_false_count(path, truth)
    return np.where(path.sizes > 0, v / np.maximum(path.sizes, 1), 0.0)
