"""Accumulation functions: nondecreasing maps h: [0,1] -> R+ with unit integral.

Partial sums of h along an ordering estimate the running null count in
pre-ordered testing.  Two builtins are provided (a step function with a
threshold, and the logarithmic ramp), plus a constructor for user-supplied
functions which validates the defining properties numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureFailure

_INTEGRAL_TOL = 1e-6
_MONOTONE_GRID = 512


@dataclass(frozen=True)
class AccumulationFn:
    """A nondecreasing function on [0,1] integrating to 1.

    bound is sup h when finite, None for unbounded functions.  tag
    distinguishes the builtins so closed-form shortcuts can be taken
    downstream instead of numerical quadrature.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    bound: float | None
    tag: str  # "seqstep" | "forwardstop" | "user"
    lam: float | None = field(default=None)

    def __call__(self, u):
        return self.eval(np.asarray(u, dtype=float))


def seq_step(lam: float) -> AccumulationFn:
    """Step accumulation: u -> (1/(1-lam)) * 1{u > lam}."""
    if not 0 < lam < 1:
        raise DomainError(f"seq_step threshold must be in (0,1), got {lam}")
    scale = 1.0 / (1.0 - lam)

    def _eval(u: np.ndarray) -> np.ndarray:
        return np.where(u > lam, scale, 0.0)

    return AccumulationFn(_eval, bound=scale, tag="seqstep", lam=lam)


def forward_stop() -> AccumulationFn:
    """Logarithmic ramp: u -> log(1/(1-u)).  Unbounded near u = 1."""

    def _eval(u: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return -np.log1p(-u)

    return AccumulationFn(_eval, bound=None, tag="forwardstop")


def user_accumulation(fn: Callable[[np.ndarray], np.ndarray],
                      bound: float | None = None) -> AccumulationFn:
    """Wrap a user function, checking monotonicity and the unit integral.

    The integral check is numerical (absolute tolerance 1e-6); the
    monotonicity check is on a fixed grid, which catches any violation on
    an interval wider than ~1/512.
    """
    acc = AccumulationFn(lambda u: np.asarray(fn(u), dtype=float),
                         bound=bound, tag="user")
    grid = np.linspace(0.0, 1.0, _MONOTONE_GRID, endpoint=False)
    vals = acc(grid)
    if np.any(np.diff(vals) < -1e-12):
        raise DomainError("accumulation function must be nondecreasing on [0,1]")
    if np.any(vals < -1e-12):
        raise DomainError("accumulation function must be nonnegative")
    try:
        total, _ = integrate.quad(lambda u: float(acc(u)), 0.0, 1.0,
                                  epsabs=1e-9, limit=200)
    except Exception as exc:  # non-integrable user function
        raise QuadratureFailure(str(exc)) from exc
    if abs(total - 1.0) > _INTEGRAL_TOL:
        raise DomainError(
            f"accumulation function must integrate to 1, got {total:.8f}")
    if bound is not None and np.any(vals > bound + 1e-9):
        raise DomainError("declared bound is below observed values of h")
    return acc
