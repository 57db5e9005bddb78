"""Multipliers c(alpha) turning a false-discovery estimate into a
simultaneous high-probability envelope, together with the transcendental
roots theta_x that certify them.

Each bound family pairs a closed-form c(alpha) with a case of the root
equation; the two are cross-checked through exp(-a * theta * c) = alpha.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from scipy import integrate

from .accumulation import AccumulationFn
from .errors import (AlphaOutOfProvenRange, DomainError, NoRoot,
                     NonConvergence, QuadratureFailure)

# Families a resolved constant can belong to.
FAMILIES = ("sort", "preorder-acc-general", "preorder-acc-bounded", "sel",
            "knockoff", "online-simple", "online-adaptive")

# Proven validity limit of the sorted-path constant; beyond it the formula
# still evaluates but the guarantee is only supported numerically.
SORT_ALPHA_LIMIT = 0.31

_BISECT_WIDTH = 1e-13
_RESIDUAL_TOL = 1e-10
_BRACKET_MAX = 1e6


@dataclass(frozen=True)
class ThetaCase:
    """One case of the root equation for theta_x.

    variant: "acc-general" (general accumulation function h),
    "acc-bounded" (h bounded by B), "selective" (threshold estimator with
    increment bound B), or "simple" (unit increments at committed levels).
    """

    variant: str
    h: AccumulationFn | None = None
    B: float | None = None

    def __post_init__(self):
        if self.variant == "acc-general":
            if self.h is None:
                raise DomainError("acc-general case needs an accumulation function")
        elif self.variant in ("acc-bounded", "selective"):
            if self.B is None or self.B <= 0:
                raise DomainError(f"{self.variant} case needs B > 0")
        elif self.variant != "simple":
            raise DomainError(f"unknown theta case {self.variant!r}")


def acc_general(h: AccumulationFn) -> ThetaCase:
    return ThetaCase("acc-general", h=h)


def acc_bounded(B: float) -> ThetaCase:
    return ThetaCase("acc-bounded", B=B)


def selective(B: float) -> ThetaCase:
    return ThetaCase("selective", B=B)


def simple() -> ThetaCase:
    return ThetaCase("simple")


@dataclass(frozen=True)
class BoundConstant:
    """A resolved multiplier c together with the tuple that produced it."""

    c: float
    theta: float
    alpha: float
    a: float
    family: str

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        if self.c < 1.0 - 1e-12:
            raise DomainError(f"multiplier must be >= 1, got {self.c}")


def _acc_integral(h: AccumulationFn, s: float) -> float:
    """Evaluate int_0^1 exp(-s * h(u)) du, exactly for the builtins."""
    if h.tag == "seqstep":
        lam = h.lam
        return lam + (1.0 - lam) * math.exp(-s / (1.0 - lam))
    if h.tag == "forwardstop":
        # h(u) = -log(1-u), so the integrand is (1-u)^s.
        return 1.0 / (1.0 + s)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            val, _ = integrate.quad(lambda u: math.exp(-s * float(h(u))),
                                    0.0, 1.0, epsabs=1e-12, limit=200)
    except Exception as exc:
        raise QuadratureFailure(str(exc)) from exc
    return val


def _residual(case: ThetaCase, x: float) -> Callable[[float], float]:
    """Left-minus-right side of the case's equation, as a function of theta."""
    if case.variant == "acc-general":
        h = case.h

        def f(theta: float) -> float:
            return _acc_integral(h, theta * x) - math.exp(-theta)
    elif case.variant == "acc-bounded":
        B = case.B

        def f(theta: float) -> float:
            return math.exp(-theta) + (1.0 - math.exp(-theta * x * B)) / B - 1.0
    elif case.variant == "selective":
        B = case.B

        def f(theta: float) -> float:
            return math.exp(theta) - (1.0 - math.exp(-theta * x * B)) / B - 1.0
    else:  # simple

        def f(theta: float) -> float:
            return math.exp(theta) - 1.0 - theta * x

    return f


def solve_theta(case: ThetaCase, x: float, a: float = 1.0) -> float:
    """Find the unique positive root theta_x of the case's equation.

    The residual vanishes at theta = 0 for every case, so the search starts
    just above zero, doubles until the residual changes sign, bisects the
    bracket down to width 1e-13, and finishes with a Newton polish.  The
    regularization a does not enter the equation itself (it only couples
    theta and x through the confidence identity) but is validated here for
    interface uniformity.
    """
    if x <= 1.0:
        raise NoRoot(f"root degenerates to 0 for x <= 1 (got x={x})")
    if a <= 0:
        raise DomainError(f"regularization must be positive, got a={a}")

    f = _residual(case, x)
    lo = 1e-8
    f_lo = f(lo)
    if f_lo == 0.0:
        # Residual is O(theta) near zero; an exact zero here means the
        # equation is degenerate for this case.
        raise NoRoot("residual vanishes identically near zero")
    hi = 1e-4
    f_hi = f(hi)
    while (f_lo > 0) == (f_hi > 0):
        hi *= 2.0
        if hi > _BRACKET_MAX:
            raise NoRoot(
                f"no sign change on (1e-8, {_BRACKET_MAX:g}) for {case.variant}")
        f_hi = f(hi)

    for _ in range(200):
        if hi - lo <= _BISECT_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    else:
        raise NonConvergence("bisection failed to shrink the bracket")

    theta = 0.5 * (lo + hi)
    # Newton polish with a central-difference derivative; keep only if it
    # actually reduces the residual (quadrature noise can defeat it).
    step = 1e-7
    deriv = (f(theta + step) - f(theta - step)) / (2 * step)
    if deriv != 0.0:
        polished = theta - f(theta) / deriv
        if lo <= polished <= hi and abs(f(polished)) <= abs(f(theta)):
            theta = polished

    if abs(f(theta)) > _RESIDUAL_TOL:
        raise NonConvergence(
            f"residual {f(theta):.3e} above tolerance for {case.variant}")
    return theta


def _check_alpha_a(alpha: float, a: float) -> float:
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must be in (0,1), got {alpha}")
    if a <= 0:
        raise DomainError(f"regularization must be positive, got {a}")
    return math.log(1.0 / alpha)


def constant_sort(alpha: float, allow_unproven_alpha: bool = False) -> BoundConstant:
    """Constant for the p-value-sorted path: log(1/alpha)/log(1+log(1/alpha)).

    Only proven for alpha <= 0.31; the override evaluates the same formula
    beyond that with a warning, since numerical evidence (but no proof)
    supports it there.
    """
    L = _check_alpha_a(alpha, 1.0)
    if alpha > SORT_ALPHA_LIMIT:
        if not allow_unproven_alpha:
            raise AlphaOutOfProvenRange(
                f"sorted-path constant is proven only for alpha <= "
                f"{SORT_ALPHA_LIMIT}; got {alpha} (pass allow_unproven_alpha "
                f"to evaluate anyway)")
        warnings.warn(
            "sorted-path constant beyond alpha=0.31 rests on numerical "
            "evidence only", RuntimeWarning, stacklevel=2)
    theta = math.log1p(L)
    return BoundConstant(c=L / theta, theta=theta, alpha=alpha, a=1.0,
                         family="sort")


def constant_preorder_acc_general(alpha: float, a: float,
                                  h: AccumulationFn) -> BoundConstant:
    """Constant for a pre-ordered path with a general accumulation function."""
    L = _check_alpha_a(alpha, a)
    # int_0^1 alpha^{h(u)/a} du, via the same kernel as the root equation.
    integral = _acc_integral(h, L / a)
    if not 0 < integral < 1:
        if integral >= 1:
            # h == 0 a.e. would give integral 1; a valid h gives < 1 except
            # in degenerate limits where c -> 1.
            return BoundConstant(c=1.0, theta=L / a, alpha=alpha, a=a,
                                 family="preorder-acc-general")
        raise QuadratureFailure(f"integral evaluated to {integral}")
    theta = -math.log(integral)
    return BoundConstant(c=L / (a * theta), theta=theta, alpha=alpha, a=a,
                         family="preorder-acc-general")


def constant_preorder_acc_bounded(alpha: float, a: float, B: float) -> BoundConstant:
    """Constant for a pre-ordered path with accumulation function bounded by B."""
    L = _check_alpha_a(alpha, a)
    if B < 1:
        raise DomainError(f"bound B must be >= 1 (h integrates to 1), got {B}")
    inner = 1.0 - (1.0 - alpha ** (B / a)) / B
    if inner <= 0:
        raise DomainError(f"1 - (1 - alpha^(B/a))/B = {inner} <= 0")
    theta = -math.log(inner)
    if theta == 0.0:  # B = 1 degenerates to c = 1
        return BoundConstant(c=1.0, theta=L / a, alpha=alpha, a=a,
                             family="preorder-acc-bounded")
    return BoundConstant(c=L / (a * theta), theta=theta, alpha=alpha, a=a,
                         family="preorder-acc-bounded")


def constant_sel(alpha: float, a: float, B: float,
                 family: str = "sel") -> BoundConstant:
    """Constant for threshold-style estimators with increment bound B.

    Shared by the pre-ordered selective, interactive selective, knockoff
    (B = 1) and adaptive online families; the family tag records which.
    """
    L = _check_alpha_a(alpha, a)
    if B <= 0:
        raise DomainError(f"B must be positive, got {B}")
    if family not in ("sel", "knockoff", "online-adaptive"):
        raise DomainError(f"constant_sel cannot produce family {family!r}")
    theta = math.log1p((1.0 - alpha ** (B / a)) / B)
    return BoundConstant(c=L / (a * theta), theta=theta, alpha=alpha, a=a,
                         family=family)


def constant_knockoff(alpha: float, a: float = 1.0) -> BoundConstant:
    """Knockoff-path constant: log(1/alpha)/(a*log(2 - alpha^(1/a)))."""
    return constant_sel(alpha, a, B=1.0, family="knockoff")


def constant_online_simple(alpha: float, a: float = 1.0) -> BoundConstant:
    """Constant for online paths with unit-level increments."""
    L = _check_alpha_a(alpha, a)
    theta = math.log1p(L / a)
    return BoundConstant(c=L / (a * theta), theta=theta, alpha=alpha, a=a,
                         family="online-simple")


def constant_online_adaptive(alpha: float, a: float, b_cap: float) -> BoundConstant:
    """Constant for adaptive online paths with sup_j alpha_j/(1-lambda_j) <= b_cap."""
    return constant_sel(alpha, a, B=b_cap, family="online-adaptive")


def theta_case_for(constant: BoundConstant,
                   h: AccumulationFn | None = None,
                   B: float | None = None) -> ThetaCase:
    """The root-equation case certifying a constant of the given family."""
    fam = constant.family
    if fam in ("sort", "online-simple"):
        return simple()
    if fam == "preorder-acc-general":
        if h is None:
            raise DomainError("acc-general certification needs h")
        return acc_general(h)
    if fam == "preorder-acc-bounded":
        if B is None:
            raise DomainError("acc-bounded certification needs B")
        return acc_bounded(B)
    # sel / knockoff / online-adaptive
    return selective(1.0 if fam == "knockoff" else B if B is not None else 1.0)
