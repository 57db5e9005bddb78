"""Seeded data generators and Monte Carlo experiments.

Trials draw from counter-based Philox streams spawned per trial, so runs
are bit-reproducible and trials could be farmed out in parallel without
changing the results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal, stats

from .accumulation import AccumulationFn, seq_step
from .constants import (constant_knockoff, constant_online_simple,
                        constant_sel, constant_sort,
                        constant_preorder_acc_bounded)
from .envelopes import compute_envelope, true_fdp_curve
from .errors import DomainError
from .paths import (TruthMask, build_knockoff_path, build_online_path,
                    build_preordered_path, build_sorted_path, KnockoffStats,
                    vhat_acc, vhat_online_simple, vhat_sel)

DEFAULT_ONLINE_LEVEL = 0.05

_SETTINGS = ("sorted", "knockoff", "online-simple", "preorder-sel",
             "preorder-acc")


@dataclass(frozen=True)
class SimConfig:
    n: int
    n_nonnull: int = 0
    mu: float = 0.0
    rho: float = 0.0
    ordering_theta: float = 0.0
    seed: int = 0
    reps: int = 1

    def __post_init__(self):
        if not 0 <= self.n_nonnull <= self.n:
            raise DomainError("need 0 <= n_nonnull <= n")
        if not -1 < self.rho < 1:
            raise DomainError("rho must be in (-1,1)")
        if self.reps < 1:
            raise DomainError("reps must be >= 1")


def trial_generators(seed: int, reps: int) -> list[np.random.Generator]:
    """One independent counter-based stream per trial."""
    children = np.random.SeedSequence(seed).spawn(reps)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def _rng(config: SimConfig, rng: np.random.Generator | None) -> np.random.Generator:
    if rng is not None:
        return rng
    return trial_generators(config.seed, 1)[0]


def _truth_positions(config: SimConfig, rng: np.random.Generator) -> np.ndarray:
    """Indices of the non-nulls.

    With ordering_theta > 0, positions are drawn without replacement with
    probability mass proportional to exp(-(theta/n) * j) at position j
    (the exponential density with rate theta/n evaluated at the position),
    so larger theta concentrates non-nulls near the front.
    """
    m, n = config.n_nonnull, config.n
    if m == 0:
        return np.empty(0, dtype=np.int64)
    if config.ordering_theta <= 0:
        return np.arange(m, dtype=np.int64)
    j = np.arange(1, n + 1, dtype=float)
    weights = np.exp(-(config.ordering_theta / n) * j)
    weights /= weights.sum()
    return np.sort(rng.choice(n, size=m, replace=False, p=weights))


def gen_gaussian_pvalues(config: SimConfig,
                         rng: np.random.Generator | None = None
                         ) -> tuple[np.ndarray, TruthMask]:
    """Independent one-sided Gaussian p-values; nulls exactly Uniform(0,1)."""
    return gen_ar1_pvalues(config, rng, force_rho=0.0)


def gen_ar1_pvalues(config: SimConfig,
                    rng: np.random.Generator | None = None,
                    force_rho: float | None = None
                    ) -> tuple[np.ndarray, TruthMask]:
    """p-values from a stationary AR(1) Gaussian process with unit marginal
    variance; non-null means shifted by mu.  rho = 0 reduces exactly to the
    independent generator."""
    rng = _rng(config, rng)
    rho = config.rho if force_rho is None else force_rho
    eps = rng.standard_normal(config.n)
    if rho == 0.0:
        x = eps
    else:
        drive = eps.copy()
        drive[1:] *= math.sqrt(1.0 - rho * rho)  # x_0 stationary
        x = signal.lfilter([1.0], [1.0, -rho], drive)
    positions = _truth_positions(config, rng)
    is_null = np.ones(config.n, dtype=bool)
    is_null[positions] = False
    x = x.copy()
    x[positions] += config.mu
    return stats.norm.sf(x), TruthMask(is_null=is_null)


def gen_exponential_ordering(config: SimConfig,
                             rng: np.random.Generator | None = None
                             ) -> tuple[np.ndarray, TruthMask]:
    """Identity ordering with non-null positions tilted toward the front."""
    rng = _rng(config, rng)
    positions = _truth_positions(config, rng)
    is_null = np.ones(config.n, dtype=bool)
    is_null[positions] = False
    return np.arange(config.n, dtype=np.int64), TruthMask(is_null=is_null)


# --- coverage experiments -----------------------------------------------

@dataclass(frozen=True)
class CoverageResult:
    setting: str
    alpha: float
    a: float
    reps: int
    violation_rate: float
    max_ratio_quantile: float
    config: SimConfig

    def to_dict(self) -> dict:
        out = {"setting": self.setting, "alpha": self.alpha, "a": self.a,
               "reps": self.reps, "violation_rate": self.violation_rate,
               "max_ratio_quantile": self.max_ratio_quantile}
        out.update({f"config_{k}": v for k, v in vars(self.config).items()})
        return out


def _setting_trial(setting: str, config: SimConfig, alpha: float, a: float,
                   p_star: float, lam: float, h: AccumulationFn | None,
                   online_level: float):
    """Resolve the constant once and return a per-trial curve function."""
    if setting == "sorted":
        constant = constant_sort(alpha)

        def trial(rng):
            p, truth = gen_ar1_pvalues(config, rng)
            path, vhat = build_sorted_path(p)
            return path, vhat, truth
    elif setting == "knockoff":
        constant = constant_knockoff(alpha, a)

        def trial(rng):
            w = rng.standard_normal(config.n)
            is_null = np.ones(config.n, dtype=bool)
            if config.n_nonnull:
                w[:config.n_nonnull] += config.mu
                is_null[:config.n_nonnull] = False
            path, vhat = build_knockoff_path(KnockoffStats(
                ids=list(range(config.n)), w=w))
            return path, vhat, TruthMask(is_null=is_null)
    elif setting == "online-simple":
        constant = constant_online_simple(alpha, a)
        levels = np.full(config.n, online_level)

        def trial(rng):
            p, truth = gen_ar1_pvalues(config, rng)
            return build_online_path(p, levels), vhat_online_simple(levels), truth
    elif setting == "preorder-sel":
        constant = constant_sel(alpha, a, p_star / (1.0 - lam))
        pi = np.arange(config.n)

        def trial(rng):
            p, truth = gen_ar1_pvalues(config, rng)
            path = build_preordered_path(p, pi, p_star)
            return path, vhat_sel(p, pi, p_star, lam), truth
    elif setting == "preorder-acc":
        acc = h if h is not None else seq_step(lam)
        if acc.bound is None:
            raise DomainError("preorder-acc coverage needs a bounded h")
        constant = constant_preorder_acc_bounded(alpha, a, acc.bound)
        pi = np.arange(config.n)

        def trial(rng):
            p, truth = gen_ar1_pvalues(config, rng)
            path = build_preordered_path(p, pi, 1.0)
            return path, vhat_acc(p, pi, acc), truth
    else:
        raise DomainError(f"unknown setting {setting!r}; one of {_SETTINGS}")
    return constant, trial


def _sup_ratio(fdp: np.ndarray, fdp_bar: np.ndarray) -> tuple[bool, float]:
    violated = bool(np.any(fdp > fdp_bar + 1e-12))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(fdp_bar > 0, fdp / np.maximum(fdp_bar, 1e-300), 0.0)
    ratio = np.where((fdp_bar == 0) & (fdp > 0), np.inf, ratio)
    return violated, float(np.max(ratio)) if ratio.size else 0.0


def coverage_experiment(setting: str, config: SimConfig, alpha: float,
                        a: float = 1.0, p_star: float = 0.5, lam: float = 0.5,
                        h: AccumulationFn | None = None,
                        online_level: float = DEFAULT_ONLINE_LEVEL
                        ) -> CoverageResult:
    """Monte Carlo check of the simultaneous guarantee for one setting.

    Reports the fraction of trials with any envelope violation and the
    empirical 1-alpha quantile of sup_k FDP(R_k)/FDP-bar(R_k).
    """
    constant, trial = _setting_trial(setting, config, alpha, a, p_star, lam,
                                     h, online_level)
    violations = np.zeros(config.reps, dtype=bool)
    sup_ratios = np.zeros(config.reps)
    for i, rng in enumerate(trial_generators(config.seed, config.reps)):
        path, vhat, truth = trial(rng)
        curve = compute_envelope(path, vhat, constant)
        fdp = true_fdp_curve(path, truth)
        violations[i], sup_ratios[i] = _sup_ratio(fdp, curve.fdp_bar)
    return CoverageResult(
        setting=setting, alpha=alpha, a=a, reps=config.reps,
        violation_rate=float(np.mean(violations)),
        max_ratio_quantile=float(np.quantile(sup_ratios, 1.0 - alpha)),
        config=config)


def correlation_sweep(setting: str, config: SimConfig, alpha: float,
                      rhos, a: float = 1.0, **kwargs) -> list[CoverageResult]:
    """coverage_experiment across AR(1) correlations, shared seed."""
    results = []
    for rho in rhos:
        cfg = SimConfig(n=config.n, n_nonnull=config.n_nonnull, mu=config.mu,
                        rho=float(rho), ordering_theta=config.ordering_theta,
                        seed=config.seed, reps=config.reps)
        results.append(coverage_experiment(setting, cfg, alpha, a, **kwargs))
    return results


def pointwise_fdp_quantile(setting: str, config: SimConfig, alpha: float,
                           a: float = 1.0, **kwargs) -> np.ndarray:
    """Per-step empirical 1-alpha quantile of FDP(R_k), the reference curve
    plotted alongside the envelopes."""
    _, trial = _setting_trial(setting, config, alpha, a,
                              kwargs.pop("p_star", 0.5),
                              kwargs.pop("lam", 0.5),
                              kwargs.pop("h", None),
                              kwargs.pop("online_level", DEFAULT_ONLINE_LEVEL))
    fdps = np.zeros((config.reps, config.n + 1))
    for i, rng in enumerate(trial_generators(config.seed, config.reps)):
        path, _, truth = trial(rng)
        fdps[i] = true_fdp_curve(path, truth)
    return np.quantile(fdps, 1.0 - alpha, axis=0)


# --- BH and the overshoot experiment ------------------------------------

def run_bh(p, q: float) -> np.ndarray:
    """Benjamini-Hochberg step-up at level q; indices of rejected hypotheses."""
    p = np.asarray(p, dtype=float)
    n = p.size
    order = np.argsort(p, kind="stable")
    sorted_p = p[order]
    k = np.arange(1, n + 1)
    ok = np.flatnonzero(n * sorted_p <= q * k)
    if ok.size == 0:
        return np.empty(0, dtype=np.int64)
    k_star = ok[-1] + 1
    return np.sort(order[:k_star])


Q0_GRID = (0.01, 0.025, 0.05, 0.075, 0.1, 0.125, 0.15, 0.175, 0.2)


@dataclass(frozen=True)
class BhOvershootResult:
    q_min_grid: np.ndarray
    mean: np.ndarray           # per q_min, mean over trials of the max ratio
    q90: np.ndarray            # per q_min, 0.9 quantile
    qset_mean: float           # same statistic restricted to the finite q set
    qset_q90: float
    ratios: np.ndarray = field(repr=False)       # (reps, len(q_min_grid))
    qset_ratios: np.ndarray = field(repr=False)  # (reps,)

    def to_dict(self) -> dict:
        return {"q_min": self.q_min_grid.tolist(), "mean": self.mean.tolist(),
                "q90": self.q90.tolist(), "qset_mean": self.qset_mean,
                "qset_q90": self.qset_q90}


def _bh_trial_ratios(p: np.ndarray, is_null: np.ndarray,
                     q_min_grid: np.ndarray, q_set: np.ndarray
                     ) -> tuple[np.ndarray, float]:
    """max over q of FDP_BH(q)/q, exactly, via q-value breakpoints.

    The BH set is constant between consecutive q-values and the ratio is
    maximized at the left endpoint of each constancy interval, so the
    continuous-range maximum is attained at a breakpoint or at q_min.
    """
    n = p.size
    order = np.argsort(p, kind="stable")
    sorted_p = p[order]
    k = np.arange(1, n + 1)
    # q-value of step k: the smallest level at which R_k is rejected
    qv = np.minimum.accumulate((n * sorted_p / k)[::-1])[::-1]
    fdp = np.cumsum(is_null[order]) / k
    # steps actually achieved by BH for some q: last index of each qv run
    achieved = np.append(qv[:-1] < qv[1:], True)
    ach_qv = qv[achieved]
    ach_fdp = fdp[achieved]
    out = np.zeros(q_min_grid.size)
    for i, q_min in enumerate(q_min_grid):
        best = 0.0
        inside = ach_qv >= q_min
        if np.any(inside):
            best = float(np.max(ach_fdp[inside] / ach_qv[inside]))
        # boundary candidate: the set active at exactly q_min
        k0 = int(np.searchsorted(qv, q_min, side="right"))
        if k0 >= 1:
            best = max(best, float(fdp[k0 - 1] / q_min))
        out[i] = best
    k_set = np.searchsorted(qv, q_set, side="right")
    with np.errstate(invalid="ignore"):
        set_ratios = np.where(k_set >= 1, fdp[np.maximum(k_set - 1, 0)] / q_set, 0.0)
    return out, float(np.max(set_ratios)) if set_ratios.size else 0.0


def bh_overshoot_experiment(config: SimConfig, q_min_grid=None,
                            q_set=Q0_GRID) -> BhOvershootResult:
    """How far realized FDP of BH can exceed the nominal level when the
    level itself is chosen post hoc from [q_min, 1] or a finite set."""
    q_min_grid = np.asarray(
        q_min_grid if q_min_grid is not None else [0.01, 0.05, 0.1, 0.15, 0.2],
        dtype=float)
    q_set = np.asarray(q_set, dtype=float)
    ratios = np.zeros((config.reps, q_min_grid.size))
    qset_ratios = np.zeros(config.reps)
    for i, rng in enumerate(trial_generators(config.seed, config.reps)):
        p, truth = gen_ar1_pvalues(config, rng)
        ratios[i], qset_ratios[i] = _bh_trial_ratios(
            p, truth.is_null, q_min_grid, q_set)
    return BhOvershootResult(
        q_min_grid=q_min_grid,
        mean=ratios.mean(axis=0), q90=np.quantile(ratios, 0.9, axis=0),
        qset_mean=float(qset_ratios.mean()),
        qset_q90=float(np.quantile(qset_ratios, 0.9)),
        ratios=ratios, qset_ratios=qset_ratios)


# --- Poisson-domination sanity check ------------------------------------

@dataclass(frozen=True)
class PoissonCheckResult:
    p_empirical: float
    p_poisson: float
    se_joint: float
    reps: int

    @property
    def holds(self) -> bool:
        return self.p_empirical <= self.p_poisson + 3.0 * self.se_joint

    def to_dict(self) -> dict:
        return {"p_empirical": self.p_empirical, "p_poisson": self.p_poisson,
                "se_joint": self.se_joint, "reps": self.reps,
                "holds": self.holds}


def poisson_hitting_check(n: int, x: float, reps: int,
                          seed: int = 0) -> PoissonCheckResult:
    """Compare hitting probabilities of the boundary x + x*n*t on [0,1] for
    the uniform empirical count process vs a rate-n Poisson process.

    The empirical process should hit no more often (for x >= 1.5); the
    check allows 3 joint Monte Carlo standard errors of slack.
    """
    if x < 1.5:
        raise DomainError("the domination claim needs x >= 1.5")
    rng_emp, rng_poi = trial_generators(seed, 2)
    j = np.arange(1, n + 1)
    # Poisson arrivals past this column are irrelevant: hitting at index j
    # requires either j <= x*(1+n) or an astronomically unlikely count.
    m_cols = int(x * (n + 1)) + int(10 * math.sqrt(x * (n + 1))) + 20
    jp = np.arange(1, m_cols + 1)
    hits_emp = 0
    hits_poi = 0
    chunk = max(1, min(reps, 20000))
    done = 0
    while done < reps:
        b = min(chunk, reps - done)
        u = np.sort(rng_emp.random((b, n)), axis=1)
        hits_emp += int(np.sum(np.any(j >= x + x * n * u, axis=1)))
        t = np.cumsum(rng_poi.exponential(scale=1.0 / n, size=(b, m_cols)),
                      axis=1)
        hit = (jp >= x + x * n * t) & (t <= 1.0)
        hits_poi += int(np.sum(np.any(hit, axis=1)))
        done += b
    p_emp = hits_emp / reps
    p_poi = hits_poi / reps
    se = math.sqrt(p_emp * (1 - p_emp) / reps + p_poi * (1 - p_poi) / reps)
    return PoissonCheckResult(p_empirical=p_emp, p_poisson=p_poi,
                              se_joint=se, reps=reps)
