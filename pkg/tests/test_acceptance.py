"""End-to-end checks of the statistical guarantees at full scale.

Each test prints a one-line verdict so the suite doubles as a validation
report when run with -s.  The Monte Carlo bands are binomial three-sigma
bands around the nominal level, so a correct implementation fails any
single check with probability well under 1e-2.
"""

import math

import numpy as np
import pytest

from fdpenvelope import (OnlineMonitor, SessionConfig, SimConfig,
                         bh_overshoot_experiment, build_online_path,
                         build_preordered_path, compute_envelope,
                         constant_online_simple,
                         constant_preorder_acc_general, constant_sel,
                         constant_sort, correlation_sweep,
                         coverage_experiment, forward_stop, new_session,
                         poisson_hitting_check, selective, simple,
                         solve_theta, vhat_sel)
from fdpenvelope import constant_preorder_acc_bounded
from fdpenvelope.constants import _acc_integral, _residual, acc_bounded, acc_general
from fdpenvelope.errors import AlphaOutOfProvenRange
from fdpenvelope.paths import vhat_online_simple
from fdpenvelope.simulate import trial_generators

ALPHAS = (0.01, 0.05, 0.1, 0.2, 0.3)
AS = (0.5, 1.0, 2.0)


def _report(name: str, detail: str):
    print(f"[acceptance] {name}: {detail}")


def _band(alpha: float, reps: int) -> float:
    return alpha + 3.0 * math.sqrt(alpha * (1.0 - alpha) / reps)


def test_knockoff_constant_value():
    c = constant_sel(0.05, 1.0, 1.0).c
    _report("knockoff constant", f"c(0.05) = {c:.6f}")
    assert c == pytest.approx(4.4859, abs=1e-3)


def test_sorted_constant_boundary():
    c = constant_sort(0.31).c
    _report("sorted boundary", f"c(0.31) = {c:.6f}")
    assert c == pytest.approx(1.510, abs=0.005)
    with pytest.raises(AlphaOutOfProvenRange):
        constant_sort(0.5)


def test_theta_equation_residuals():
    worst = 0.0
    for alpha in ALPHAS:
        for a in AS:
            pairs = [(simple(), constant_online_simple(alpha, a)),
                     (acc_general(forward_stop()),
                      constant_preorder_acc_general(alpha, a, forward_stop())),
                     (acc_bounded(2.0),
                      constant_preorder_acc_bounded(alpha, a, 2.0)),
                     (selective(2.0), constant_sel(alpha, a, 2.0))]
            if a == 1.0:
                pairs.append((simple(), constant_sort(alpha)))
                pairs.append((selective(1.0),
                              constant_sel(alpha, a, 1.0, family="knockoff")))
            for case, con in pairs:
                theta = solve_theta(case, con.c, a)
                res = abs(_residual(case, con.c)(theta))
                ident = abs(math.exp(-a * theta * con.c) - alpha)
                worst = max(worst, res, ident)
                assert res < 1e-9
                assert ident < 1e-9
    _report("theta residuals", f"worst residual {worst:.2e}")


def test_forwardstop_reduction():
    worst = 0.0
    for alpha in ALPHAS:
        for a in AS:
            general = constant_preorder_acc_general(alpha, a, forward_stop()).c
            online = constant_online_simple(alpha, a).c
            worst = max(worst, abs(general - online))
            assert abs(general - online) < 1e-9
            # the integral itself reduces to a/(a + log(1/alpha))
            L = math.log(1.0 / alpha)
            assert _acc_integral(forward_stop(), L / a) == pytest.approx(
                a / (a + L), abs=1e-12)
    _report("forwardstop identity", f"worst gap {worst:.2e}")


def test_coverage_sorted():
    result = coverage_experiment(
        "sorted", SimConfig(n=2500, seed=101, reps=2000), alpha=0.1)
    band = _band(0.1, 2000)
    _report("coverage sorted",
            f"violation {result.violation_rate:.4f} <= {band:.4f}")
    assert result.violation_rate <= band


def test_coverage_knockoff():
    result = coverage_experiment(
        "knockoff", SimConfig(n=1000, seed=102, reps=2000), alpha=0.05)
    _report("coverage knockoff",
            f"violation {result.violation_rate:.4f} <= 0.065")
    assert result.violation_rate <= 0.065


def test_coverage_online_simple():
    result = coverage_experiment(
        "online-simple", SimConfig(n=2500, seed=103, reps=2000), alpha=0.1)
    band = _band(0.1, 2000)
    _report("coverage online-simple",
            f"violation {result.violation_rate:.4f} <= {band:.4f}")
    assert result.violation_rate <= band


def test_coverage_preorder_sel():
    result = coverage_experiment(
        "preorder-sel", SimConfig(n=2500, seed=104, reps=2000), alpha=0.1)
    band = _band(0.1, 2000)
    _report("coverage preorder-sel",
            f"violation {result.violation_rate:.4f} <= {band:.4f}")
    assert result.violation_rate <= band


def test_robbins_crossover():
    # unfloored bounds at alpha = 0.1, a = 1: c*(1 + v) vs v/alpha where
    # v = n*t.  They cross where the linear baseline bound equals
    # c / (1/alpha - c) * (1/alpha) = 2.39
    c = constant_sort(0.1).c
    v_cross = c / (10.0 - c)
    robbins_at_cross = 10.0 * v_cross
    _report("robbins crossover",
            f"baseline bound at crossing {robbins_at_cross:.4f}")
    assert robbins_at_cross == pytest.approx(2.4, abs=0.05)
    for v in np.linspace(0.0, 2.0, 201):
        proposed = c * (1.0 + v)
        baseline = 10.0 * v
        assert (proposed < baseline) == (baseline > robbins_at_cross + 1e-12)


def test_correlation_calibration():
    rhos = np.round(np.arange(-0.9, 0.95, 0.1), 10)
    results = correlation_sweep(
        "sorted", SimConfig(n=2500, seed=105, reps=500), 0.1, rhos)
    by_rho = {r.config.rho: r.max_ratio_quantile for r in results}
    _report("correlation calibration",
            f"0.9-quantile at rho=0 is {by_rho[0.0]:.4f}")
    assert 0.85 <= by_rho[0.0] <= 1.0


def test_bh_overshoot_monotone():
    config = SimConfig(n=2500, n_nonnull=100, mu=4.0, seed=106, reps=1000)
    result = bh_overshoot_experiment(config)
    _report("bh overshoot",
            "mean by q_min " + np.array2string(result.mean, precision=3))
    assert np.all(np.diff(result.mean) <= 1e-12)
    assert np.all(np.diff(result.q90) <= 1e-12)
    # the finite-grid statistic is dominated trial by trial
    assert np.all(result.qset_ratios <= result.ratios[:, 0] + 1e-12)


def test_poisson_domination():
    result = poisson_hitting_check(50, 1.5, 100_000, seed=107)
    _report("poisson domination",
            f"p_emp {result.p_empirical:.4f} <= p_poi {result.p_poisson:.4f}"
            f" + 3*{result.se_joint:.4f}")
    assert result.holds


def test_online_replay_equivalence():
    rng = np.random.default_rng(108)
    for _ in range(100):
        n = int(rng.integers(1, 80))
        levels = rng.uniform(0.005, 0.2, size=n)
        p = rng.random(n)
        monitor = OnlineMonitor("simple", alpha=0.1)
        points = [monitor.observe(monitor.commit_level(a_j), p_j)
                  for a_j, p_j in zip(levels, p)]
        curve = compute_envelope(build_online_path(p, levels),
                                 vhat_online_simple(levels),
                                 constant_online_simple(0.1))
        for j, pt in enumerate(points, start=1):
            assert pt.size == curve.size[j]
            assert pt.v_hat == curve.v_hat[j]
            assert pt.v_bar == curve.v_bar[j]
            assert pt.fdp_bar_raw == curve.fdp_bar_raw[j]
            assert pt.fdp_bar == curve.fdp_bar[j]
    _report("online replay", "100 streams field-exact")


def test_session_batch_equivalence():
    rng = np.random.default_rng(109)
    for _ in range(100):
        n = int(rng.integers(1, 50))
        p = rng.random(n)
        p_star = float(rng.uniform(0.2, 0.6))
        lam = float(rng.uniform(p_star, 0.9))
        config = SessionConfig(p_star=p_star, lam=lam, alpha=0.1)
        session = new_session(p, None, config)
        order = rng.permutation(n)
        for i in order:
            session.select_next(f"H{i + 1}")
        pts = session.envelope_points()
        curve = compute_envelope(
            build_preordered_path(p, order, p_star),
            vhat_sel(p, order, p_star, lam),
            constant_sel(0.1, 1.0, config.b))
        assert [pt["size"] for pt in pts] == curve.size.tolist()
        assert [pt["v_hat"] for pt in pts] == curve.v_hat.tolist()
        assert [pt["v_bar"] for pt in pts] == curve.v_bar.tolist()
        assert [pt["fdp_bar_raw"] for pt in pts] == curve.fdp_bar_raw.tolist()
        assert [pt["fdp_bar"] for pt in pts] == curve.fdp_bar.tolist()
    _report("session batch equivalence", "100 sessions exact")
