import math

import numpy as np
import pytest

from fdpenvelope import (OnlineMonitor, build_online_path, compute_envelope,
                         constant_online_adaptive, constant_online_simple)
from fdpenvelope.envelopes import FLOOR_EPS
from fdpenvelope.errors import (BCapExceeded, DomainError, LambdaBelowAlpha,
                                MissingBCap, StaleTicket, TicketOutstanding)
from fdpenvelope.online import lord_style_levels
from fdpenvelope.paths import vhat_online_adaptive, vhat_online_simple


def test_simple_monitor_hand_computation():
    monitor = OnlineMonitor("simple", alpha=0.1)
    c = monitor.constant.c
    assert c == constant_online_simple(0.1).c

    t = monitor.commit_level(0.05)
    pt = monitor.observe(t, 0.01)
    assert pt.rejected and pt.size == 1
    assert pt.v_hat == pytest.approx(0.05)
    assert pt.v_bar == math.floor(c * 1.05 + FLOOR_EPS)
    assert pt.fdp_bar == 1.0  # v_bar = 2 over a single rejection

    t = monitor.commit_level(0.05)
    pt = monitor.observe(t, 0.9)
    assert not pt.rejected and pt.size == 1
    assert pt.v_hat == pytest.approx(0.10)


def test_ticket_discipline():
    monitor = OnlineMonitor("simple", alpha=0.1)
    first = monitor.commit_level(0.05)
    with pytest.raises(TicketOutstanding):
        monitor.commit_level(0.05)
    monitor.observe(first, 0.5)
    with pytest.raises(StaleTicket):
        monitor.observe(first, 0.5)  # already consumed
    fresh = monitor.commit_level(0.05)
    other = OnlineMonitor("simple", alpha=0.1).commit_level(0.05)
    with pytest.raises(StaleTicket):
        monitor.observe(other, 0.5)  # foreign ticket
    monitor.observe(fresh, 0.5)


def test_commit_level_validation():
    monitor = OnlineMonitor("simple", alpha=0.1)
    with pytest.raises(DomainError):
        monitor.commit_level(0.0)
    with pytest.raises(LambdaBelowAlpha):
        monitor.commit_level(0.2, lambda_j=0.1)
    t = monitor.commit_level(0.05)
    with pytest.raises(DomainError):
        monitor.observe(t, 1.5)


def test_adaptive_requirements():
    with pytest.raises(MissingBCap):
        OnlineMonitor("adaptive", alpha=0.1)
    with pytest.raises(DomainError):
        OnlineMonitor("simple", alpha=0.1, b_cap=1.0)
    with pytest.raises(DomainError):
        OnlineMonitor("nope", alpha=0.1)

    monitor = OnlineMonitor("adaptive", alpha=0.1, b_cap=0.2)
    assert monitor.constant.c == constant_online_adaptive(0.1, 1.0, 0.2).c
    with pytest.raises(DomainError):
        monitor.commit_level(0.05)  # lambda_j required
    with pytest.raises(BCapExceeded):
        monitor.commit_level(0.15, lambda_j=0.5)  # ratio 0.3 over the cap
    t = monitor.commit_level(0.1, lambda_j=0.5)  # ratio 0.2 is allowed
    pt = monitor.observe(t, 0.7)  # p > lambda: v_hat grows by 0.2
    assert pt.v_hat == pytest.approx(0.2)
    t = monitor.commit_level(0.1, lambda_j=0.5)
    pt = monitor.observe(t, 0.3)  # p <= lambda: no growth, but rejected? no
    assert pt.v_hat == pytest.approx(0.2)
    assert not pt.rejected


def test_lord_style_levels_are_valid():
    levels = lord_style_levels(50, wealth=0.05)
    assert len(levels) == 50
    assert sum(levels) == pytest.approx(0.05)
    assert all(levels[i] > levels[i + 1] for i in range(49))


def _random_stream(rng, n):
    levels = np.clip(rng.uniform(0.005, 0.2, size=n), 0.0, 1.0)
    p = rng.random(n)
    return levels, p


def test_simple_replay_matches_batch():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(1, 60))
        levels, p = _random_stream(rng, n)
        monitor = OnlineMonitor("simple", alpha=0.1)
        points = []
        for alpha_j, p_j in zip(levels, p):
            points.append(monitor.observe(monitor.commit_level(alpha_j), p_j))
        curve = compute_envelope(build_online_path(p, levels),
                                 vhat_online_simple(levels),
                                 constant_online_simple(0.1))
        for j, pt in enumerate(points, start=1):
            assert pt.size == curve.size[j]
            assert pt.v_hat == curve.v_hat[j]
            assert pt.v_bar == curve.v_bar[j]
            assert pt.fdp_bar_raw == curve.fdp_bar_raw[j]
            assert pt.fdp_bar == curve.fdp_bar[j]


def test_adaptive_replay_matches_batch():
    rng = np.random.default_rng(11)
    b_cap = 0.5
    for _ in range(20):
        n = int(rng.integers(1, 60))
        levels = rng.uniform(0.005, 0.05, size=n)
        p = rng.random(n)
        lambdas = rng.uniform(0.5, 0.8, size=n)  # ratios stay below b_cap
        monitor = OnlineMonitor("adaptive", alpha=0.1, b_cap=b_cap)
        points = [monitor.observe(monitor.commit_level(a_j, l_j), p_j)
                  for a_j, l_j, p_j in zip(levels, lambdas, p)]
        curve = compute_envelope(
            build_online_path(p, levels),
            vhat_online_adaptive(p, levels, lambdas, b_cap),
            constant_online_adaptive(0.1, 1.0, b_cap))
        for j, pt in enumerate(points, start=1):
            assert (pt.size, pt.v_hat, pt.v_bar) == (
                curve.size[j], curve.v_hat[j], curve.v_bar[j])
            assert pt.fdp_bar == curve.fdp_bar[j]
