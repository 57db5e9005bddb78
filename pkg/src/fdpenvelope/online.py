"""Streaming envelope over an online rejection path.

Predictability of the testing levels is the load-bearing hypothesis of the
online guarantee, so the API enforces it structurally: a level must be
committed (yielding a ticket) before the p-value it applies to can be
observed.  Committing twice without observing, or observing with anything
but the outstanding ticket, is an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import (BoundConstant, constant_online_adaptive,
                        constant_online_simple)
from .envelopes import FLOOR_EPS
from .errors import (BCapExceeded, DomainError, LambdaBelowAlpha,
                     MissingBCap, StaleTicket, TicketOutstanding)


@dataclass(frozen=True)
class Ticket:
    serial: int
    alpha_j: float
    lambda_j: float | None


@dataclass(frozen=True)
class OnlinePoint:
    """Envelope state emitted after one observation."""

    j: int
    rejected: bool
    size: int
    v_hat: float
    v_bar: int
    fdp_bar_raw: float
    fdp_bar: float


class OnlineMonitor:
    """Single-writer state machine for the simple or adaptive online bound.

    mode "simple" accumulates the committed levels; mode "adaptive"
    accumulates alpha_j/(1-lambda_j) on p_j > lambda_j and requires an
    up-front cap b_cap on alpha_j/(1-lambda_j), since the constant must be
    fixed before any data arrive.
    """

    def __init__(self, mode: str, alpha: float, a: float = 1.0,
                 b_cap: float | None = None):
        if mode not in ("simple", "adaptive"):
            raise DomainError(f"unknown mode {mode!r}")
        if mode == "adaptive":
            if b_cap is None or b_cap <= 0:
                raise MissingBCap("adaptive mode requires a positive b_cap")
            self.constant: BoundConstant = constant_online_adaptive(
                alpha, a, b_cap)
        else:
            if b_cap is not None:
                raise DomainError("b_cap only applies to adaptive mode")
            self.constant = constant_online_simple(alpha, a)
        self.mode = mode
        self.b_cap = b_cap
        self.step = 0
        self.sum_vhat = 0.0
        self.rejections = 0
        self.b_seen = 0.0
        self._pending: Ticket | None = None
        self._serial = 0

    def commit_level(self, alpha_j: float, lambda_j: float | None = None) -> Ticket:
        if self._pending is not None:
            raise TicketOutstanding(
                f"level for step {self._pending.serial} committed but not observed")
        if not 0 < alpha_j < 1:
            raise DomainError(f"alpha_j must be in (0,1), got {alpha_j}")
        if self.mode == "adaptive":
            if lambda_j is None:
                raise DomainError("adaptive mode requires lambda_j")
            ratio = alpha_j / (1.0 - lambda_j)
            if ratio > self.b_cap + 1e-12:
                raise BCapExceeded(
                    f"alpha_j/(1-lambda_j) = {ratio:.6g} exceeds cap {self.b_cap}")
        if lambda_j is not None and lambda_j < alpha_j:
            raise LambdaBelowAlpha(
                f"lambda_j={lambda_j} below alpha_j={alpha_j}")
        self._serial += 1
        ticket = Ticket(serial=self._serial, alpha_j=alpha_j, lambda_j=lambda_j)
        self._pending = ticket
        return ticket

    def observe(self, ticket: Ticket, p_j: float) -> OnlinePoint:
        if self._pending is None or ticket is not self._pending:
            raise StaleTicket("ticket does not match the outstanding commit")
        if not 0 <= p_j <= 1:
            raise DomainError(f"p-value must be in [0,1], got {p_j}")
        self._pending = None
        self.step += 1
        rejected = p_j <= ticket.alpha_j
        if rejected:
            self.rejections += 1
        if self.mode == "simple":
            self.sum_vhat += ticket.alpha_j
        else:
            ratio = ticket.alpha_j / (1.0 - ticket.lambda_j)
            self.b_seen = max(self.b_seen, ratio)
            if p_j > ticket.lambda_j:
                self.sum_vhat += ratio
        c, a = self.constant.c, self.constant.a
        v_bar = int(math.floor(c * (a + self.sum_vhat) + FLOOR_EPS))
        raw = v_bar / self.rejections if self.rejections else 0.0
        return OnlinePoint(j=self.step, rejected=rejected,
                           size=self.rejections, v_hat=self.sum_vhat,
                           v_bar=v_bar, fdp_bar_raw=raw,
                           fdp_bar=min(raw, 1.0))


def lord_style_levels(n: int, wealth: float = 0.05) -> list[float]:
    """A fixed decaying level sequence gamma_j proportional to 1/j^2.

    Example stream source for tests and demos only; this is not an FDR
    algorithm, just a valid predictable sequence.
    """
    norm = sum(1.0 / j**2 for j in range(1, n + 1))
    return [wealth / (j**2 * norm) for j in range(1, n + 1)]
