"""Interactive-ordering sessions.

The analyst sees side information and masked p-values, picks the next
hypothesis, and its p-value is unmasked; the live envelope is the selective
pre-ordered bound on the prefix chosen so far.  Raw p-values for unselected
hypotheses never leave the session object: snapshots only carry the masked
values, so the information firewall is enforced by construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from .constants import constant_sel
from .envelopes import FLOOR_EPS
from .errors import AlreadySelected, ConfigInvalid, UnknownId


def mask_pvalues(p, p_star: float) -> np.ndarray:
    """g(p) = min(p, (p_star/(1-p_star)) * (1-p)).

    At p_star = 1/2 this is min(p, 1-p); the preimage of a masked value is
    a two-point set, so significance is not recoverable from g alone.
    """
    if not 0 < p_star < 1:
        raise ConfigInvalid(f"p_star must be in (0,1), got {p_star}")
    p = np.asarray(p, dtype=float)
    return np.minimum(p, (p_star / (1.0 - p_star)) * (1.0 - p))


@dataclass(frozen=True)
class SessionConfig:
    p_star: float
    lam: float
    alpha: float
    a: float = 1.0

    def __post_init__(self):
        if not 0 < self.p_star < 1:
            raise ConfigInvalid(f"p_star must be in (0,1), got {self.p_star}")
        if self.lam < self.p_star or not self.lam < 1:
            raise ConfigInvalid(
                f"need p_star <= lambda < 1, got ({self.p_star}, {self.lam})")
        if not 0 < self.alpha < 1:
            raise ConfigInvalid(f"alpha must be in (0,1), got {self.alpha}")
        if self.a <= 0:
            raise ConfigInvalid(f"a must be positive, got {self.a}")

    @property
    def b(self) -> float:
        return self.p_star / (1.0 - self.lam)


class Session:
    """One analyst's interactive ordering over a fixed hypothesis set.

    The bound constant is resolved at creation and never changes; the
    selection log is append-only so the filtration is auditable.
    """

    def __init__(self, ids: list[str], p, config: SessionConfig,
                 side_info: list[Any] | None = None):
        p = np.asarray(p, dtype=float)
        if len(ids) != p.size:
            raise ConfigInvalid("ids and p-values must have equal length")
        if len(set(ids)) != len(ids):
            raise ConfigInvalid("hypothesis ids must be unique")
        if np.any(p < 0) or np.any(p > 1) or np.any(np.isnan(p)):
            raise ConfigInvalid("p-values must lie in [0,1]")
        if side_info is not None and len(side_info) != len(ids):
            raise ConfigInvalid("side_info length must match ids")
        self.config = config
        self.constant = constant_sel(config.alpha, config.a, config.b)
        self.ids = list(ids)
        self._index = {h: i for i, h in enumerate(self.ids)}
        self._p = p  # server-side only; never serialized for clients
        self.side_info = list(side_info) if side_info is not None else [None] * len(ids)
        self.masked = mask_pvalues(p, config.p_star)
        self.prefix: list[dict] = []      # {id, p, included, v_hat, ...}
        self.remaining: list[str] = list(ids)
        self.log: list[dict] = []
        self._sum_vhat = 0.0
        self._rejections = 0
        self._points: list[dict] = [self._point(0)]

    def _point(self, k: int) -> dict:
        c, a = self.constant.c, self.constant.a
        v_bar = int(math.floor(c * (a + self._sum_vhat) + FLOOR_EPS))
        raw = v_bar / self._rejections if self._rejections else 0.0
        return {"k": k, "size": self._rejections, "v_hat": self._sum_vhat,
                "v_bar": v_bar, "fdp_bar_raw": raw, "fdp_bar": min(raw, 1.0)}

    def select_next(self, hyp_id: str) -> dict:
        if hyp_id not in self._index:
            raise UnknownId(f"unknown hypothesis id {hyp_id!r}")
        if any(entry["id"] == hyp_id for entry in self.prefix):
            raise AlreadySelected(f"{hyp_id!r} was already selected")
        i = self._index[hyp_id]
        p = float(self._p[i])
        cfg = self.config
        included = p <= cfg.p_star
        if p > cfg.lam:
            self._sum_vhat += cfg.p_star / (1.0 - cfg.lam)
        if included:
            self._rejections += 1
        point = self._point(len(self.prefix) + 1)
        self.prefix.append({"id": hyp_id, "p": p, "included": included})
        self.remaining.remove(hyp_id)
        self.log.append({"action": "select", "id": hyp_id, "k": point["k"]})
        self._points.append(point)
        return {"id": hyp_id, "p_unmasked": p, "included": included,
                "envelope_point": point, "remaining": list(self.remaining)}

    def envelope_points(self) -> list[dict]:
        return [dict(pt) for pt in self._points]

    def state(self) -> dict:
        """Client-visible snapshot; raw p-values appear only in the prefix."""
        return {
            "config": asdict(self.config),
            "constant": {"c": self.constant.c, "alpha": self.constant.alpha,
                         "a": self.constant.a, "family": self.constant.family},
            "remaining": [{"id": h,
                           "x": self.side_info[self._index[h]],
                           "g_p": float(self.masked[self._index[h]])}
                          for h in self.remaining],
            "prefix": [dict(entry) for entry in self.prefix],
            "envelope": self.envelope_points(),
            "log": [dict(entry) for entry in self.log],
        }

    # --- persistence -----------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "config": asdict(self.config),
            "ids": self.ids,
            "p": self._p.tolist(),
            "side_info": self.side_info,
            "selected": [entry["id"] for entry in self.prefix],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "Session":
        doc = json.loads(text)
        session = cls(doc["ids"], np.asarray(doc["p"]),
                      SessionConfig(**doc["config"]),
                      side_info=doc.get("side_info"))
        for hyp_id in doc["selected"]:
            session.select_next(hyp_id)
        return session


def new_session(p, side_info, config: SessionConfig,
                ids: list[str] | None = None) -> Session:
    p = np.asarray(p, dtype=float)
    if ids is None:
        ids = [f"H{i + 1}" for i in range(p.size)]
    return Session(ids, p, config, side_info=side_info)
