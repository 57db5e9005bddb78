"""Simultaneous high-probability FDP confidence envelopes over nested
rejection paths: sorted, pre-ordered, knockoff, interactive and online."""

__version__ = "0.1.0"

from .accumulation import AccumulationFn, forward_stop, seq_step, user_accumulation
from .constants import (BoundConstant, ThetaCase, acc_bounded, acc_general,
                        constant_knockoff, constant_online_adaptive,
                        constant_online_simple, constant_preorder_acc_bounded,
                        constant_preorder_acc_general, constant_sel,
                        constant_sort, selective, simple, solve_theta)
from .envelopes import (EnvelopeCurve, compute_envelope, dkw_envelope,
                        robbins_envelope, true_fdp_curve)
from .online import OnlineMonitor, OnlinePoint
from .paths import (KnockoffStats, Path, TruthMask, VhatSeries,
                    build_knockoff_path, build_online_path,
                    build_preordered_path, build_sorted_path, vhat_acc,
                    vhat_sel)
from .session import Session, SessionConfig, mask_pvalues, new_session
from .simulate import (SimConfig, bh_overshoot_experiment, coverage_experiment,
                       correlation_sweep, gen_ar1_pvalues,
                       gen_exponential_ordering, gen_gaussian_pvalues,
                       poisson_hitting_check, pointwise_fdp_quantile, run_bh)

__all__ = [name for name in dir() if not name.startswith("_")]
