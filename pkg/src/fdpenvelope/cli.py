"""Command-line surface.

Subcommands: `envelope` (batch paths over a p-value CSV), `knockoff`
(knockoff statistics CSV), `online` (JSONL stream), `simulate` (Monte Carlo
experiments), `serve` (session API + explorer UI).  Usage errors exit 2,
data errors exit 1.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import __version__
from .accumulation import forward_stop, seq_step
from .constants import (constant_knockoff, constant_preorder_acc_bounded,
                        constant_preorder_acc_general, constant_sel,
                        constant_sort)
from .datasets import _parse_stream, envelope_csv_text, parse_dataset
from .envelopes import compute_envelope
from .errors import FdpError
from .online import OnlineMonitor
from .paths import (KnockoffStats, build_knockoff_path, build_preordered_path,
                    build_sorted_path, vhat_acc, vhat_sel)
from .simulate import (SimConfig, bh_overshoot_experiment,
                       correlation_sweep, coverage_experiment,
                       poisson_hitting_check)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _emit_meta(constant, extra=None):
    meta = {"family": constant.family, "alpha": constant.alpha,
            "a": constant.a, "c": constant.c, "theta": constant.theta}
    if extra:
        meta.update(extra)
    print(json.dumps(meta), file=sys.stderr)


def _write_text(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_envelope(args) -> int:
    dataset = parse_dataset(args.input, "pvalues")
    p = dataset.values
    if args.setting == "sort":
        constant = constant_sort(args.alpha,
                                 allow_unproven_alpha=args.allow_unproven_alpha)
        path, vhat = build_sorted_path(p)
    else:
        pi = np.arange(p.size)  # file order is the prior ordering
        if args.setting == "preorder-acc":
            h = seq_step(args.acc_lambda) if args.acc_fn == "seqstep" \
                else forward_stop()
            vhat = vhat_acc(p, pi, h)
            if h.bound is not None:
                constant = constant_preorder_acc_bounded(args.alpha, args.a,
                                                         h.bound)
            else:
                constant = constant_preorder_acc_general(args.alpha, args.a, h)
            path = build_preordered_path(p, pi, 1.0)
        else:  # preorder-sel
            lam = args.lam if args.lam is not None else args.pstar
            vhat = vhat_sel(p, pi, args.pstar, lam)
            constant = constant_sel(args.alpha, args.a,
                                    args.pstar / (1.0 - lam))
            path = build_preordered_path(p, pi, args.pstar)
    curve = compute_envelope(path, vhat, constant)
    _emit_meta(constant, {"n": path.n, "setting": args.setting})
    _write_text(envelope_csv_text(curve), args.out)
    return 0


def _cmd_knockoff(args) -> int:
    dataset = parse_dataset(args.input, "knockoff-w")
    stats = KnockoffStats(ids=dataset.ids, w=dataset.values)
    path, vhat = build_knockoff_path(stats)
    constant = constant_knockoff(args.alpha, args.a)
    curve = compute_envelope(path, vhat, constant)
    _emit_meta(constant, {"n": path.n, "dropped_zeros": path.dropped_zeros})
    _write_text(envelope_csv_text(curve), args.out)
    return 0


def _cmd_online(args) -> int:
    if args.input == "-":
        dataset_records = _parse_stream(sys.stdin, "<stdin>").records
    else:
        dataset_records = parse_dataset(args.input, "online-stream").records
    monitor = OnlineMonitor(args.mode, args.alpha, args.a,
                            b_cap=args.b_cap if args.mode == "adaptive" else None)
    out = open(args.out, "w", encoding="utf-8", newline="") if args.out \
        else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["k", "size", "v_hat", "v_bar", "fdp_bar_raw",
                         "fdp_bar"])
        import math

        from .envelopes import FLOOR_EPS
        v_bar0 = int(math.floor(monitor.constant.c * monitor.constant.a
                                + FLOOR_EPS))
        writer.writerow([0, 0, _fmt(0.0), v_bar0, _fmt(0.0), _fmt(0.0)])
        for rec in dataset_records:
            ticket = monitor.commit_level(rec["alpha"], rec.get("lambda"))
            point = monitor.observe(ticket, rec["p"])
            writer.writerow([point.j, point.size, _fmt(point.v_hat),
                             point.v_bar, _fmt(point.fdp_bar_raw),
                             _fmt(point.fdp_bar)])
    finally:
        if args.out:
            out.close()
    _emit_meta(monitor.constant, {"steps": monitor.step})
    return 0


def _cmd_simulate(args) -> int:
    config = SimConfig(n=args.n, n_nonnull=args.n_nonnull, mu=args.mu,
                       rho=args.rho, ordering_theta=args.ordering_theta,
                       seed=args.seed, reps=args.reps)
    if args.experiment == "coverage":
        result = coverage_experiment(args.setting, config, args.alpha, args.a)
        rows = [result.to_dict()]
        summary = {"experiment": "coverage", "results": rows}
    elif args.experiment == "correlation":
        rhos = np.round(np.arange(-0.9, 0.95, 0.1), 10)
        results = correlation_sweep(args.setting, config, args.alpha, rhos,
                                    a=args.a)
        rows = [{"rho": res.config.rho, **res.to_dict()} for res in results]
        summary = {"experiment": "correlation", "results": rows}
    elif args.experiment == "bh-overshoot":
        result = bh_overshoot_experiment(config)
        rows = [{"q_min": float(q), "mean": float(m), "q90": float(g)}
                for q, m, g in zip(result.q_min_grid, result.mean, result.q90)]
        summary = {"experiment": "bh-overshoot", **result.to_dict()}
    elif args.experiment == "poisson":
        result = poisson_hitting_check(args.n, args.x, args.reps,
                                       seed=args.seed)
        rows = [result.to_dict()]
        summary = {"experiment": "poisson", **result.to_dict()}
    else:
        raise FdpError(f"unknown experiment {args.experiment!r}")
    summary["config"] = {k: (v if not isinstance(v, np.generic) else v.item())
                         for k, v in vars(config).items()}

    lines = []
    if rows:
        cols = list(rows[0].keys())
        lines.append(",".join(cols))
        for row in rows:
            lines.append(",".join(
                _fmt(row[c]) if isinstance(row[c], float) else str(row[c])
                for c in cols))
    _write_text("\n".join(lines) + "\n", args.out)
    json_path = (args.out + ".json") if args.out else None
    if json_path:
        with open(json_path, "w", encoding="utf-8") as handle:
            json.dump(summary, handle, indent=2)
    else:
        print(json.dumps(summary), file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app
    app = create_app(static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdpenvelope",
        description="Simultaneous FDP confidence envelopes over rejection paths")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--alpha", type=float, default=0.1)
        sp.add_argument("--a", type=float, default=1.0,
                        help="additive regularization (default 1)")
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("envelope", help="batch envelope from a p-value CSV")
    common(sp)
    sp.add_argument("--setting", choices=["sort", "preorder-acc", "preorder-sel"],
                    default="sort")
    sp.add_argument("--pstar", type=float, default=0.5)
    sp.add_argument("--lambda", dest="lam", type=float, default=None)
    sp.add_argument("--acc-fn", choices=["seqstep", "forwardstop"],
                    default="seqstep")
    sp.add_argument("--acc-lambda", type=float, default=0.5,
                    help="threshold for the seqstep accumulation function")
    sp.add_argument("--allow-unproven-alpha", action="store_true")
    sp.add_argument("input")
    sp.set_defaults(func=_cmd_envelope)

    sp = sub.add_parser("knockoff", help="envelope from knockoff statistics")
    common(sp)
    sp.set_defaults(alpha=0.05)
    sp.add_argument("input")
    sp.set_defaults(func=_cmd_knockoff)

    sp = sub.add_parser("online", help="stream a JSONL record file (or '-')")
    common(sp)
    sp.add_argument("--mode", choices=["simple", "adaptive"], default="simple")
    sp.add_argument("--b-cap", type=float, default=None)
    sp.add_argument("input")
    sp.set_defaults(func=_cmd_online)

    sp = sub.add_parser("simulate", help="Monte Carlo experiments")
    common(sp)
    sp.add_argument("--experiment",
                    choices=["coverage", "correlation", "bh-overshoot",
                             "poisson"], required=True)
    sp.add_argument("--setting", default="sorted")
    sp.add_argument("--n", type=int, default=2500)
    sp.add_argument("--n-nonnull", type=int, default=0)
    sp.add_argument("--mu", type=float, default=0.0)
    sp.add_argument("--rho", type=float, default=0.0)
    sp.add_argument("--ordering-theta", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--reps", type=int, default=100)
    sp.add_argument("--x", type=float, default=1.5,
                    help="boundary slope for the poisson experiment")
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("serve", help="run the session API")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.add_argument("--static", default=None,
                    help="directory with the explorer UI bundle")
    sp.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FdpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
