"""Command-line front end.

Subcommands: ``simulate``, ``sweep``, ``verify-bound``, ``analytic`` and
``check``.  Each reads a TOML run configuration (``--config``) and writes a
JSON report or a CSV table.  Scientific outcomes are data: only malformed
input (exit 2) and bound commands whose hypotheses fail (exit 3) end with a
nonzero status; ``verify-bound`` exits 1 when the bound ordering is violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace

from . import analytic, glassey
from .config import RunConfig, apply_axis, load_config, parse_config
from .errors import ConfigError, InapplicableBoundError, KerrBlowupError
from .integrator import BlowupReport, integrate

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_CONFIG, EXIT_INAPPLICABLE = 0, 1, 2, 3


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, complex):
        return [_finite(obj.real), _finite(obj.imag)]
    return _finite(obj)


def dumps(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _require(cfg: RunConfig, *, slab=True, ic=True) -> None:
    if slab and cfg.profile is None:
        raise ConfigError("a 'physical' or 'nondimensional' block is required")
    if ic and cfg.ic is None:
        raise ConfigError("an 'ic' block is required")


def _blowup_fields(rep: BlowupReport) -> dict:
    return {
        "blew_up": rep.blew_up,
        "z_star_estimate": rep.z_star_estimate,
        "z_reached": rep.z_reached,
        "reason": rep.reason,
        "low_confidence": rep.low_confidence,
        "bound_gamma": rep.bound_gamma,
        "bound_closed_form": rep.bound_closed_form,
        "solver": {"accepted_steps": rep.accepted_steps, "rejected_steps": rep.rejected_steps},
    }


def run_simulation(cfg: RunConfig) -> tuple[dict, BlowupReport]:
    """Integrate the configured slab; return the JSON-ready report and the raw result."""
    _require(cfg)
    start = time.perf_counter()
    rep = integrate(cfg.profile, cfg.ic, cfg.integrator)
    elapsed = time.perf_counter() - start
    out = {
        "config": cfg.raw,
        "resolved_integrator": asdict(rep.config),
        "profile": {"z_max": cfg.profile.z_max, "a": cfg.profile.a, "b": cfg.profile.b,
                    "r": cfg.profile.r.to_dict(), "s": cfg.profile.s.to_dict()},
        "hypotheses": rep.hypotheses.to_dict(),
        "bounds": None if rep.bounds is None else rep.bounds.to_dict(),
        **_blowup_fields(rep),
    }
    if cfg.timing:
        out["wall_time_s"] = elapsed
    return out, rep


def cmd_simulate(cfg: RunConfig, trajectory_path=None) -> dict:
    report, rep = run_simulation(cfg)
    if trajectory_path:
        rep.trajectory.write_csv(trajectory_path)
    return report


def _sweep_point(raw: dict, names: tuple, values: tuple) -> dict:
    for name, value in zip(names, values):
        raw = apply_axis(raw, name, value)
    cfg = parse_config(raw)
    _require(cfg)
    rep = integrate(cfg.profile, cfg.ic, cfg.integrator)
    row = dict(zip(names, values))
    margin = None
    if rep.blew_up and rep.bound_gamma is not None:
        margin = rep.bound_gamma - rep.z_star_estimate
    row.update(
        blew_up=rep.blew_up,
        reason=rep.reason,
        z_reached=rep.z_reached,
        z_star_estimate=rep.z_star_estimate,
        gamma=rep.bound_gamma,
        closed_form_bound=rep.bound_closed_form,
        margin=margin,
    )
    return row


def cmd_sweep(cfg: RunConfig, workers: int | None = None) -> list[dict]:
    """Evaluate the sweep grid in row-major axis order."""
    _require(cfg)
    if not cfg.axes:
        raise ConfigError("field 'sweep.axes': at least one axis is required")
    names = tuple(a.name for a in cfg.axes)
    grid = list(itertools.product(*(a.values() for a in cfg.axes)))
    workers = cfg.workers if workers is None else workers
    args = ([cfg.raw] * len(grid), [names] * len(grid), grid)
    if workers <= 1 or len(grid) == 1:
        return list(map(_sweep_point, *args))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_point, *args, chunksize=max(1, len(grid) // (4 * workers))))


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0])
    writer.writerow(header)
    for row in rows:
        cells = []
        for key in header:
            v = row[key]
            if v is None:
                cells.append("")
            elif isinstance(v, float):
                cells.append(f"{v:.17g}")
            else:
                cells.append(str(v).lower() if isinstance(v, bool) else str(v))
        writer.writerow(cells)
    return buf.getvalue()


def cmd_verify_bound(cfg: RunConfig) -> dict:
    """Compare the blow-up point against the chain of upper bounds.

    Raises :class:`InapplicableBoundError` when the hypotheses fail.
    """
    z_star = None
    if cfg.glassey is not None:
        data = cfg.glassey
        hyp = None
    else:
        _require(cfg)
        hyp = glassey.check_hypotheses(cfg.profile, cfg.ic)
        if not hyp.passed:
            raise InapplicableBoundError("hypotheses fail: " + "; ".join(hyp.failures()))
        data = glassey.glassey_data(cfg.profile, cfg.ic)
        if cfg.verify_simulate:
            z_star = integrate(cfg.profile, cfg.ic, cfg.integrator, attach_bounds=False).z_star_estimate
    data.require_admissible()
    res = glassey.gamma_quadrature(data)
    chain = [res.gamma_quadrature, res.gamma_closed_q, res.l_star_nondim]
    if z_star is not None:
        chain.insert(0, z_star)
    ordering = all(x <= y for x, y in zip(chain, chain[1:]))
    return {
        "config": cfg.raw,
        "glassey_data": asdict(data),
        "hypotheses": None if hyp is None else hyp.to_dict(),
        "z_star_estimate": z_star,
        "gamma_quadrature": res.gamma_quadrature,
        "quadrature_error_estimate": res.quadrature_error_estimate,
        "gamma_closed_q": res.gamma_closed_q,
        "closed_form_bound": res.l_star_nondim,
        "ordering_passed": ordering,
    }


def cmd_analytic(cfg: RunConfig) -> tuple[dict, str]:
    """Summary numbers and a CSV of samples of the closed-form solution."""
    if cfg.analytic is None:
        raise ConfigError("an 'analytic' block is required")
    p = cfg.analytic
    zs = analytic.z_star(p)
    e0, de0 = analytic.initial_conditions(p)
    l_star = glassey.l_star_physical(p.k, p.sigma, e0, de0)
    summary = {"z_star": zs, "A": analytic.amplitude_A(p), "L_star": l_star, "L_star_over_z_star": l_star / zs}
    samples = analytic.sample(p, cfg.analytic_fraction, cfg.analytic_points)
    summary["max_relative_residual"] = float(samples["relative_residual"].max())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["z", "Re_E", "Im_E", "Re_dE", "Im_dE", "relative_residual"])
    for z, e, de, res in zip(samples["z"], samples["E"], samples["dE"], samples["relative_residual"]):
        writer.writerow([f"{v:.17g}" for v in (z, e.real, e.imag, de.real, de.imag, res)])
    return summary, buf.getvalue()


def cmd_check(cfg: RunConfig) -> dict:
    out = {"config_valid": True, "mode": cfg.mode}
    if cfg.profile is not None:
        out["profile"] = {"z_max": cfg.profile.z_max, "a": cfg.profile.a, "b": cfg.profile.b}
    if cfg.profile is not None and cfg.ic is not None:
        out["hypotheses"] = glassey.check_hypotheses(cfg.profile, cfg.ic).to_dict()
    return out


def _write(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kerrblowup", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=["simulate", "sweep", "verify-bound", "analytic", "check"])
    parser.add_argument("--config", required=True, help="TOML run configuration")
    parser.add_argument("--out", help="report (JSON) or table (CSV) path; '-' for stdout")
    parser.add_argument("--trajectory", help="write the accepted steps as CSV (simulate)")
    parser.add_argument("--workers", type=int, help="worker processes for sweeps")
    parser.add_argument("--tol", type=float, help="override integrator rel_tol")
    parser.add_argument("--quiet", action="store_true", help="suppress the summary on stderr")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    def say(msg):
        if not args.quiet:
            print(msg, file=sys.stderr)

    try:
        cfg = load_config(args.config)
        if args.tol is not None:
            if not args.tol > 0:
                raise ConfigError("--tol must be positive")
            cfg.integrator = replace(cfg.integrator, rel_tol=args.tol)
            cfg.raw.setdefault("integrator", {})["rel_tol"] = args.tol
        out = args.out or cfg.output.get(
            "table" if args.command in ("sweep", "analytic") else "report"
        )
        if args.command == "simulate":
            report = cmd_simulate(cfg, args.trajectory or cfg.output.get("trajectory"))
            _write(dumps(report), out)
            say(f"blew_up={report['blew_up']} z_star={report['z_star_estimate']} reason={report['reason']}")
        elif args.command == "sweep":
            rows = cmd_sweep(cfg, args.workers)
            _write(sweep_csv(rows), out)
            say(f"{len(rows)} grid points evaluated")
        elif args.command == "verify-bound":
            report = cmd_verify_bound(cfg)
            _write(dumps(report), out)
            say(f"ordering {'passed' if report['ordering_passed'] else 'FAILED'}")
            return EXIT_OK if report["ordering_passed"] else EXIT_VERIFY_FAILED
        elif args.command == "analytic":
            summary, table = cmd_analytic(cfg)
            _write(table, out)
            stream = sys.stderr if out in (None, "-") else sys.stdout
            if not (args.quiet and stream is sys.stderr):
                for key in ("z_star", "A", "L_star", "L_star_over_z_star", "max_relative_residual"):
                    print(f"{key} = {summary[key]:.10g}", file=stream)
        else:
            _write(dumps(cmd_check(cfg)), out)
    except InapplicableBoundError as exc:
        print(f"inapplicable: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except (KerrBlowupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
