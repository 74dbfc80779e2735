"""Command-line interface: bound reports, M-sweeps, Monte-Carlo runs, oracle checks.

Subcommands: point, sweep, mc, link-budget, oracle-check.  Every command takes
parameters from flags or from a JSON config file (--config); flag values
override file values.  Exit codes: 0 success, 1 usage error, 2 validation or
oracle failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .bounds import (
    NumericalInstability,
    asymptotic_exponents,
    receiver_bounds,
)
from .fock import CutoffTooSmall, oracle_grid_rows
from .montecarlo import McConfig, simulate_homodyne, simulate_opa
from .params import InvalidParams, ProtocolParams
from .symplectic import NonPhysicalCovariance

#: Named parameter sets for the standard operating regimes.  The second set
#: compares a no-noise and a high-brightness regime, so it comes in two
#: variants.
PRESETS = {
    "figure1": {"kappa": 0.1, "ns": 0.004, "nb": 100.0},
    "figure2-no-noise": {"kappa": 0.1, "ns": 0.004, "nb": 0.0},
    "figure2-high-brightness": {"kappa": 0.1, "ns": 10.0, "nb": 100.0},
}

SWEEP_COLUMNS = [
    "M",
    "alice_opt_upper",
    "alice_opt_lower",
    "eve_upper",
    "eve_lower",
    "homodyne_upper",
    "opa_upper",
]


@dataclass(frozen=True)
class LinkBudget:
    """Fiber-link bookkeeping: bandwidth, bit duration and loss fix kappa, M and rate."""

    bandwidth_hz: float
    bit_duration_s: float
    fiber_km: float
    loss_db_per_km: float

    def __post_init__(self):
        if self.bandwidth_hz <= 0.0 or self.bit_duration_s <= 0.0:
            raise InvalidParams("bandwidth and bit duration must be positive")
        if self.fiber_km < 0.0 or self.loss_db_per_km < 0.0:
            raise InvalidParams("fiber length and loss must be nonnegative")

    @property
    def kappa(self) -> float:
        return 10.0 ** (-self.fiber_km * self.loss_db_per_km / 10.0)

    @property
    def mode_pairs(self) -> int:
        return int(round(self.bandwidth_hz * self.bit_duration_s))

    @property
    def bit_rate_hz(self) -> float:
        return 1.0 / self.bit_duration_s


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _count(text: str) -> int:
    """Integer flag value, accepting scientific notation like 2e6."""
    value = float(text)
    if value != int(value):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(value)


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        print(text)


def _merged(args, config: dict, key: str, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _load_config(args) -> dict:
    path = getattr(args, "config", None)
    if not path:
        return {}
    with open(path, encoding="utf-8") as handle:
        loaded = json.load(handle)
    if not isinstance(loaded, dict):
        raise InvalidParams("config file must hold a JSON object")
    return loaded


def _resolve_params(args, config: dict) -> ProtocolParams:
    preset_name = _merged(args, config, "preset")
    base = {}
    if preset_name is not None:
        if preset_name not in PRESETS:
            raise InvalidParams(
                f"unknown preset {preset_name!r}; choose from {', '.join(sorted(PRESETS))}"
            )
        base = dict(PRESETS[preset_name])
    kappa = _merged(args, config, "kappa", base.get("kappa"))
    ns = _merged(args, config, "ns", base.get("ns"))
    nb = _merged(args, config, "nb", base.get("nb"))
    if kappa is None or ns is None or nb is None:
        raise InvalidParams("kappa, ns and nb must be given via flags, config or preset")
    m = _merged(args, config, "m", 2_000_000)
    return ProtocolParams(kappa=float(kappa), ns=float(ns), nb=float(nb), m=int(m))


def _bound_report(p: ProtocolParams, m: int) -> dict:
    bounds = receiver_bounds(p, m)
    report = {
        "params": {"kappa": p.kappa, "ns": p.ns, "nb": p.nb, "m": m},
        "exponents": {
            name: (None if bs is None else bs.exponent) for name, bs in bounds.items()
        },
        "bounds": {
            name: (None if bs is None else {"upper": bs.upper, "lower": bs.lower})
            for name, bs in bounds.items()
        },
    }
    if p.nb > 0.0:
        asym = asymptotic_exponents(p)
        report["asymptotic"] = {
            "alice_opt": asym.alice,
            "eve_opt": asym.eve,
            "homodyne": asym.homodyne,
            "opa": asym.opa,
            "valid": asym.valid,
        }
    else:
        report["asymptotic"] = None
        report["note"] = "amplifier receiver and asymptotic forms undefined at nb = 0"
    return report


def cmd_point(args) -> int:
    config = _load_config(args)
    p = _resolve_params(args, config)
    report = _bound_report(p, p.m)
    _emit(json.dumps(report, indent=2), _merged(args, config, "out"))
    return 0


def _sweep_m_values(m_min: int, m_max: int, points: int, scale: str) -> list[int]:
    if m_min < 1 or m_min >= m_max:
        raise InvalidParams(f"need 1 <= m_min < m_max, got {m_min}, {m_max}")
    if points < 2:
        raise InvalidParams(f"points must be >= 2, got {points}")
    if scale == "log":
        grid = np.geomspace(m_min, m_max, points)
    elif scale == "linear":
        grid = np.linspace(m_min, m_max, points)
    else:
        raise InvalidParams(f"scale must be 'log' or 'linear', got {scale!r}")
    values = sorted(set(int(round(v)) for v in grid))
    return values


def sweep_rows(p: ProtocolParams, m_values: list[int]) -> list[dict]:
    """One row of per-receiver bounds per requested M, in the requested order."""
    rows = []
    for m in m_values:
        bounds = receiver_bounds(p, m)
        rows.append(
            {
                "M": m,
                "alice_opt_upper": bounds["alice_opt"].upper,
                "alice_opt_lower": bounds["alice_opt"].lower,
                "eve_upper": bounds["eve_opt"].upper,
                "eve_lower": bounds["eve_opt"].lower,
                "homodyne_upper": bounds["homodyne"].upper,
                "opa_upper": None if bounds["opa"] is None else bounds["opa"].upper,
            }
        )
    return rows


def _format_csv(rows: list[dict]) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        cells = [str(row["M"])]
        for col in SWEEP_COLUMNS[1:]:
            value = row[col]
            cells.append("" if value is None else f"{value:.10e}")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    config = _load_config(args)
    p = _resolve_params(args, config)
    m_min = int(_merged(args, config, "m_min", 1000))
    m_max = int(_merged(args, config, "m_max", 10_000_000))
    points = int(_merged(args, config, "points", 50))
    scale = _merged(args, config, "scale", "log")
    rows = sweep_rows(p, _sweep_m_values(m_min, m_max, points, scale))
    _emit(_format_csv(rows).rstrip("\n"), _merged(args, config, "out"))
    return 0


def cmd_mc(args) -> int:
    config = _load_config(args)
    p = _resolve_params(args, config)
    receiver = _merged(args, config, "receiver")
    if receiver not in ("homodyne", "opa"):
        raise InvalidParams(f"receiver must be 'homodyne' or 'opa', got {receiver!r}")
    trials = int(_merged(args, config, "trials", 10_000))
    seed = int(_merged(args, config, "seed", 0))
    cfg = McConfig(params=p, trials=trials, seed=seed)
    result = simulate_homodyne(cfg) if receiver == "homodyne" else simulate_opa(cfg)
    bound = receiver_bounds(p, p.m)[receiver].upper
    sigma = math.sqrt(max(result.p_hat * (1.0 - result.p_hat), 0.0) / trials)
    report = {
        "receiver": receiver,
        "params": {"kappa": p.kappa, "ns": p.ns, "nb": p.nb, "m": p.m},
        "trials": trials,
        "seed": seed,
        "errors": result.errors,
        "p_hat": result.p_hat,
        "ci95": list(result.ci95),
        "bound_upper": bound,
        "dominated": bool(result.p_hat - 3.0 * sigma <= bound),
    }
    _emit(json.dumps(report, indent=2), _merged(args, config, "out"))
    return 0


def cmd_link_budget(args) -> int:
    config = _load_config(args)
    budget = LinkBudget(
        bandwidth_hz=float(_merged(args, config, "bandwidth_hz", 1e12)),
        bit_duration_s=float(_merged(args, config, "bit_duration_s", 2e-6)),
        fiber_km=float(_merged(args, config, "fiber_km", 50.0)),
        loss_db_per_km=float(_merged(args, config, "loss_db_per_km", 0.2)),
    )
    ns = _merged(args, config, "ns")
    nb = _merged(args, config, "nb")
    if ns is None or nb is None:
        raise InvalidParams("link-budget needs --ns and --nb")
    p = ProtocolParams(kappa=budget.kappa, ns=float(ns), nb=float(nb), m=budget.mode_pairs)
    report = {
        "link": {
            "bandwidth_hz": budget.bandwidth_hz,
            "bit_duration_s": budget.bit_duration_s,
            "fiber_km": budget.fiber_km,
            "loss_db_per_km": budget.loss_db_per_km,
            "kappa": budget.kappa,
            "mode_pairs": budget.mode_pairs,
            "bit_rate_hz": budget.bit_rate_hz,
        },
    }
    report.update(_bound_report(p, p.m))
    _emit(json.dumps(report, indent=2), _merged(args, config, "out"))
    return 0


def _parse_grid(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise InvalidParams(f"bad grid specification {text!r}") from exc


def cmd_oracle_check(args) -> int:
    config = _load_config(args)
    from .fock import DEFAULT_GRID

    grids = {}
    for key in ("ns", "kappa", "nb", "s"):
        raw = _merged(args, config, f"{key}_grid")
        grids[key] = _parse_grid(raw) if raw is not None else DEFAULT_GRID[key]
    cutoff = int(_merged(args, config, "cutoff", 20))
    tol = float(_merged(args, config, "tol", 1e-4))
    deficit_budget = float(_merged(args, config, "deficit_budget", 1e-7))

    rows = oracle_grid_rows(grids["ns"], grids["kappa"], grids["nb"], grids["s"], cutoff)
    lines = []
    failures = 0
    for row in rows:
        if row.error is not None:
            failures += 1
            lines.append(
                f"ns={row.ns:<6g} kappa={row.kappa:<4g} nb={row.nb:<4g} s={row.s:<4g} "
                f"ERROR {row.error}"
            )
            continue
        ok = row.deviation < tol and row.deficit < deficit_budget
        failures += not ok
        lines.append(
            f"ns={row.ns:<6g} kappa={row.kappa:<4g} nb={row.nb:<4g} s={row.s:<4g} "
            f"q_gauss={row.q_gaussian:.8f} q_fock={row.q_fock:.8f} "
            f"dev={row.deviation:.3e} deficit={row.deficit:.3e} "
            f"{'PASS' if ok else 'FAIL'}"
        )
    lines.append(f"total={len(rows)} failures={failures}")
    _emit("\n".join(lines), _merged(args, config, "out"))
    return 2 if failures else 0


def _add_param_flags(parser):
    parser.add_argument("--kappa", type=float, help="one-way channel transmissivity in (0, 1]")
    parser.add_argument("--ns", type=float, help="mean signal photons per mode")
    parser.add_argument("--nb", type=float, help="added classical noise photons per mode")
    parser.add_argument("--m", type=_count, help="number of mode pairs per bit")
    parser.add_argument("--preset", help=f"named parameter set: {', '.join(sorted(PRESETS))}")


def _add_common_flags(parser):
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--out", help="write output to this path instead of stdout")


def build_parser() -> _Parser:
    parser = _Parser(prog="qicomm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    point = sub.add_parser("point", help="bounds and exponents at one (params, M)")
    _add_param_flags(point)
    _add_common_flags(point)
    point.set_defaults(func=cmd_point)

    sweep = sub.add_parser("sweep", help="CSV of bounds versus M")
    _add_param_flags(sweep)
    _add_common_flags(sweep)
    sweep.add_argument("--m-min", dest="m_min", type=_count, help="smallest M (default 1000)")
    sweep.add_argument("--m-max", dest="m_max", type=_count, help="largest M (default 1e7)")
    sweep.add_argument("--points", type=_count, help="number of M values (default 50)")
    sweep.add_argument("--scale", choices=["log", "linear"], help="M spacing (default log)")
    sweep.set_defaults(func=cmd_sweep)

    mc = sub.add_parser("mc", help="Monte-Carlo error rate for an implementable receiver")
    _add_param_flags(mc)
    _add_common_flags(mc)
    mc.add_argument("--receiver", choices=["homodyne", "opa"])
    mc.add_argument("--trials", type=_count, help="number of trials (default 10000)")
    mc.add_argument("--seed", type=int, help="RNG seed (default 0)")
    mc.set_defaults(func=cmd_mc)

    link = sub.add_parser("link-budget", help="derive kappa, M and rate from fiber parameters")
    link.add_argument("--bandwidth-hz", dest="bandwidth_hz", type=float)
    link.add_argument("--bit-duration-s", dest="bit_duration_s", type=float)
    link.add_argument("--fiber-km", dest="fiber_km", type=float)
    link.add_argument("--loss-db-per-km", dest="loss_db_per_km", type=float)
    link.add_argument("--ns", type=float)
    link.add_argument("--nb", type=float)
    _add_common_flags(link)
    link.set_defaults(func=cmd_link_budget)

    oracle = sub.add_parser("oracle-check", help="Gaussian formulas vs the Fock-space oracle")
    oracle.add_argument("--ns-grid", dest="ns_grid", help="comma-separated ns values")
    oracle.add_argument("--kappa-grid", dest="kappa_grid", help="comma-separated kappa values")
    oracle.add_argument("--nb-grid", dest="nb_grid", help="comma-separated nb values")
    oracle.add_argument("--s-grid", dest="s_grid", help="comma-separated s values")
    oracle.add_argument("--cutoff", type=int, help="per-mode photon cutoff (default 20)")
    oracle.add_argument("--tol", type=float, help="max allowed |q_gauss - q_fock| (default 1e-4)")
    oracle.add_argument(
        "--deficit-budget",
        dest="deficit_budget",
        type=float,
        help="max allowed truncation deficit (default 1e-7)",
    )
    _add_common_flags(oracle)
    oracle.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidParams as exc:
        print(f"qicomm: invalid parameters: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"qicomm: {exc}", file=sys.stderr)
        return 1
    except (NonPhysicalCovariance, NumericalInstability, CutoffTooSmall) as exc:
        print(f"qicomm: validation failure: {exc}", file=sys.stderr)
        return 2


def run():
    raise SystemExit(main())
