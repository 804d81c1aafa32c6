"""Command-line entry points for the spectral toolkit.

Six subcommands mirror the library layers: ``spectrum`` (eigenvalues and
norming constants), ``delta`` (index shifts and their trig residuals),
``asymptotics`` (computed-versus-predicted tables and the correction series),
``expand`` (eigenfunction-expansion convergence reports), ``greens``
(resolvent decay and zone bounds), and ``validate`` (the numbered criteria
suite).  Every run writes delimited reports -- CSV/JSON plus two-column .dat
traces -- into ``--out-dir`` and, unless ``--no-plot`` is given, renders the
matching PNG figures alongside them.

Exit status: 0 on success, 1 when a validation criterion fails, 2 for
configuration problems (unparseable options, missing files), 3 for numeric
failures (bracketing breakdown, a boundary-value solve at an eigenvalue).

Angles and numeric tokens accept exact ``pi`` fractions (``pi``, ``pi/2``,
``3pi/4``) as well as plain decimals.  A JSON file passed via ``--config``
supplies defaults that explicit command-line options override.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import reporting
from .asymptotics import asymptotic_report, decompose_l, series_eval
from .delta import DeltaRecord, delta_asymptotic, solve_delta_many, trig_residuals_from_delta
from .expansion import TargetFunction, _Basis, convergence_report
from .greens import bvp_decay_detail, solve_bvp, zone_bound_detail
from .ivp import BoundaryParams
from .potential import (PI, Potential, constant_potential, load_potential,
                        step_potential, zero_potential)
from .spectrum import ConvergenceError, spectrum_table
from .validation import run_all

__all__ = [
    "ScenarioConfig",
    "ConfigError",
    "parse_number",
    "parse_potential",
    "parse_target",
    "run",
    "main",
]


class ConfigError(ValueError):
    """A command option that cannot be turned into a scenario input."""


_PI_RE = re.compile(r"^([+-]?\d*)pi(?:/(\d+))?$")


def parse_number(token) -> float:
    """Plain decimals plus exact pi fractions: ``pi``, ``pi/2``, ``-3pi/4``."""
    if isinstance(token, (int, float)) and not isinstance(token, bool):
        return float(token)
    s = str(token).strip().lower().replace(" ", "")
    m = _PI_RE.match(s)
    if m:
        head = m.group(1)
        if head in ("", "+"):
            num = 1.0
        elif head == "-":
            num = -1.0
        else:
            num = float(int(head))
        den = float(int(m.group(2))) if m.group(2) else 1.0
        return num * PI / den
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"cannot parse number {token!r}") from None


def parse_potential(token) -> Potential:
    """``zero``, ``const:V``, ``step:L,R[,SPLIT]``, or a JSON file path."""
    if isinstance(token, Potential):
        return token
    s = str(token).strip()
    if s == "zero":
        return zero_potential()
    if s.startswith("const:"):
        return constant_potential(parse_number(s[len("const:"):]))
    if s.startswith("step:"):
        parts = s[len("step:"):].split(",")
        if len(parts) not in (2, 3):
            raise ConfigError("step potential needs 'step:LEFT,RIGHT[,SPLIT]'")
        vals = [parse_number(p) for p in parts]
        return step_potential(*vals)
    path = Path(s)
    if path.is_file():
        return load_potential(path)
    raise ConfigError(f"potential {token!r} is neither a token nor a readable file")


def parse_target(token) -> TargetFunction:
    """``const:V``, ``linear:INTERCEPT,SLOPE``, or ``sampled:FILE`` (.dat-style)."""
    if isinstance(token, TargetFunction):
        return token
    s = str(token).strip()
    if s.startswith("const:"):
        return TargetFunction.constant(parse_number(s[len("const:"):]))
    if s.startswith("linear:"):
        parts = s[len("linear:"):].split(",")
        if len(parts) != 2:
            raise ConfigError("linear target needs 'linear:INTERCEPT,SLOPE'")
        return TargetFunction.linear(parse_number(parts[0]), parse_number(parts[1]))
    if s.startswith("sampled:"):
        path = Path(s[len("sampled:"):])
        if not path.is_file():
            raise ConfigError(f"sample file {path} not found")
        data = np.loadtxt(path)
        if data.ndim != 2 or data.shape[1] < 2:
            raise ConfigError("sample file needs two whitespace columns (x, f)")
        return TargetFunction.sampled(data[:, 0], data[:, 1])
    raise ConfigError(
        f"cannot parse target {token!r}; use const:V, linear:A,B or sampled:FILE")


def _parse_int_list(token) -> list[int]:
    if isinstance(token, (list, tuple)):
        return [int(v) for v in token]
    try:
        return [int(p) for p in str(token).split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse integer list {token!r}") from None


def _parse_number_list(token) -> list[float]:
    if isinstance(token, (list, tuple)):
        return [float(v) for v in token]
    return [parse_number(p) for p in str(token).split(",") if p.strip()]


@dataclass
class ScenarioConfig:
    """Everything one subcommand needs; unset fields fall back to defaults.

    Values arrive as strings (command line) or JSON scalars (config file) and
    are parsed lazily by the subcommand, so pi-fraction tokens work in both.
    """

    command: str
    q: str | Potential | None = None
    alpha: str | float | None = None
    beta: str | float | None = None
    n_max: int | None = None
    n_list: str | list | None = None
    a: str | float | None = None
    f: str | TargetFunction | None = None
    fit_window: str | list | None = None
    series_terms: int | None = None
    lams: str | list | None = None
    mu: str | float | None = None
    sample_count: int | None = None
    box: float | None = None
    criteria: str | list | None = None
    corpus: str = "default"
    out_dir: str = "."
    no_plot: bool = False

    @classmethod
    def from_mapping(cls, command: str, mapping: dict) -> "ScenarioConfig":
        known = {f.name for f in dataclasses.fields(cls)} - {"command"}
        unknown = sorted(set(mapping) - known)
        if unknown:
            raise ConfigError(f"unknown option(s): {', '.join(unknown)}")
        return cls(command=command, **mapping)


def _require(value, flag: str):
    if value is None:
        raise ConfigError(f"missing required option {flag}")
    return value


def _out_dir(cfg: ScenarioConfig) -> Path:
    out = Path(cfg.out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _boundary(cfg: ScenarioConfig) -> BoundaryParams:
    alpha = parse_number(_require(cfg.alpha, "--alpha"))
    beta = parse_number(_require(cfg.beta, "--beta"))
    return BoundaryParams(alpha, beta)


# -- subcommands ---------------------------------------------------------------


def _cmd_spectrum(cfg: ScenarioConfig) -> int:
    q = parse_potential(_require(cfg.q, "--q"))
    bp = _boundary(cfg)
    n_max = cfg.n_max if cfg.n_max is not None else 20
    rows = spectrum_table(q, bp, n_max)
    out = _out_dir(cfg)
    reporting.write_csv(
        out / "spectrum.csv",
        ["n", "lambda", "mu", "a", "b", "beta_ratio", "wdot_relerr"],
        [[r.n, r.lam, r.mu, r.a, r.b, r.beta_ratio, r.wdot_relerr] for r in rows])
    if not cfg.no_plot:
        reporting.fig_spectrum(out / "spectrum.png", rows)
    return 0


def _cmd_delta(cfg: ScenarioConfig) -> int:
    bp = _boundary(cfg)
    n_max = cfg.n_max if cfg.n_max is not None else 100
    if n_max < 2:
        raise ConfigError("delta tables start at n = 2; need --n-max >= 2")
    ns = np.arange(2, n_max + 1)
    deltas = solve_delta_many(ns, bp.alpha, bp.beta)
    d, e, g = trig_residuals_from_delta(ns, deltas)
    records = [DeltaRecord(n=int(n), delta=float(deltas[i]), d=float(d[i]),
                           e=float(e[i]), g=float(g[i]))
               for i, n in enumerate(ns)]
    out = _out_dir(cfg)
    reporting.write_csv(out / "delta.csv", ["n", "delta", "d", "e", "g"],
                        [[r.n, r.delta, r.d, r.e, r.g] for r in records])
    if not cfg.no_plot:
        asymptote = None
        if bp.dirichlet_left and 0.0 < bp.beta < PI:
            asymptote = delta_asymptotic(ns, bp.beta)
        reporting.fig_delta(out / "delta.png", records, bp.alpha, bp.beta,
                            asymptote=asymptote)
    return 0


def _cmd_asymptotics(cfg: ScenarioConfig) -> int:
    q = parse_potential(_require(cfg.q, "--q"))
    bp = _boundary(cfg)
    n_max = cfg.n_max if cfg.n_max is not None else 100
    window = (10.0, 100.0)
    if cfg.fit_window is not None:
        vals = _parse_number_list(cfg.fit_window)
        if len(vals) != 2 or not vals[0] < vals[1]:
            raise ConfigError("fit window needs 'LOW,HIGH' with LOW < HIGH")
        window = (vals[0], vals[1])
    report = asymptotic_report(q, bp, n_max=n_max, fit_window=window)

    out = _out_dir(cfg)
    reporting.write_csv(
        out / "asymptotics.csv",
        ["n", "lambda_computed", "lambda_predicted", "residual",
         "a_computed", "a_predicted", "a_residual",
         "b_computed", "b_predicted", "b_residual"],
        [[r.n, r.lambda_computed, r.lambda_predicted, r.residual,
          r.a_computed, r.a_predicted, r.a_residual,
          r.b_computed, r.b_predicted, r.b_residual] for r in report.rows])
    reporting.write_json(out / "asymptotics.json", {
        "alpha": report.alpha, "beta": report.beta, "q_mean": report.q_mean,
        "fit_window": report.fit_window, "slope_lambda": report.slope_lambda,
        "slope_a": report.slope_a, "slope_b": report.slope_b,
        "dirichlet_dirichlet_sign_convention":
            report.dirichlet_dirichlet_sign_convention,
    })

    terms = cfg.series_terms if cfg.series_terms is not None else 400
    xs = np.linspace(0.0, 2.0 * PI, 1025)
    curves = {"l": series_eval("l", q, bp, xs, terms),
              "s": series_eval("s", q, bp, xs, terms)}
    reporting.write_dat(out / "l.dat", xs, curves["l"], header="x  l(x)")
    reporting.write_dat(out / "s.dat", xs, curves["s"], header="x  s(x)")
    if bp.dirichlet_left:
        l1, l2, l3 = decompose_l(q, bp.beta, xs, terms)
        for name, vals in (("l1", l1), ("l2", l2), ("l3", l3)):
            reporting.write_dat(out / f"{name}.dat", xs, vals,
                                header=f"x  {name}(x)")
            curves[name] = vals
    if not cfg.no_plot:
        reporting.fig_asymptotics(out / "asymptotics.png", report)
        reporting.fig_series(out / "series.png", xs, curves)
    return 0


def _cmd_expand(cfg: ScenarioConfig) -> int:
    q = parse_potential(_require(cfg.q, "--q"))
    bp = _boundary(cfg)
    f = parse_target(cfg.f if cfg.f is not None else "const:pi/2")
    n_list = _parse_int_list(cfg.n_list) if cfg.n_list is not None \
        else [25, 50, 100, 200]
    if cfg.a is not None:
        a = parse_number(cfg.a)
    elif bp.beta == 0.0 and not bp.dirichlet_left:
        a = PI - 0.5
    else:
        a = 0.5
    report = convergence_report(q, bp, f, n_list, a)

    out = _out_dir(cfg)
    reporting.write_csv(out / "expand.csv", ["N", "err_restricted", "err_full"],
                        [[N, er, ef] for N, er, ef in report.rows])
    reporting.write_csv(out / "coefficients.csv", ["n", "c_n"],
                        [[n, c] for n, c in enumerate(report.coefficients)])

    xs = np.linspace(0.0, PI, 1025)
    basis = _Basis(q, bp, max(n_list))
    c = basis.coefficients(f)
    PHI = basis.eval_basis(xs)
    top = max(n_list)
    S_top = c[: top + 1] @ PHI[: top + 1]
    reporting.write_dat(out / f"partial_sum_N{top}.dat", xs, S_top,
                        header=f"x  S_{top}(x)")
    fvals = np.asarray(f(xs))
    reporting.write_dat(out / "target.dat", xs, fvals, header="x  f(x)")
    if not cfg.no_plot:
        sums = {N: c[: N + 1] @ PHI[: N + 1] for N in n_list}
        reporting.fig_expand(out / "expand.png", xs, fvals, sums,
                             report.n_list, report.err_restricted)
    return 0


def _cmd_greens(cfg: ScenarioConfig) -> int:
    q = parse_potential(cfg.q if cfg.q is not None else "zero")
    beta = parse_number(_require(cfg.beta, "--beta"))
    f = parse_target(cfg.f if cfg.f is not None else "const:1")
    lams = _parse_number_list(cfg.lams) if cfg.lams is not None \
        else [5.25, 10.25, 20.25, 40.25, 80.25]
    decay = bvp_decay_detail(q, beta, f, lams)
    zone = zone_bound_detail(
        sample_count=cfg.sample_count if cfg.sample_count is not None else 400,
        box=cfg.box if cfg.box is not None else 20.0)

    out = _out_dir(cfg)
    reporting.write_csv(out / "decay.csv", ["lambda", "max_abs_y"],
                        [[lam, sup] for lam, sup in zip(decay.lams, decay.sup_abs)])
    reporting.write_json(out / "zone.json", {
        "grid": zone.sample_count, "violations": zone.violations,
        "tested": zone.tested, "box": zone.box,
        "min_ratio_sin": zone.min_ratio_sin, "min_ratio_cos": zone.min_ratio_cos,
    })
    if cfg.mu is not None:
        sol = solve_bvp(q, beta, parse_number(cfg.mu), f)
        reporting.write_dat(out / "bvp.dat", sol.grid, sol.y,
                            header=f"x  y(x; mu={sol.mu:.6g})")
    if not cfg.no_plot and not decay.degenerate:
        reporting.fig_greens(out / "greens.png", decay)
    return 0


def _cmd_validate(cfg: ScenarioConfig) -> int:
    if (cfg.corpus or "default") != "default":
        raise ConfigError(f"unknown corpus {cfg.corpus!r}; only 'default' exists")
    criteria = _parse_int_list(cfg.criteria) if cfg.criteria is not None else None
    results = run_all(criteria)
    out = _out_dir(cfg)
    failures = [r for r in results if not r.passed]
    lines = [r.line() for r in results]
    lines.append(f"{len(results) - len(failures)}/{len(results)} criteria passed")
    (out / "validation.txt").write_text("\n".join(lines) + "\n")
    reporting.write_json(out / "validation.json", [
        {"index": r.index, "name": r.name, "passed": r.passed,
         "detail": r.detail, "elapsed": r.elapsed} for r in results])
    return 1 if failures else 0


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "delta": _cmd_delta,
    "asymptotics": _cmd_asymptotics,
    "expand": _cmd_expand,
    "greens": _cmd_greens,
    "validate": _cmd_validate,
}


def run(command: str, config) -> int:
    """Execute one subcommand from a config mapping; returns the exit status.

    ``config`` may be a plain dict (string values are parsed exactly as on
    the command line) or a ready :class:`ScenarioConfig`.
    """
    handler = _HANDLERS.get(command)
    if handler is None:
        print(f"unknown command {command!r}", file=sys.stderr)
        return 2
    try:
        if isinstance(config, ScenarioConfig):
            cfg = config
        else:
            cfg = ScenarioConfig.from_mapping(command, dict(config))
        return handler(cfg)
    except (ConvergenceError, ArithmeticError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError, TypeError, KeyError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out-dir", dest="out_dir", default=None,
                    help="directory for report files (default: current)")
    sp.add_argument("--no-plot", dest="no_plot", action="store_true",
                    default=False, help="skip PNG rendering")
    sp.add_argument("--config", default=None,
                    help="JSON file whose entries act as option defaults")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="slspec",
        description="Spectral reports for -y'' + q y = mu y on [0, pi].")
    sub = p.add_subparsers(dest="command")

    sp = sub.add_parser("spectrum", help="eigenvalues and norming constants")
    sp.add_argument("--q", default=None,
                    help="potential: JSON file, zero, const:V, or step:L,R[,SPLIT]")
    sp.add_argument("--alpha", default=None, help="left boundary angle in (0, pi]")
    sp.add_argument("--beta", default=None, help="right boundary angle in [0, pi)")
    sp.add_argument("--N", "--n-max", dest="n_max", type=int, default=None,
                    help="largest index (default 20)")
    _add_common(sp)

    dp = sub.add_parser("delta", help="index shifts delta_n and trig residuals")
    dp.add_argument("--alpha", default=None)
    dp.add_argument("--beta", default=None)
    dp.add_argument("--N", "--n-max", dest="n_max", type=int, default=None,
                    help="largest index (default 100)")
    _add_common(dp)

    ap = sub.add_parser("asymptotics",
                        help="computed vs predicted eigendata and the l/s series")
    ap.add_argument("--q", default=None)
    ap.add_argument("--alpha", default=None)
    ap.add_argument("--beta", default=None)
    ap.add_argument("--N", "--n-max", dest="n_max", type=int, default=None,
                    help="largest index (default 100)")
    ap.add_argument("--fit-window", dest="fit_window", default=None,
                    help="index window LOW,HIGH for decay fits (default 10,100)")
    ap.add_argument("--series-terms", dest="series_terms", type=int, default=None,
                    help="terms in the l/s series traces (default 400)")
    _add_common(ap)

    ep = sub.add_parser("expand", help="eigenfunction-expansion convergence")
    ep.add_argument("--q", default=None)
    ep.add_argument("--alpha", default=None)
    ep.add_argument("--beta", default=None)
    ep.add_argument("--f", default=None,
                    help="target: const:V, linear:A,B, or sampled:FILE "
                         "(default const:pi/2)")
    ep.add_argument("--N-list", dest="n_list", default=None,
                    help="truncation levels, e.g. 25,50,100,200")
    ep.add_argument("--a", default=None,
                    help="restriction scalar for the convergence interval")
    _add_common(ep)

    gp = sub.add_parser("greens", help="resolvent decay and zone bounds")
    gp.add_argument("--q", default=None, help="potential (default zero)")
    gp.add_argument("--beta", default=None)
    gp.add_argument("--f", default=None, help="forcing (default const:1)")
    gp.add_argument("--lams", default=None,
                    help="lambda samples for the decay fit "
                         "(default 5.25,10.25,20.25,40.25,80.25)")
    gp.add_argument("--mu", default=None,
                    help="additionally dump the forced solution at this mu")
    gp.add_argument("--sample-count", dest="sample_count", type=int, default=None,
                    help="zone sampling resolution per axis (default 400)")
    gp.add_argument("--box", type=float, default=None,
                    help="half-width of the sampled complex box (default 20)")
    _add_common(gp)

    vp = sub.add_parser("validate", help="run the numbered validation criteria")
    vp.add_argument("--corpus", default=None, help="problem corpus (default)")
    vp.add_argument("--criteria", default=None,
                    help="subset to run, e.g. 1,3,7 (default: all)")
    _add_common(vp)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad options, 0 on --help
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2

    config: dict = {}
    if args.config is not None:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        if not isinstance(loaded, dict):
            print("config error: config file must hold a JSON object",
                  file=sys.stderr)
            return 2
        aliases = {"n": "n_max"}
        for k, v in loaded.items():
            key = str(k).replace("-", "_").lower()
            config[aliases.get(key, key)] = v

    for key, val in vars(args).items():
        if key in ("command", "config") or val is None:
            continue
        if key == "no_plot" and val is False:
            continue
        config[key] = val
    return run(args.command, config)


if __name__ == "__main__":
    sys.exit(main())
