"""Command-line front end.

Subcommands ``spectrum``, ``populations`` and ``thresholds``.  Parameters
resolve as preset, then ``--config`` file, then ``--key value`` overrides.
Exit codes: 0 ok, 2 usage or config error, 3 numerical failure, 4 tolerance
breach with ``--assert``.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__, analytic, params as P, response
from .errors import ConfigError, DigsError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ASSERT = 0, 2, 3, 4
METHOD_ALIASES = {"analytic": "analytic-general", "resonant": "analytic-resonant", "general": "analytic-general"}
POP_LEVELS = ("aa", "bb", "bpbp", "cc", "cpcp")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _override_fields():
    names = [f.name for f in dataclasses.fields(P.SystemParams) if f.name != "pump"]
    pump = {f.name for cls in (P.OpenPump, P.ClosedPump) for f in dataclasses.fields(cls)}
    return names + sorted(pump)


def _add_common(p):
    p.add_argument("--preset", help="named parameter set to start from")
    p.add_argument("--config", help="INI config file ([system] and [pump] sections)")
    p.add_argument("--pump-variant", choices=("open", "closed"), help="switch the pump model")
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--threads", type=int, help="worker threads for numeric scans")
    g = p.add_argument_group("parameter overrides")
    for name in _override_fields():
        flags = [f"--{name}"] + ([f"--{name.replace('_', '-')}"] if "_" in name else [])
        g.add_argument(*flags, dest=f"set_{name}", metavar="VALUE", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="digs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"digs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("spectrum", help="probe susceptibility over a detuning grid")
    _add_common(s)
    s.add_argument("--grid", default="-2:2:2001", help="start:stop:count in gamma_ab (default -2:2:2001)")
    s.add_argument("--method", default="analytic-general",
                   help="comma list of analytic-resonant, analytic-general, numeric, doppler")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--medium", help="medium preset for SI columns (kash-rb87)")
    s.add_argument("--sigma-delta-p", type=float, help="one-photon Doppler width [gamma_ab]")
    s.add_argument("--sigma-delta", type=float, help="two-photon Doppler width [gamma_ab]")
    s.add_argument("--long", action="store_true", help="also write a long-format CSV of all methods")
    s.add_argument("--assert", dest="assert_tol", type=float, metavar="TOL",
                   help="exit 4 if two methods differ by more than TOL of the peak |Im chi|")

    q = sub.add_parser("populations", help="analytic and numeric populations against closed pump rate")
    _add_common(q)
    q.add_argument("--r-sweep", default="0:0.05:51", help="start:stop:count of r (default 0:0.05:51)")
    q.add_argument("--assert", dest="assert_tol", type=float, metavar="TOL",
                   help="exit 4 if analytic and numeric populations differ by more than TOL")

    t = sub.add_parser("thresholds", help="gain and anomalous-dispersion thresholds, delay ratio")
    _add_common(t)
    t.add_argument("--medium", help="medium preset for the group delay (kash-rb87)")
    t.add_argument("--assert", dest="assert_order", action="store_true",
                   help="exit 4 unless the gain threshold lies below the anomalous threshold")
    return parser


def resolve_params(args) -> P.SystemParams:
    """Preset, then config file, then command-line overrides."""
    params = P.preset(args.preset) if args.preset else P.SystemParams()
    if args.config:
        text = Path(args.config).read_text() if Path(args.config).exists() else None
        if text is None:
            raise ConfigError(f"cannot read config {args.config}")
        if args.preset and "preset" not in text:
            text = text.replace("[system]", f"[system]\npreset = {args.preset}", 1) if "[system]" in text \
                else f"[system]\npreset = {args.preset}\n" + text
        params = P.loads(text)
    data = P.to_dict(params)
    if args.pump_variant and args.pump_variant != data["pump"]["variant"]:
        data["pump"] = {"variant": args.pump_variant}
    pump_names = {f.name for f in dataclasses.fields(P.OpenPump if data["pump"]["variant"] == "open"
                                                     else P.ClosedPump)}
    for name in _override_fields():
        value = getattr(args, f"set_{name}")
        if value is None:
            continue
        if name in data:
            data[name] = value
        elif name in pump_names:
            data["pump"][name] = value
        else:
            raise ConfigError(f"--{name} does not apply to the {data['pump']['variant']} pump")
    params = P.from_dict(data)
    report = P.validate(params)
    if not report.ok:
        raise ConfigError("; ".join(msg for _, msg in report.violations))
    return params


def _methods(text):
    out = []
    for m in text.split(","):
        m = METHOD_ALIASES.get(m.strip(), m.strip())
        if m not in response.METHODS:
            raise ConfigError(f"unknown method {m!r}")
        out.append(m)
    return out


def _write_manifest(out, command, argv, params, outputs, extra, started):
    manifest = {
        "command": command,
        "argv": list(argv),
        "params": P.to_dict(params),
        "outputs": [str(p) for p in outputs],
        "version": __version__,
        "duration_s": time.perf_counter() - started,
    }
    manifest.update(extra)
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return path


def cmd_spectrum(args, argv, started):
    params = resolve_params(args)
    grid = response.parse_grid(args.grid)
    methods = _methods(args.method)
    medium = response.medium_preset(args.medium, params) if args.medium else None
    spec = None
    if "doppler" in methods:
        from .doppler import DopplerSpec, DOPPLER_PRESETS

        base = DOPPLER_PRESETS.get(args.preset, DopplerSpec())
        spec = dataclasses.replace(
            base,
            sigma_delta_p=base.sigma_delta_p if args.sigma_delta_p is None else args.sigma_delta_p,
            sigma_delta=base.sigma_delta if args.sigma_delta is None else args.sigma_delta)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    spectra, outputs = {}, []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for m in methods:
            sp = response.scan(params, grid, m, medium=medium, doppler_spec=spec)
            spectra[m] = sp
            path = out / f"spectrum_{m}.{args.format}"
            (response.write_csv if args.format == "csv" else response.write_json)(sp, path)
            outputs.append(path)
    if args.long:
        path = out / "spectrum_long.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("method",) + response.CSV_HEADER)
            for m, sp in spectra.items():
                for row in sp.rows():
                    w.writerow([m] + ["%.17g" % v for v in row])
        outputs.append(path)
    summary = {m: {"flagged": int(sp.flags.sum())} for m, sp in spectra.items()}
    deviation = None
    if len(methods) >= 2:
        deviation = response.max_deviation(spectra[methods[0]], spectra[methods[1]])
        print(f"max |Im chi_{methods[0]} - Im chi_{methods[1]}| / peak = {deviation:.6g}")
    for m, s in summary.items():
        print(f"{m}: {len(grid)} points, {s['flagged']} flagged")
    _write_manifest(out, "spectrum", argv, params, outputs,
                    {"grid": args.grid, "methods": methods, "max_deviation": deviation,
                     "medium": args.medium, "doppler": None if spec is None else dataclasses.asdict(spec)},
                    started)
    if any(s["flagged"] for s in summary.values()) and all(sp.flags.all() for sp in spectra.values()):
        return EXIT_NUMERIC
    if args.assert_tol is not None and deviation is not None and not deviation <= args.assert_tol:
        print(f"assertion failed: deviation {deviation:.6g} > {args.assert_tol:g}", file=sys.stderr)
        return EXIT_ASSERT
    return EXIT_OK


def population_table(params, r_values):
    """Rows (r, analytic five populations, numeric five populations, numeric ok)."""
    from .liouvillian import build_generator, steady_state

    if not params.is_closed:
        raise ConfigError("population sweeps need the closed pump")
    gcpa = params.relaxation("cp", "a")
    rows = []
    for r in r_values:
        p = params.replace(r=float(r), omega_p=0.0)
        pump = p.pump
        a = analytic.closed_populations(pump.r, pump.alpha_b, pump.alpha_c, pump.alpha_cp, gcpa,
                                        p.omega_c, p.omega_mu)
        ana = [a.rho_aa, a.rho_bb, a.rho_bpbp, a.rho_cc, a.rho_cpcp]
        try:
            rho = steady_state(build_generator(p))
            num, ok = [rho.population(j) for j in P.LEVELS], True
        except DigsError:
            num, ok = [float("nan")] * 5, False
        rows.append((float(r), ana, num, ok))
    return rows


def cmd_populations(args, argv, started):
    params = resolve_params(args)
    r_values = response.parse_grid(args.r_sweep)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rows = population_table(params, r_values)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "populations.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["r"] + [f"analytic_rho_{k}" for k in POP_LEVELS] + [f"numeric_rho_{k}" for k in POP_LEVELS])
        for r, ana, num, _ in rows:
            w.writerow(["%.17g" % v for v in [r, *ana, *num]])
    dev = max(max(abs(x - y) for x, y in zip(ana, num)) for _, ana, num, ok in rows if ok) \
        if any(ok for *_, ok in rows) else float("nan")
    print(f"{len(rows)} pump rates, max |analytic - numeric| = {dev:.6g}")
    _write_manifest(out, "populations", argv, params, [path], {"r_sweep": args.r_sweep, "max_deviation": dev},
                    started)
    if not any(ok for *_, ok in rows):
        return EXIT_NUMERIC
    if args.assert_tol is not None and not dev <= args.assert_tol:
        print(f"assertion failed: deviation {dev:.6g} > {args.assert_tol:g}", file=sys.stderr)
        return EXIT_ASSERT
    return EXIT_OK


def threshold_report(params, medium=None) -> dict:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rates = analytic.threshold_rates(params)
        report = {"variant": params.pump.variant, "gain_threshold": rates["gain"],
                  "anomalous_threshold": rates["anomalous"],
                  "anomalous_population_ratio": rates["population_ratio"]}
        try:
            pops = analytic.populations(params)
            report["p_b"] = [pops.p_b.real, pops.p_b.imag]
            report["rho_cpcp"] = pops.rho_cpcp
            report["delay_ratio"] = response.delay_ratio(pops.p_b.real, pops.rho_cpcp, params.omega_b,
                                                         params.omega_c)
        except DigsError:
            pass
        if medium is not None and "delay_ratio" in report:
            report["group_delay_s"] = response.scaled_delay(report["delay_ratio"], medium)
            slope = analytic.dispersion_slope(pops, params.omega_b, params.omega_c, params.omega_mu,
                                              params.gamma_ab)
            n_g = response.group_index_from_slope(slope, medium)
            report["group_index"] = n_g
            report["group_velocity_m_s"] = response.group_velocity(n_g, medium)
    return report


def cmd_thresholds(args, argv, started):
    params = resolve_params(args)
    medium = response.medium_preset(args.medium, params) if args.medium else None
    report = threshold_report(params, medium)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "thresholds.json"
    path.write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")
    for k in sorted(report):
        print(f"{k}: {report[k]}")
    _write_manifest(out, "thresholds", argv, params, [path], {"medium": args.medium}, started)
    if args.assert_order and not report["gain_threshold"] < report["anomalous_threshold"]:
        return EXIT_ASSERT
    return EXIT_OK


def _attach_negative_values(argv):
    # "--grid -2:2:5" would otherwise read "-2:2:5" as an option
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a.startswith("--") and "=" not in a and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and len(argv[i + 1]) > 1 and (argv[i + 1][1].isdigit() or argv[i + 1][1] == "."):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


COMMANDS = {"spectrum": cmd_spectrum, "populations": cmd_populations, "thresholds": cmd_thresholds}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    argv = _attach_negative_values(argv)
    started = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    if args.threads:
        os.environ["DIGS_NUM_THREADS"] = str(args.threads)
    try:
        return COMMANDS[args.command](args, argv, started)
    except ConfigError as exc:
        print(f"digs: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DigsError, ZeroDivisionError, np.linalg.LinAlgError) as exc:
        print(f"digs: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
