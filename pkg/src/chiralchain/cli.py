"""Command-line driver: ``chiralchain <job-kind> --config <path> [--set key=value]... [--workers K] [--out DIR] [--plot]``.

Every job expands its configuration into grid points, evaluates them on a
bounded process pool, and writes the results in grid order as CSV.  Each
CSV starts with ``#`` comment lines echoing the full configuration (minus
run-time settings such as the worker count and output directory), so
identical configurations give byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import tomli

from . import core, dynamics, entanglement, spincorr
from .config import (
    JOB_KINDS,
    ConfigError,
    JobConfig,
    apply_overrides,
    build_params,
    config_from_dict,
    grid_values,
    serialize,
)
from .gaussian import QuenchSetup, ground_state, magnetization_z
from .numerics import DomainError, NumericalConsistencyError, kink_detect

EXIT_OK, EXIT_FAILURE, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


# --- formatting ----------------------------------------------------------------


def format_value(value) -> str:
    """17 significant digits for floats; lower-case booleans; everything else via str."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if value == 0.0:
            value = 0.0  # drop the sign of -0.0
        return f"{value:.17g}"
    return str(value)


def render_csv(header_lines: list[str], columns: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n" if line else "#\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


ECHO_SECTIONS = {
    "phase-diagram": ("phase",),
    "correlations": ("fit", "correlations"),
    "entropy": ("fit", "entropy"),
    "quench": ("fit", "quench"),
    "scaling": ("scaling",),
}


def config_echo(cfg: JobConfig) -> list[str]:
    """Configuration lines relevant to the job; run-time settings are left out."""
    doc_cfg = JobConfig(
        cfg.kind, cfg.name, cfg.model, cfg.post, cfg.sweep, cfg.points,
        {k: v for k, v in cfg.options.items() if k in ECHO_SECTIONS[cfg.kind]},
    )
    return serialize(doc_cfg).splitlines()


# --- per-point workers -----------------------------------------------------------
# Each worker gets (values, options) and returns {table: [row dicts]}.


def _phase_point(task):
    values, opts = task
    p = build_params(values["pre"])
    spec = core.spectrum(p)
    needs_state = {"chiral_order", "fm_order", "mz"} & set(opts["phase"]["observables"])
    state = ground_state(p) if needs_state else None
    row = {}
    for obs in opts["phase"]["observables"]:
        if obs == "gap":
            row[obs] = core.gap(p, spec)
        elif obs == "chiral_order":
            row[obs] = spincorr.chiral_order(state)
        elif obs == "fm_order":
            row[obs] = spincorr.fm_order(state)
        elif obs == "mz":
            row[obs] = magnetization_z(state)
        elif obs == "ground_energy":
            row[obs] = core.ground_energy(p, spec) / p.n
    return {"main": [row]}


def _r_window(opts, n):
    rmax = opts["correlations"]["rmax"] or n // 8
    lo, hi = opts["fit"]["r_window"] or (4, n // 8)
    if not 1 <= lo < hi <= rmax:
        raise ConfigError(f"fit window R in [{lo}, {hi}] must lie inside 1..rmax={rmax}", "fit.r_window")
    return rmax, (lo - 1, hi)


def _profile_rows(r, mi, cxx, labels=("I_R", "Cxx_R")):
    return [{"R": int(a), labels[0]: b, labels[1]: c} for a, b, c in zip(r, mi, cxx)]


def _fit_columns(r, mi, cxx, window):
    fi = spincorr.decay_exponent(r, mi, window)
    fc = spincorr.decay_exponent(r, cxx, window)
    return {
        "r_min": window[0] + 1,
        "r_max": window[1],
        "I_exponent": fi.slope,
        "I_r2": fi.r2,
        "Cxx_exponent": fc.slope,
        "Cxx_r2": fc.r2,
    }


def _correlation_point(task):
    values, opts = task
    p = build_params(values["pre"])
    rmax, window = _r_window(opts, p.n)
    r, mi, cxx = spincorr.correlation_profile(ground_state(p), rmax)
    out = {"main": [{"gap": core.gap(p), **_fit_columns(r, mi, cxx, window)}]}
    if opts["correlations"]["profile"]:
        out["profile"] = _profile_rows(r, mi, cxx)
    return out


def _entropy_point(task):
    values, opts = task
    p = build_params(values["pre"])
    lo, hi = opts["fit"]["l_range"] or entanglement.default_l_range(p.n)
    state = ground_state(p)
    fit = entanglement.central_charge_fit(p, (lo, hi), state)
    out = {"main": [{"gap": core.gap(p), "l_min": lo, "l_max": hi, "c_eff": fit.slope, "intercept": fit.intercept, "r2": fit.r2}]}
    if opts["entropy"]["profile"]:
        ls = np.arange(1, p.n // 2 + 1)
        out["profile"] = [{"l": int(l), "S_l": s} for l, s in zip(ls, entanglement.entropy_profile(state, ls))]
    return out


def quench_times(opts) -> np.ndarray:
    q = opts["quench"]
    if q["spacing"] == "log":
        return np.geomspace(q["t_start"], q["t_stop"], q["t_num"])
    return np.linspace(q["t_start"], q["t_stop"], q["t_num"])


def _quench_point(task):
    values, opts = task
    pre, post = build_params(values["pre"]), build_params(values["post"])
    setup = QuenchSetup(pre, post)
    q = opts["quench"]
    base = {"gap_pre": core.gap(pre), "gap_post": core.gap(post)}
    if q["observable"] == "relaxation":
        times = quench_times(opts)
        if q["method"] == "direct":
            series = dynamics.delta_correlation(setup, q["m"], q["site_n"], times)
        else:
            vals = dynamics.delta_correlation_analytic(setup, q["m"], q["site_n"], times)
            series = dynamics.RelaxationSeries(times, vals.astype(complex), 0j, q["m"], q["site_n"])
        try:
            fit = dynamics.relaxation_exponent(series, tuple(opts["fit"]["t_window"]))
            chi, r2, peaks = fit.slope, fit.r2, fit.window[1]
        except DomainError:
            chi, r2, peaks = float("nan"), float("nan"), 0
        main = {**base, "t_min": opts["fit"]["t_window"][0], "t_max": opts["fit"]["t_window"][1], "chi": chi, "r2": r2, "peaks": peaks}
        rows = [{"t": t, "dC_re": v.real, "dC_im": v.imag, "dC_abs": abs(v)} for t, v in zip(series.times, series.values)]
        return {"main": [main], "series": rows}
    if q["observable"] == "steady":
        rmax = q["rmax"] or pre.n // 8
        lo, hi = opts["fit"]["r_window"] or (4, pre.n // 8)
        if not 1 <= lo < hi <= rmax:
            raise ConfigError(f"fit window R in [{lo}, {hi}] must lie inside 1..rmax={rmax}", "fit.r_window")
        r, mi, cxx = dynamics.steady_profile(setup, rmax)
        return {
            "main": [{**base, **_fit_columns(r, mi, cxx, (lo - 1, hi))}],
            "profile": _profile_rows(r, mi, cxx, ("I_R_inf", "Cxx_R_inf")),
        }
    times = quench_times(opts)
    es = dynamics.entropy_growth(setup, q["l"], times)
    main = {
        **base,
        "l": es.l,
        "saturation_time": es.saturation_time,
        "slope": es.slope,
        "intercept": es.intercept,
        "r2": es.r2,
        "a1_plus": es.a1_plus,
        "a1_minus": es.a1_minus,
    }
    return {"main": [main], "series": [{"t": t, "S_t": s} for t, s in zip(times, es.entropies)]}


def _scaling_point(task):
    values, opts = task
    s = opts["scaling"]
    p = build_params(values["pre"])
    hs = np.round(np.arange(s["h_min"], s["h_max"] + s["h_step"] / 2, s["h_step"]), 12)
    c1 = np.array([spincorr.spin_correlator(ground_state(p.with_(h=float(h))), "x", "x", 1) for h in hs])
    dc = np.gradient(c1, hs)
    h_c = kink_detect(hs, dc)
    dev = abs(h_c - s["reference"])
    main = {
        "h_c": h_c,
        "deviation": dev,
        "log2_n": np.log2(p.n),
        "log2_deviation": np.log2(dev) if dev > 0 else float("-inf"),
    }
    curve = [{"h": h, "Cxx_1": c, "dCxx_1_dh": d} for h, c, d in zip(hs, c1, dc)]
    return {"main": [main], "curve": curve}


WORKERS = {
    "phase-diagram": _phase_point,
    "correlations": _correlation_point,
    "entropy": _entropy_point,
    "quench": _quench_point,
    "scaling": _scaling_point,
}


# --- driver ----------------------------------------------------------------------


def job_points(cfg: JobConfig) -> tuple[list[str], list[dict]]:
    """Index columns and parameter sets of every point of the job."""
    if cfg.kind == "scaling":
        if cfg.sweep or cfg.points:
            raise ConfigError("scaling jobs take their sizes from [scaling].sizes, not sweep/points", "sweep")
        base = grid_values(cfg)[0]
        pts = []
        for n in cfg.section("scaling")["sizes"]:
            pre = {**base["pre"], "n": n}
            build_params(pre)
            pts.append({"pre": pre, "post": pre})
        return ["n"], pts
    return cfg.varying_keys(), grid_values(cfg)


def _index_values(keys, values):
    out = []
    for k in keys:
        if k.startswith("post."):
            out.append(values["post"][k[5:]])
        else:
            out.append(values["pre"][k])
    return out


def evaluate(cfg: JobConfig, points: list[dict]) -> list[dict]:
    worker = WORKERS[cfg.kind]
    tasks = [(values, cfg.options) for values in points]
    if cfg.workers == 1 or len(tasks) == 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(cfg.workers, len(tasks))) as pool:
        # map preserves submission order, so rows stay in grid order
        return list(pool.map(worker, tasks))


def _post_tables(cfg: JobConfig, keys, points, results) -> dict:
    """Tables computed from all points together."""
    extra = {}
    if cfg.kind == "entropy" and len(cfg.sweep) == 1 and len(points) >= 5:
        xs = [p["pre"][keys[0]] if not keys[0].startswith("post.") else p["post"][keys[0][5:]] for p in points]
        ys = [r["main"][0]["c_eff"] for r in results]
        if np.all(np.diff(xs) > 0) or np.all(np.diff(xs) < 0):
            extra["kink"] = ([], [{"param": keys[0], "kink_at": kink_detect(xs, ys)}])
    if cfg.kind == "quench" and cfg.section("quench")["observable"] == "entropy" and len(results) >= 2:
        series = []
        for values, res in zip(points, results):
            m = res["main"][0]
            series.append(
                dynamics.EntropySeries(
                    np.array([0.0]), np.array([0.0]), m["l"], m["saturation_time"], m["slope"],
                    m["intercept"], m["r2"], values["pre"]["alpha"], values["post"]["alpha"],
                )
            )
        try:
            sc = dynamics.growth_scaling(series)
            extra["growth"] = ([], [{"branch": sc.branch, "a1": sc.a1, "r2": sc.r2, "spread": sc.spread}])
        except DomainError:
            pass
    return extra


def run_job(cfg: JobConfig) -> list[Path]:
    """Evaluate the job and write its CSV files; returns the written paths."""
    keys, points = job_points(cfg)
    results = evaluate(cfg, points)
    tables: dict[str, tuple[list, list]] = {}
    for idx, (values, res) in enumerate(zip(points, results)):
        index = _index_values(keys, values)
        for table, rows in res.items():
            prefix_cols = (["point"] if table != "main" else []) + keys
            prefix = ([idx] if table != "main" else []) + index
            cols, acc = tables.setdefault(table, (prefix_cols + list(rows[0].keys()) if rows else prefix_cols, []))
            for row in rows:
                acc.append(prefix + [row[c] for c in cols[len(prefix_cols):]])
    for table, (cols, rows) in _post_tables(cfg, keys, points, results).items():
        tables[table] = (list(rows[0].keys()), [list(r.values()) for r in rows])

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    echo = config_echo(cfg)
    written = []
    for table, (cols, rows) in tables.items():
        path = out_dir / (f"{cfg.name}.csv" if table == "main" else f"{cfg.name}_{table}.csv")
        n_index = len(keys) + (0 if table == "main" else 1)
        if table in ("kink", "growth"):
            n_index = 0
        header = [f"chiralchain {cfg.kind} ({table})", f"index_columns: {','.join(cols[:n_index])}", "config:"]
        header += ["  " + line if line else "" for line in echo]
        path.write_text(render_csv(header, cols, rows))
        written.append(path)
    if cfg.plot:
        from .plotting import plot_csv

        written += [plot_csv(p) for p in list(written)]
    return written


def _error(code: int, exc: BaseException, key: str | None = None) -> int:
    record = {"status": "error", "exit_code": code, "type": type(exc).__name__, "message": str(exc)}
    if key:
        record["key"] = key
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chiralchain", description="Free-fermion solver for the long-range XY chain with DM interactions.")
    parser.add_argument("kind", choices=JOB_KINDS, help="job to run")
    parser.add_argument("--config", required=True, help="TOML configuration file")
    parser.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE", help="override a configuration key (dotted path)")
    parser.add_argument("--workers", type=int, help="size of the worker pool")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--plot", action="store_true", help="also write SVG plots derived from the CSVs")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        try:
            doc = tomli.loads(text)
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"malformed configuration: {exc}") from exc
        doc = apply_overrides(doc, args.sets)
        if args.workers is not None:
            doc.setdefault("run", {})["workers"] = args.workers
        if args.out is not None:
            doc.setdefault("output", {})["dir"] = args.out
        if args.plot:
            doc.setdefault("output", {})["plot"] = True
        cfg = config_from_dict(doc, args.kind)
        paths = run_job(cfg)
    except ConfigError as exc:
        return _error(EXIT_CONFIG, exc, exc.key)
    except NumericalConsistencyError as exc:
        return _error(EXIT_NUMERICAL, exc)
    except (DomainError, ValueError, IndexError) as exc:
        return _error(EXIT_FAILURE, exc)
    for p in paths:
        print(p)
    return EXIT_OK


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
