"""Parameter sweeps behind the figure commands, and their file outputs."""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .channel import ChannelParams
from .effective_capacity import (
    LN2,
    ec_exact,
    ec_high_snr,
    ec_low_snr,
    ec_quadrature,
    low_snr_expansion,
)
from .errors import ParameterError
from .mc_sim import McConfig, estimate_ec_mc, estimate_ser_mc
from .ser import (
    Modulation,
    ser_asymptotic,
    ser_asymptotic_oracle,
    ser_average,
    ser_average_gaussian_bpsk,
    ser_average_printed,
    ser_average_quadrature,
)

PATHS = ("analytic", "quadrature", "asymptotic", "mc", "printed", "oracle")


@dataclass
class SweepSpec:
    command: str
    params: dict
    paths: tuple = ("analytic", "asymptotic")
    seed: int = 0
    mc_samples: int = 1_000_000

    def __post_init__(self):
        bad = [p for p in self.paths if p not in PATHS]
        if bad:
            raise ParameterError(f"unknown evaluation path(s) {bad}; choose from {PATHS}")


@dataclass
class SweepResult:
    abscissa: str
    columns: dict
    metadata: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def column_names(self):
        return list(self.columns)

    def rows(self):
        return list(zip(*self.columns.values()))


def parse_range(text):
    """``start:stop:step`` (stop included), a comma list, or a single number."""
    text = str(text).strip()
    try:
        if ":" in text:
            parts = [float(v) for v in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, stop, step = parts
            if step == 0 or (stop - start) / step < 0:
                raise ValueError
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            vals = start + step * np.arange(count)
        else:
            vals = np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError:
        raise ParameterError(f"bad range {text!r}; use start:stop:step or a comma list") from None
    if vals.size == 0 or not np.all(np.isfinite(vals)):
        raise ParameterError(f"range {text!r} is empty or not finite")
    return vals


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def _tag(v):
    return format(float(v), "g")


def _scalar(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 1:
            raise ParameterError(f"this command takes a single value, got {list(v)}")
        v = v[0]
    return float(v)


def _guarded(fn, warnings, label):
    # domain gaps (e.g. an asymptote that does not exist) become NaN plus a
    # warning; accuracy failures propagate
    try:
        return float(fn())
    except ParameterError as exc:
        warnings.append(f"{label}: {exc}")
        return math.nan


def _meta(spec, **declared):
    meta = {
        "command": spec.command,
        "params": spec.params,
        "paths": list(spec.paths),
        "seed": spec.seed,
        "tool_version": __version__,
    }
    if "mc" in spec.paths:
        meta["mc_samples"] = spec.mc_samples
    if declared:
        meta["declared_defaults"] = declared
    return meta


def _mc_cfg(spec):
    return McConfig(seed=spec.seed, n_samples=spec.mc_samples)


# --- effective capacity figures ---------------------------------------------------


def _ec_columns(spec, cols, warnings, p, A, suffix, label):
    if "analytic" in spec.paths:
        cols.setdefault(f"ec_exact_{suffix}", []).append(
            _guarded(lambda: ec_exact(p, A), warnings, label)
        )
    if "quadrature" in spec.paths:
        cols.setdefault(f"ec_quad_{suffix}", []).append(
            _guarded(lambda: ec_quadrature(p, A), warnings, label)
        )
    if "asymptotic" in spec.paths:
        cols.setdefault(f"ec_asymp_{suffix}", []).append(
            _guarded(lambda: ec_high_snr(p, A), warnings, label)
        )
    if "mc" in spec.paths:
        est = estimate_ec_mc(p, A, _mc_cfg(spec))
        cols.setdefault(f"ec_mc_{suffix}", []).append(est.value)
        cols.setdefault(f"ec_mc_se_{suffix}", []).append(est.std_error)


def ec_vs_snr(spec):
    q = spec.params
    snr_db = parse_range(q.get("snr_db", "0:30:2"))
    cols = {"snr_db": list(snr_db)}
    warnings = []
    for m in q.get("m", [2.0, 4.0]):
        for ms in q.get("m_s", [4.0, 6.0]):
            for A in q.get("A", [1.0]):
                suffix = f"m{_tag(m)}_ms{_tag(ms)}_A{_tag(A)}"
                for db, g in zip(snr_db, db_to_linear(snr_db)):
                    p = ChannelParams(m, ms, g)
                    _ec_columns(spec, cols, warnings, p, A, suffix, f"{suffix} at {db:g} dB")
    return SweepResult("snr_db", cols, _meta(spec), warnings)


def ec_vs_delay(spec):
    q = spec.params
    a_vals = parse_range(q.get("A_range", "0.5:10:0.5"))
    snr_db = float(q.get("snr_db", 10.0))
    cols = {"A": list(a_vals)}
    warnings = []
    for m in q.get("m", [2.0, 4.0]):
        for ms in q.get("m_s", [4.0, 6.0]):
            suffix = f"m{_tag(m)}_ms{_tag(ms)}"
            p = ChannelParams(m, ms, float(db_to_linear(snr_db)))
            for A in a_vals:
                _ec_columns(spec, cols, warnings, p, A, suffix, f"{suffix} at A={A:g}")
    return SweepResult("A", cols, _meta(spec, snr_db=snr_db), warnings)


def ec_vs_theta(spec):
    q = spec.params
    theta = parse_range(q.get("theta", "-3:0:0.25"))
    if q.get("theta_log", True):
        theta = 10.0**theta
    tb = float(q.get("TB", 1.0))
    m = _scalar(q.get("m", 2.0))
    ms = _scalar(q.get("m_s", 4.0))
    cols = {"theta": list(theta)}
    warnings = []
    for db in q.get("snr_db_list", [5.0, 10.0, 15.0]):
        p = ChannelParams(m, ms, float(db_to_linear(db)))
        suffix = f"snr{_tag(db)}dB"
        for th in theta:
            A = th * tb / LN2
            _ec_columns(spec, cols, warnings, p, A, suffix, f"{suffix} at theta={th:g}")
    return SweepResult("theta", cols, _meta(spec, TB=tb, m=m, m_s=ms), warnings)


def ec_low_snr_sweep(spec):
    q = spec.params
    ebn0_db = parse_range(q.get("ebn0_db", "-1.5:6:0.5"))
    m = _scalar(q.get("m", 2.0))
    ms = _scalar(q.get("m_s", 3.0))
    cols = {"ebn0_db": list(ebn0_db)}
    warnings = []
    meta_exp = {}
    for A in q.get("A", [1.0, 5.0]):
        exp = low_snr_expansion(m, ms, A)
        meta_exp[_tag(A)] = {"S0": exp.wideband_slope, "ebn0_min_db": exp.ebn0_min_db}
        col = []
        for db in ebn0_db:
            col.append(
                _guarded(lambda: ec_low_snr(exp, 10.0 ** (db / 10.0)), warnings, f"A={A:g} at {db:g} dB")
            )
        cols[f"ec_low_A{_tag(A)}"] = col
    meta = _meta(spec, m=m, m_s=ms, normalisation="unit mean SNR")
    meta["expansions"] = meta_exp
    return SweepResult("ebn0_db", cols, meta, warnings)


# --- error-rate figures ---------------------------------------------------------------


def _ser_columns(spec, cols, warnings, p, mod, suffix, label):
    if "analytic" in spec.paths:
        cols.setdefault(f"ser_exact_{suffix}", []).append(
            _guarded(lambda: ser_average(p, mod), warnings, label)
        )
    if "asymptotic" in spec.paths:
        cols.setdefault(f"ser_asymp_{suffix}", []).append(
            _guarded(lambda: ser_asymptotic(p, mod), warnings, label)
        )
    if "oracle" in spec.paths:
        cols.setdefault(f"ser_oracle_{suffix}", []).append(
            _guarded(lambda: ser_asymptotic_oracle(p, mod), warnings, label)
        )
    if "printed" in spec.paths:
        cols.setdefault(f"ser_printed_{suffix}", []).append(
            _guarded(lambda: ser_average_printed(p, mod), warnings, label)
        )
    if "quadrature" in spec.paths:
        cols.setdefault(f"ser_quad_{suffix}", []).append(
            _guarded(lambda: ser_average_quadrature(p, mod), warnings, label)
        )
    if "mc" in spec.paths:
        est = estimate_ser_mc(p, mod, _mc_cfg(spec))
        cols.setdefault(f"ser_mc_{suffix}", []).append(est.value)
        cols.setdefault(f"ser_mc_se_{suffix}", []).append(est.std_error)


def ser_mpsk(spec):
    q = spec.params
    snr_db = parse_range(q.get("snr_db", "0:30:2"))
    m = _scalar(q.get("m", 2.5))
    ms = _scalar(q.get("m_s", 2.5))
    cols = {"snr_db": list(snr_db)}
    warnings = []
    for M in q.get("M", [8, 16, 32]):
        mod = Modulation.mpsk(int(M))
        suffix = f"M{int(M)}"
        for db, g in zip(snr_db, db_to_linear(snr_db)):
            _ser_columns(spec, cols, warnings, ChannelParams(m, ms, g), mod, suffix, f"{suffix} at {db:g} dB")
    return SweepResult("snr_db", cols, _meta(spec, m=m, m_s=ms), warnings)


def ser_bpsk_compare(spec):
    q = spec.params
    snr_db = parse_range(q.get("snr_db", "0:30:2"))
    m = _scalar(q.get("m", 0.75))
    ms = _scalar(q.get("m_s", 2.5))
    mod = Modulation.bpsk()
    cols = {"snr_db": list(snr_db)}
    warnings = []
    for db, g in zip(snr_db, db_to_linear(snr_db)):
        p = ChannelParams(m, ms, g)
        _ser_columns(spec, cols, warnings, p, mod, "laplacian", f"{db:g} dB")
        cols.setdefault("ser_gaussian", []).append(
            _guarded(lambda: ser_average_gaussian_bpsk(p), warnings, f"gaussian at {db:g} dB")
        )
    return SweepResult("snr_db", cols, _meta(spec, m=m, m_s=ms), warnings)


FIGURES = {
    "ec-vs-snr": ec_vs_snr,
    "ec-vs-delay": ec_vs_delay,
    "ec-vs-theta": ec_vs_theta,
    "ec-low-snr": ec_low_snr_sweep,
    "ser-mpsk": ser_mpsk,
    "ser-bpsk-compare": ser_bpsk_compare,
}


def run_sweep(spec):
    return FIGURES[spec.command](spec)


# --- outputs -----------------------------------------------------------------------


def to_csv(result):
    buf = io.StringIO()
    names = result.column_names()
    buf.write(",".join(names) + "\n")
    for row in result.rows():
        buf.write(",".join("%.10e" % v for v in row) + "\n")
    return buf.getvalue()


def parse_csv(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    cols = {name: [] for name in header}
    for row in reader:
        if not row:
            continue
        for name, cell in zip(header, row):
            cols[name].append(float(cell))
    return SweepResult(header[0], cols)


def to_json(result):
    obj = {
        "metadata": result.metadata,
        "warnings": result.warnings,
        "abscissa": result.abscissa,
        "columns": {k: [None if math.isnan(v) else v for v in vs] for k, vs in result.columns.items()},
    }
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def plot_script(result, data_file):
    """gnuplot script for the CSV; error-rate plots get a log ordinate."""
    names = result.column_names()
    is_ser = any(n.startswith("ser_") for n in names)
    lines = [
        "set datafile separator ','",
        "set key outside right",
        "set grid",
        f"set xlabel '{result.abscissa}'",
    ]
    if is_ser:
        lines += ["set logscale y", "set format y '10^{%L}'", "set ylabel 'average SER'"]
    else:
        lines.append("set ylabel 'EC (bits/s/Hz)'")
    if result.abscissa == "theta":
        lines.append("set logscale x")
    curves = []
    for i, name in enumerate(names[1:], start=2):
        if "_se_" in name:
            continue
        style = "points" if ("_mc_" in name or "_asymp_" in name) else "lines"
        curves.append(f"'{data_file}' using 1:{i} with {style} title '{name}'")
    lines.append("plot " + ", \\\n     ".join(curves))
    return "\n".join(lines) + "\n"


def emit_outputs(result, outdir, stem, formats=("csv", "json"), plot=True):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats:
        path = outdir / f"{stem}.csv"
        path.write_bytes(to_csv(result).encode("ascii"))
        written.append(path)
        if plot:
            gp = outdir / f"{stem}.gp"
            gp.write_bytes(plot_script(result, path.name).encode("ascii"))
            written.append(gp)
    if "json" in formats:
        path = outdir / f"{stem}.json"
        path.write_bytes(to_json(result).encode("utf-8"))
        written.append(path)
    return written
