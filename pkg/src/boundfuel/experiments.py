"""Declarative experiment configs and the runners that turn them into files.

A config is an INI file::

    [experiment]
    id = reference_fuels
    output_dir = out/reference_fuels

    [params]
    nbar_th = 0.05
    t_tr_ns = 50

Unknown sections or keys are rejected.  The environment variable
``BOUNDFUEL_OUTPUT_DIR`` overrides ``output_dir``.
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import json
import math
import os
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .acceptance import REFERENCE_FUELS, fls_closed_form_temperature, run_all, reference_fuel_rows
from .curves import CurveOutput, atomic_write, format_float
from .ergotropy import ergotropy_curve_fls, ergotropy_curve_horodecki, horodecki_dynamics, zero_crossing
from .micromaser import (
    CavityConfig,
    analytic_temperature,
    process_cluster,
    pump_coefficients_4qubit,
    pump_coefficients_qutrit,
    qutrit_effective_temperature,
    reported_qutrit_coefficients,
    temperature_vs_ttr,
)
from .singleshot import single_shot_sweep
from .states import fls_state, horodecki_state

__all__ = ["EXPERIMENTS", "ExperimentConfig", "load_config", "run_experiment"]


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.replace(",", " ").split())


# key -> (parser, default)
PARAMS: dict[str, tuple[Callable[[str], Any], Any]] = {
    "omega_c_ghz": (float, 10.0),
    "kappa_over_mu": (float, 1.0),
    "nbar_th": (float, 0.05),
    "gamma_mhz": (float, 1.0),
    "t_tr_ns": (float, 50.0),
    "g_tau": (float, 0.02),
    "fock_dim": (int, 40),
    "seed": (int, 0),
    "n_points": (int, 101),
    "alphas": (_floats, (2.0, 3.25, 4.2)),
    "eps_list": (_floats, (0.0, 0.25, 0.5, 0.75, 1.0)),
    "gamma_u_ratio": (float, 0.5),
    "t_end": (float, 1.0),
    "dt": (float, 2e-4),
    "tau_max": (float, 100.0),
    "tau_step": (float, 0.05),
    "t_tr_max_ns": (float, 2.0e6),
}

EXPERIMENTS = (
    "ergotropy_fls",
    "ergotropy_horodecki",
    "dsd_dynamics",
    "singleshot",
    "micromaser_ttr",
    "micromaser_eps",
    "micromaser_qutrit",
    "reference_fuels",
    "acceptance",
)

DESCRIPTIONS = {
    "ergotropy_fls": "ergotropy of the FLS family vs eps, with the closed form",
    "ergotropy_horodecki": "ergotropy of the Horodecki pair vs alpha, with both printed branches",
    "dsd_dynamics": "ergotropy, negativity and realignment under qutrit amplitude damping",
    "singleshot": "single-collision target temperature, heat and entropy production",
    "micromaser_ttr": "cavity temperature vs transfer time for Smolin, FLS and dephased fuels",
    "micromaser_eps": "cavity temperature vs eps for GADC-processed FLS fuel",
    "micromaser_qutrit": "cavity temperature vs alpha for Horodecki qutrit pairs",
    "reference_fuels": "pump coefficients and cavity temperature for six reference fuels (JSON)",
    "acceptance": "full acceptance report",
}


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    id: str
    params: dict
    output_dir: Path

    @property
    def cavity(self) -> CavityConfig:
        p = self.params
        return CavityConfig(p["omega_c_ghz"], p["kappa_over_mu"], p["nbar_th"], p["gamma_mhz"], p["fock_dim"])

    def digest(self) -> str:
        canon = json.dumps({"id": self.id, "params": _jsonable(self.params)}, sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else format_float(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _validate(params: dict) -> None:
    p = params
    if p["omega_c_ghz"] <= 0 or p["gamma_mhz"] < 0 or p["nbar_th"] < 0 or p["kappa_over_mu"] < 0:
        raise ValueError("cavity parameters out of range")
    if p["t_tr_ns"] < 0 or p["t_tr_max_ns"] <= 0:
        raise ValueError("transfer times must be non-negative")
    if not 0 < p["g_tau"] <= 0.2:
        raise ValueError("g_tau must lie in (0, 0.2]")
    if p["fock_dim"] < 4 or p["n_points"] < 2:
        raise ValueError("fock_dim >= 4 and n_points >= 2 required")
    if any(not 2 <= a <= 5 for a in p["alphas"]):
        raise ValueError("alphas must lie in [2, 5]")
    if any(not 0 <= e <= 1 for e in p["eps_list"]):
        raise ValueError("eps_list entries must lie in [0, 1]")
    if p["dt"] <= 0 or p["t_end"] <= 0 or p["tau_step"] <= 0 or p["tau_max"] <= 0:
        raise ValueError("time steps and ranges must be positive")


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep key case
    with open(path) as fh:
        cp.read_file(fh)
    extra = set(cp.sections()) - {"experiment", "params"}
    if extra:
        raise ValueError(f"unknown config sections {sorted(extra)}")
    if not cp.has_section("experiment"):
        raise ValueError("config needs an [experiment] section")
    exp = dict(cp["experiment"])
    unknown = set(exp) - {"id", "output_dir"}
    if unknown:
        raise ValueError(f"unknown [experiment] keys {sorted(unknown)}")
    eid = exp.get("id", "")
    if eid not in EXPERIMENTS:
        raise ValueError(f"unknown experiment id {eid!r}; choose from {', '.join(EXPERIMENTS)}")
    params = {k: default for k, (_, default) in PARAMS.items()}
    if cp.has_section("params"):
        for key, raw in cp["params"].items():
            if key not in PARAMS:
                raise ValueError(f"unknown parameter {key!r}")
            params[key] = PARAMS[key][0](raw)
    _validate(params)
    out = os.environ.get("BOUNDFUEL_OUTPUT_DIR") or exp.get("output_dir") or f"out/{eid}"
    out_path = Path(out)
    if not out_path.is_absolute():
        out_path = Path(path).resolve().parent / out_path if "output_dir" in exp else Path.cwd() / out_path
    return ExperimentConfig(eid, params, out_path)


def _write_json(path: Path, obj) -> None:
    atomic_write(path, json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


# ------------------------------------------------------------- runners


def _ergotropy_fls(cfg):
    return {"ergotropy_fls.csv": ergotropy_curve_fls(np.linspace(0, 1, cfg.params["n_points"]))}


def _ergotropy_horodecki(cfg):
    return {"ergotropy_horodecki.csv": ergotropy_curve_horodecki(np.linspace(2, 5, cfg.params["n_points"]))}


def _dsd(cfg):
    p = cfg.params
    out, summary = {}, {}
    for a in p["alphas"]:
        c = horodecki_dynamics(a, p["gamma_u_ratio"], p["t_end"], p["dt"])
        out[f"dsd_alpha{format_float(a)}.csv"] = c
        summary[format_float(a)] = {
            "negativity_zero": zero_crossing(c.grid, -c["pt_min_eig"]),
            "realignment_zero": zero_crossing(c.grid, c["realignment"]),
            "max_negativity": float(c["negativity"].max()),
        }
    return out, {"dsd_summary.json": summary}


def _singleshot(cfg):
    p = cfg.params
    taus = np.arange(0.0, p["tau_max"] + 0.5 * p["tau_step"], p["tau_step"])
    curves = single_shot_sweep(p["eps_list"], taus)
    files = {f"singleshot_eps{format_float(e)}.csv": c for e, c in curves.items()}
    meta = {format_float(e): c.metadata for e, c in curves.items()}
    return files, {"singleshot_summary.json": meta}


def _micromaser_ttr(cfg):
    tmax = cfg.params["t_tr_max_ns"] * 1e-9
    n = cfg.params["n_points"]
    grid = np.unique(np.concatenate([np.linspace(0, tmax, 2 * n - 1), np.geomspace(1e-9, tmax, n)]))
    fams = ["smolin", "fls0", "fls0.5", "fls1", "dephased_fls0.5", "dephased_fls1"]
    return {"micromaser_ttr.csv": temperature_vs_ttr(fams, grid, cfg.cavity)}


def _micromaser_eps(cfg):
    cav = cfg.cavity
    t_tr = cfg.params["t_tr_ns"] * 1e-9
    grid = np.linspace(0, 1, cfg.params["n_points"])
    cs = [pump_coefficients_4qubit(process_cluster(fls_state(e), t_tr, cav)) for e in grid]
    t = np.array([analytic_temperature(c, cav).kelvin for c in cs])
    ref = fls_closed_form_temperature(grid)
    cols = {
        "C": [c.C for c in cs],
        "delta": [c.delta for c in cs],
        "T_kelvin": t,
        "T_closed_form": ref,
        "rel_dev": t / ref - 1,
    }
    return {"micromaser_eps.csv": CurveOutput("eps", grid, cols)}


def _micromaser_qutrit(cfg):
    cav = cfg.cavity
    grid = np.linspace(2, 5, cfg.params["n_points"])
    sums = [pump_coefficients_qutrit(horodecki_state(a)) for a in grid]
    rep = [reported_qutrit_coefficients(a) for a in grid]
    cols = {
        "lambda": [np.real(c.lam) for c in sums],
        "r_e": [c.r_e for c in sums],
        "r_d": [c.r_g for c in sums],
        "T_reduced": [qutrit_effective_temperature(c, cav).reduced for c in sums],
        "r_e_reported": [c.r_e for c in rep],
        "r_d_reported": [c.r_g for c in rep],
        "T_reduced_reported": [qutrit_effective_temperature(c, cav).reduced for c in rep],
    }
    return {"micromaser_qutrit.csv": CurveOutput("alpha", grid, cols)}


def _reference_fuels(cfg):
    rows = reference_fuel_rows(cfg.cavity, cfg.params["t_tr_ns"] * 1e-9)
    for r in rows:
        c0, d0, t0 = REFERENCE_FUELS[r["state"]]
        r["reference"] = {"C": c0, "delta": d0, "T_kelvin": t0}
    return {}, {"reference_fuels.json": rows}


def _acceptance(cfg):
    results = run_all()
    report = [dataclasses.asdict(r) for r in results]
    text = "\n".join(r.line() for r in results) + "\n"
    return {}, {"acceptance.json": report}, {"acceptance.txt": text}


RUNNERS = {
    "ergotropy_fls": _ergotropy_fls,
    "ergotropy_horodecki": _ergotropy_horodecki,
    "dsd_dynamics": _dsd,
    "singleshot": _singleshot,
    "micromaser_ttr": _micromaser_ttr,
    "micromaser_eps": _micromaser_eps,
    "micromaser_qutrit": _micromaser_qutrit,
    "reference_fuels": _reference_fuels,
    "acceptance": _acceptance,
}


def run_experiment(cfg: ExperimentConfig) -> list[Path]:
    """Run one experiment, write its files plus ``manifest.json``; return written paths."""
    res = RUNNERS[cfg.id](cfg)
    if not isinstance(res, tuple):
        res = (res,)
    curves = res[0]
    jsons = res[1] if len(res) > 1 else {}
    texts = res[2] if len(res) > 2 else {}
    out = cfg.output_dir
    written = []
    meta = {}
    for name, curve in curves.items():
        curve.to_csv(out / name)
        written.append(out / name)
        if curve.metadata:
            meta[name] = curve.metadata
    for name, obj in jsons.items():
        _write_json(out / name, obj)
        written.append(out / name)
    for name, text in texts.items():
        atomic_write(out / name, text)
        written.append(out / name)
    manifest = {
        "experiment": cfg.id,
        "config_sha256": cfg.digest(),
        "seed": cfg.params["seed"],
        "version": __version__,
        "params": cfg.params,
        "files": sorted(p.name for p in written),
        "metadata": meta,
    }
    _write_json(out / "manifest.json", manifest)
    return written + [out / "manifest.json"]


def verify(ref_dir: str | os.PathLike, out_dir: str | os.PathLike, atol: float = 1e-9, rtol: float = 1e-9) -> dict:
    """Per-column max absolute deviation between two result directories (CSV files)."""
    ref_dir, out_dir = Path(ref_dir), Path(out_dir)
    report = {"files": {}, "failures": [], "passed": True}
    ref_files = sorted(ref_dir.glob("*.csv"))
    if not ref_files:
        raise ValueError(f"no CSV files in {ref_dir}")
    for rf in ref_files:
        of = out_dir / rf.name
        if not of.exists():
            report["failures"].append(f"{rf.name}: missing")
            continue
        a, b = CurveOutput.from_csv(rf), CurveOutput.from_csv(of)
        if a.names != b.names or a.grid.shape != b.grid.shape:
            raise ValueError(f"{rf.name}: shape or header mismatch")
        cols = {}
        for name in a.names:
            x, y = a[name], b[name]
            same_nonfinite = (~np.isfinite(x) & (x == y)) | (np.isnan(x) & np.isnan(y))
            d = np.where(same_nonfinite, 0.0, np.abs(x - y))
            d = np.nan_to_num(d, nan=np.inf)
            dev = float(d.max()) if d.size else 0.0
            cols[name] = dev
            bound = atol + rtol * np.abs(np.where(np.isfinite(x), x, 0))
            if np.any(d > bound):
                report["failures"].append(f"{rf.name}:{name} max deviation {dev:.3e}")
        report["files"][rf.name] = cols
    report["passed"] = not report["failures"]
    return report
