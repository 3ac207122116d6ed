"""Command-line dataset generator.

Usage::

    python -m stepswitch --preset fig3 --out results/
    python -m stepswitch --config run.ini --mode approx --tol 1e-9

Configs are INI files (sections ``[scenario]``, ``[run]``, ``[sampling]``,
``[grid]``); see the README for the keys.  Each run writes one or more CSV
files and a JSON manifest holding the resolved config, the library version
and the derived momenta.

Exit status: 0 success, 1 invalid input or I/O failure, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .composer import coefficients, longtime_energy, psi_approx, psi_exact, psi_longtime
from .faddeeva import FaddeevaOverflowError
from .model import HBAR, Scenario, derive_momenta
from .observables import d_dt, d_dx
from .oracle import oracle_psi, oracle_psi_j
from .quadrature import QuadratureError
from .transient import TERMS, eval_term, eval_term_parts

CSV_VERSION = "stepswitch-csv 1"
COLUMNS = ("x", "t", "re_psi", "im_psi", "density", "flux", "hbar_omega", "method", "component")
MODES = ("exact", "approx", "oracle", "grid", "compare", "limit")
POINT_METHODS = ("exact", "approx", "oracle", "limit")

SET_A = dict(mass=0.067, E_q=0.3, V0_old=0.3, V0_new=0.8)
SET_B = dict(mass=0.042, E_q=0.04, V0_old=0.42, V0_new=0.62)
SET_F5 = dict(mass=0.067, E_q=0.3, V0_old=0.8, V0_new=0.2)
DESK_DX = 44.96 / 1999
DESK_DT = 1e-4


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved description of one run."""

    name: str
    mass: float
    E_q: float
    V0_old: float
    V0_new: float
    incidence: str = "left"
    mode: str = "exact"
    methods: tuple = ("exact",)
    components: tuple = ("psi",)
    x: tuple = ()
    t: tuple = ()
    split: str = "none"
    observables: bool = True
    tol: float = 1e-10
    boxes: tuple = ()  # ((L, N, dt), ...)
    T: float = 0.0
    stride: int = 0
    probes: tuple = ()
    grid_exact: bool = False
    notes: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; choose from {', '.join(MODES)}")
        if self.split not in ("none", "t", "x"):
            raise ConfigError("split must be none, t or x")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        for m in self.methods:
            if m not in POINT_METHODS:
                raise ConfigError(f"unknown method {m!r}")
        for c in self.components:
            if c not in _COMPONENTS:
                raise ConfigError(f"unknown component {c!r}")
        if self.mode == "grid":
            if not self.boxes:
                raise ConfigError("grid mode needs at least one box (L/N/dt)")
            if not self.probes:
                raise ConfigError("grid mode needs probes")
            if not self.T >= 0:
                raise ConfigError("T must be non-negative")
            for L, N, dt in self.boxes:
                if not (L > 0 and N >= 3 and dt > 0):
                    raise ConfigError(f"invalid box {L}/{N}/{dt}")
        else:
            if not self.x:
                raise ConfigError("empty x sampling")
            if not self.t:
                raise ConfigError("empty t sampling")
            if any(tt < 0 for tt in self.t):
                raise ConfigError("negative times are not allowed")

    def scenario(self) -> Scenario:
        return Scenario(self.mass, self.E_q, self.V0_old, self.V0_new, self.incidence)

    def point_methods(self):
        if self.mode == "compare":
            return self.methods
        return (self.mode,)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for k in ("methods", "components", "x", "t", "probes"):
            d[k] = list(d[k])
        d["boxes"] = [list(b) for b in self.boxes]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        for k in ("methods", "components", "x", "t", "probes"):
            if k in d:
                d[k] = tuple(d[k])
        if "boxes" in d:
            d["boxes"] = tuple((float(L), int(N), float(dt)) for L, N, dt in d["boxes"])
        return cls(**d)


_COMPONENTS = {"psi", "remainder", "pole", "psi1", "psi2", "psi3", "psi4"} | {
    f"{j}{a}" for j, a in TERMS}


# -- parsing ---------------------------------------------------------------

def parse_values(text: str) -> tuple:
    """``"a, b, c"`` or ``"start:stop:num"`` (inclusive, like linspace)."""
    text = text.strip()
    if not text:
        return ()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:stop:num, got {text!r}")
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            return ()
        return tuple(float(v) for v in np.linspace(a, b, n))
    return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())


def _parse_boxes(text: str) -> tuple:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            L, N, dt = item.split("/")
            out.append((float(L), int(N), float(dt)))
        except ValueError as exc:
            raise ConfigError(f"box must be L/N/dt, got {item!r}") from exc
    return tuple(out)


def _words(text: str) -> tuple:
    return tuple(w.strip() for w in text.split(",") if w.strip())


def config_from_ini(text: str, name: str = "run") -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    sc = cp["scenario"] if cp.has_section("scenario") else {}
    run = cp["run"] if cp.has_section("run") else {}
    smp = cp["sampling"] if cp.has_section("sampling") else {}
    grd = cp["grid"] if cp.has_section("grid") else {}
    try:
        kw = dict(
            name=run.get("name", name),
            mass=float(sc["mass"]), E_q=float(sc["E_q"]),
            V0_old=float(sc["V0_old"]), V0_new=float(sc["V0_new"]),
            incidence=sc.get("incidence", "left"),
            mode=run.get("mode", "exact"),
            methods=_words(run.get("methods", "exact")),
            components=_words(run.get("components", "psi")),
            x=parse_values(smp.get("x", "")), t=parse_values(smp.get("t", "")),
            split=run.get("split", "none"),
            observables=run.get("observables", "true").lower() in ("1", "true", "yes", "on"),
            tol=float(run.get("tol", "1e-10")),
            boxes=_parse_boxes(grd.get("boxes", "")),
            T=float(grd.get("T", "0")), stride=int(grd.get("stride", "0")),
            probes=parse_values(grd.get("probes", "")),
            grid_exact=grd.get("exact", "false").lower() in ("1", "true", "yes", "on"),
            notes=run.get("notes", ""),
        )
    except KeyError as exc:
        raise ConfigError(f"missing key {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(**kw)


def preset(name: str, desk: bool = False) -> RunConfig:
    """Configs reproducing the figure datasets (caption parameters).

    ``desk=True`` replaces the grid resolution by ``dx = 44.96/1999`` nm and
    ``dt = 1e-4`` fs.
    """
    def rng(a, b, n):
        return tuple(float(v) for v in np.linspace(a, b, n))

    P = {
        "fig1": dict(SET_A, mode="compare", methods=("exact", "approx"),
                     components=("psi", "remainder"), x=(100.0,), t=rng(0.5, 200, 400),
                     observables=False,
                     notes="density vs t at x = 100 nm; remainder rows give the I'' part"),
        "fig2": dict(SET_A, components=("1T", "2T", "3I"), x=rng(-50, 150, 401), t=(10.0,),
                     observables=False, notes="single terms at t = 10 fs"),
        "fig3": dict(SET_A, x=rng(-150, 150, 1201), t=(10.0, 50.0), split="t",
                     observables=False, notes="fronts at p0 t/m, p0' t/m, -q0 t/m"),
        "fig4": dict(SET_A, x=(100.0,), t=rng(0.5, 300, 300),
                     notes="hbar*omega_av vs t at x = 100 nm"),
        "fig5": dict(SET_F5, x=rng(-150, 250, 801), t=(50.0,), observables=False,
                     notes="old step deeper than the new one"),
        "fig6": dict(SET_B, mode="grid", boxes=((44.96, 10000, 1e-6),), T=100.0,
                     probes=(-22.48,), grid_exact=True, notes="flux at the left edge"),
        "fig7": dict(SET_B, mode="grid", boxes=((179.84, 80000, 5e-5), (44.96, 20001, 5e-5)),
                     T=100.0, probes=(0.0,), grid_exact=True, notes="flux at x = 0, two boxes"),
        "fig8": dict(SET_B, mode="grid", boxes=((44.96, 10000, 1e-6),), T=100.0,
                     probes=(22.48,), grid_exact=True, notes="flux at the right edge"),
    }
    if name not in P:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(sorted(P))}")
    kw = P[name]
    if desk and kw.get("mode") == "grid":
        kw = dict(kw)
        kw["boxes"] = tuple((L, int(round(L / DESK_DX)) + 1, DESK_DT) for L, _, _ in kw["boxes"])
        kw["notes"] += " (desk resolution)"
    return RunConfig(name=name, **kw)


# -- evaluation ------------------------------------------------------------

def _value(cfg: RunConfig, method: str, component: str, x: float, t: float) -> complex:
    s = cfg.scenario()
    if method == "exact":
        if component == "psi":
            return psi_exact(s, x, t, cfg.tol).value
        if t == 0:
            raise ConfigError("components other than psi need t > 0")
        if component in ("remainder", "pole"):
            k = 1 if component == "remainder" else 0
            return complex(sum(cf * eval_term_parts(j, a, s, x, t, cfg.tol)[k]
                               for j, cf in coefficients(s).items() for a in "IRT"))
        if component.startswith("psi"):
            j = int(component[3])
            return complex(sum(eval_term(j, a, s, x, t, cfg.tol) for a in "IRT"))
        return eval_term(int(component[0]), component[1], s, x, t, cfg.tol)
    if method == "approx":
        if component != "psi":
            raise ConfigError("approx supports the psi component only")
        return psi_approx(s, x, t).value
    if method == "oracle":
        if component == "psi":
            return oracle_psi(s, x, t)
        if component.startswith("psi"):
            return oracle_psi_j(int(component[3]), s, x, t)
        raise ConfigError("oracle supports psi and psi1..psi4 only")
    if method == "limit":
        if component != "psi":
            raise ConfigError("limit supports the psi component only")
        return complex(psi_longtime(s, x) * np.exp(-1j * longtime_energy(s) * t / HBAR))
    raise ConfigError(f"unknown method {method!r}")


def _row(args):
    cfg, method, component, x, t = args
    v = _value(cfg, method, component, x, t)
    flux = hw = math.nan
    if cfg.observables:
        def smp(xx, tt):
            return _value(cfg, method, component, xx, tt)
        flux = float((np.conj(v) * d_dx(smp, x, t)).imag * HBAR / cfg.scenario().m)
        if abs(v) > 1e-12:
            hw = float(-HBAR * (d_dt(smp, x, t) / v).imag)
    return (x, t, v.real, v.imag, abs(v) ** 2, flux, hw, method, component)


def _fmt(v):
    if isinstance(v, str):
        return v
    return repr(float(v))


def _write_csv(path: Path, rows, header_note: str):
    buf = io.StringIO()
    buf.write(f"# {CSV_VERSION}; {header_note}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    path.write_text(buf.getvalue())


def _point_tasks(cfg: RunConfig):
    tasks = []
    for method in cfg.point_methods():
        comps = cfg.components if method == "exact" else ("psi",)
        for comp in comps:
            for t in cfg.t:
                for x in cfg.x:
                    tasks.append((cfg, method, comp, x, t))
    return tasks


def _grid_rows(cfg: RunConfig, box, workers):
    from .gridsim import run_probes
    L, N, dt = box
    s = cfg.scenario()
    nsteps = int(round(cfg.T / dt))
    stride = cfg.stride or max(1, nsteps // 400)
    ps = run_probes(s, L, N, dt, cfg.T, cfg.probes, stride=stride)
    rows = []
    for k, t in enumerate(ps.t):
        for i, x in enumerate(ps.x):
            v = complex(ps.psi[k, i])
            rows.append((float(x), float(t), v.real, v.imag, abs(v) ** 2, float(ps.flux[k, i]),
                         math.nan, "grid", "psi"))
    if cfg.grid_exact:
        ecfg = dataclasses.replace(cfg, mode="exact", observables=True, x=tuple(ps.x), t=(0.0,))
        tasks = [(ecfg, "exact", "psi", float(x), float(t)) for t in ps.t for x in ps.x]
        rows += _map(_row, tasks, workers)
    return rows


def _map(fn, tasks, workers):
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, tasks, chunksize=max(1, len(tasks) // (8 * workers))))
    return [fn(tk) for tk in tasks]


def manifest(cfg: RunConfig, files) -> dict:
    s = cfg.scenario()
    ms = derive_momenta(s)
    m = s.m
    return {
        "version": __version__,
        "csv_format": CSV_VERSION,
        "columns": list(COLUMNS),
        "config": cfg.to_dict(),
        "momenta": ms.as_dict(),
        "mass_eV_fs2_per_nm2": m,
        "front_speeds_nm_per_fs": {
            "p0/m": float(ms.p0.real / m), "p0_new/m": float(ms.p0_new.real / m),
            "-q0/m": float(-ms.q0.real / m)},
        "files": [str(f.name) for f in files],
    }


def run(cfg: RunConfig, out: Path, workers: int = 1) -> list:
    """Compute the datasets of ``cfg`` into directory ``out``; returns the paths written."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    if cfg.mode == "grid":
        for L, N, dt in cfg.boxes:
            rows = _grid_rows(cfg, (L, N, dt), workers)
            suffix = f"_L{L:g}" if len(cfg.boxes) > 1 else ""
            p = out / f"{cfg.name}{suffix}.csv"
            _write_csv(p, rows, f"{cfg.name} L={L:g} N={N} dt={dt:g}")
            files.append(p)
    else:
        rows = _map(_row, _point_tasks(cfg), workers)
        if cfg.split == "none":
            groups = {"": rows}
        else:
            col = 1 if cfg.split == "t" else 0
            keys = cfg.t if cfg.split == "t" else cfg.x
            groups = {f"_{cfg.split}{k:g}": [r for r in rows if r[col] == k] for k in keys}
        for suffix, rr in groups.items():
            p = out / f"{cfg.name}{suffix}.csv"
            _write_csv(p, rr, cfg.name)
            files.append(p)
    mpath = out / f"{cfg.name}.json"
    mpath.write_text(json.dumps(manifest(cfg, files), indent=2, sort_keys=True) + "\n")
    return files + [mpath]


def config_from_manifest(path) -> RunConfig:
    return RunConfig.from_dict(json.loads(Path(path).read_text())["config"])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stepswitch", description=__doc__.split("\n\n")[0])
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", type=Path, help="INI run description")
    src.add_argument("--preset", help="figure preset fig1..fig8")
    ap.add_argument("--mode", choices=MODES, help="override the run mode")
    ap.add_argument("--out", type=Path, default=Path("."), help="output directory")
    ap.add_argument("--tol", type=float, help="absolute tolerance of the remainder quadrature")
    ap.add_argument("--desk", action="store_true", help="desk-scale grid resolution for presets")
    ap.add_argument("--workers", type=int, default=1, help="worker processes")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.config is not None:
            cfg = config_from_ini(args.config.read_text(), name=args.config.stem)
        else:
            cfg = preset(args.preset, desk=args.desk)
        over = {}
        if args.mode:
            over["mode"] = args.mode
        if args.tol is not None:
            over["tol"] = args.tol
        if over:
            cfg = dataclasses.replace(cfg, **over)
        cfg.scenario()
        paths = run(cfg, args.out, args.workers)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (QuadratureError, FaddeevaOverflowError, NotImplementedError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
