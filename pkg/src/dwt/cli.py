"""Command line front door: ``dwt <command> --config <file> [--out] [--format]``.

The config is a JSON object.  ``potential`` is either a path (relative to
the config file) or an inline potential object; the other keys depend on
the command and are listed in :data:`COMMANDS`.

Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import (BARYCENTER, equivalent_ratios, fit_rate, limit_subaction, phase_grid,
                          profile)
from .errors import DWTError, NumericFailure, ValidationError
from .nonselection import (StageParams, Thresholds, build_example, check_rules, desk_schedule,
                           oscillation_experiment)
from .oracle import transfer_matrix_gibbs, truncate
from .peierls import (barrier, boundary_table, corollary_identities, extrapolated_mather_values,
                      representation_formula, solve_calibrated, subaction_defect)
from .potential import (GeneralDoubleWell, ReducedPotential, potential_from_dict,
                        potential_to_dict, reduce, validate_general)
from .spectrum import eigenfunction_table, gibbs_cylinder, solve_lambda, subaction_table

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

SWEEP_COLUMNS = ["beta", "loglam1", "mu0", "mu1", "logF0", "logF1", "logFt0", "logFt1",
                 "log_mu_ratio"]
GRID_COLUMNS = ["s", "t", "regime", "gamma", "kappa", "c", "w0", "w1"]
NONSELECT_COLUMNS = ["k", "beta", "mu0", "mu1", "loglam1", "alpha0", "theta0", "alpha1",
                     "theta1", "delta"]


class Config(dict):
    """Parsed config plus the directory relative paths are resolved against."""

    def __init__(self, data: dict, base: Path):
        super().__init__(data)
        self.base = base

    def path(self, value) -> Path:
        p = Path(value)
        return p if p.is_absolute() else self.base / p

    def load_json_ref(self, key: str):
        ref = self.get(key)
        if ref is None:
            raise ValidationError(f"config needs '{key}'")
        if isinstance(ref, (str, os.PathLike)):
            with open(self.path(ref)) as fh:
                return json.load(fh)
        return ref

    def potential(self):
        return potential_from_dict(self.load_json_ref("potential"))

    def reduced(self) -> ReducedPotential:
        P = self.potential()
        return reduce(P) if isinstance(P, GeneralDoubleWell) else P

    def betas(self) -> list[float]:
        if "betas" in self:
            vals = [float(b) for b in self["betas"]]
        elif "beta_range" in self:
            start, stop, step = (float(x) for x in self["beta_range"])
            if step <= 0:
                raise ValidationError("beta_range step must be positive")
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            vals = [start + i * step for i in range(n)]
        elif "beta" in self:
            vals = [float(self["beta"])]
        else:
            raise ValidationError("config needs 'betas', 'beta_range' or 'beta'")
        if not vals or any(not (b > 0 and math.isfinite(b)) for b in vals):
            raise ValidationError("beta values must be positive and finite")
        return vals

    def tol(self) -> float:
        tol = float(self.get("tol", 1e-12))
        if not 1e-14 <= tol <= 1e-3:
            raise ValidationError("tol must lie in [1e-14, 1e-3]")
        return tol

    def nmax(self, default: int = 16) -> int:
        n = int(self.get("nmax", default))
        if not 1 <= n <= 100_000:
            raise ValidationError("nmax must lie in [1, 100000]")
        return n


def _pool():
    n = int(os.environ.get("DWT_THREADS", "0") or 0)
    return ThreadPoolExecutor(max_workers=n if n > 0 else min(8, os.cpu_count() or 1))


# -- commands ---------------------------------------------------------------------

def cmd_validate(cfg: Config):
    P = cfg.potential()
    if isinstance(P, GeneralDoubleWell):
        rep = validate_general(P)
        return rep.to_dict(), (EXIT_OK if rep.ok else EXIT_VALIDATION)
    # a reduced potential that constructs is valid
    return {"ok": True, "kind": "reduced", "items": []}, EXIT_OK


def cmd_reduce(cfg: Config):
    return potential_to_dict(cfg.reduced()), EXIT_OK


def cmd_solve(cfg: Config):
    R = cfg.reduced()
    nmax = cfg.nmax()
    tol = cfg.tol()
    words = list(cfg.get("words", ["0", "1", "01", "10"]))

    def one(beta):
        sp = solve_lambda(R, beta, tol)
        tab = eigenfunction_table(R, sp, nmax)
        V = subaction_table(R, sp, tab)
        out = sp.to_dict()
        out["logphi0"] = tab.logphi0.tolist()
        out["logphi1"] = tab.logphi1.tolist()
        out["logphi_fix"] = [tab.logphi_fix0, tab.logphi_fix1]
        out["mu"] = {w: gibbs_cylinder(R, sp, tab, w) for w in words}
        out["V"] = V.to_dict()
        return out

    with _pool() as ex:
        rows = list(ex.map(one, cfg.betas()))
    return {"results": rows}, EXIT_OK


def _sweep_row(R, beta, tol):
    sp = solve_lambda(R, beta, tol)
    if not sp.converged:
        raise NumericFailure(f"characteristic equation not solved at beta={beta}")
    return {"beta": beta, "loglam1": sp.loglam1, "mu0": sp.mu0, "mu1": sp.mu1,
            "logF0": sp.logF0, "logF1": sp.logF1, "logFt0": sp.logFt0, "logFt1": sp.logFt1,
            "log_mu_ratio": sp.log_mu_ratio}


def cmd_sweep(cfg: Config):
    R = cfg.reduced()
    tol = cfg.tol()
    betas = cfg.betas()
    with _pool() as ex:
        rows = list(ex.map(lambda b: _sweep_row(R, b, tol), betas))
    slopes = {}
    if len(rows) >= 2:
        b = [r["beta"] for r in rows]
        for key, col in (("lam1", "loglam1"), ("F0", "logF0"), ("F1", "logF1"),
                         ("Ft0", "logFt0"), ("Ft1", "logFt1"), ("mu_ratio", "log_mu_ratio")):
            slopes[key] = fit_rate(b, [r[col] for r in rows])
    prof = profile(R)
    side = {"fitted": slopes, "predicted": prof.rates, "regime": prof.regime}
    return {"rows": rows, "slopes": side}, EXIT_OK


def cmd_classify(cfg: Config):
    R = cfg.reduced()
    out = profile(R).to_dict()
    out.update(Hmin0=R.Hmin0, Hmin1=R.Hmin1, Hinf0=R.Hinf0, Hinf1=R.Hinf1)
    return out, EXIT_OK


def cmd_barrier(cfg: Config):
    R = cfg.reduced()
    out = barrier(R, cfg.nmax()).to_dict()
    ident = corollary_identities(R)
    prof = profile(R)
    ident["gamma"] = prof.gamma
    ident["flag_matches_regime"] = ident["nonselection"] == (prof.gamma == 0.0)
    out["corollary"] = ident
    return out, EXIT_OK


def cmd_subaction(cfg: Config):
    R = cfg.reduced()
    nmax = max(cfg.nmax(), R.head_length + 2)
    beta = float(cfg.get("beta", 200.0))
    prof = profile(R)
    sp = solve_lambda(R, beta, cfg.tol())
    Vb = subaction_table(R, sp, eigenfunction_table(R, sp, nmax))
    Vinf = limit_subaction(R, prof, nmax)
    m0, m1 = extrapolated_mather_values(R, tuple(cfg.get("extrapolation_betas", (100.0, 200.0))))
    LO = solve_calibrated(R, boundary_table(R, m0, m1, nmax))
    rep = representation_formula(R, LO.vFix0, LO.vFix1, nmax)
    return {
        "beta": beta,
        "V_beta": Vb.to_dict(),
        "V_inf": Vinf.to_dict(),
        "lax_oleinik": LO.to_dict(),
        "mather_values": [m0, m1],
        "dist_V_beta_V_inf": Vb.sup_distance(Vinf),
        "dist_lax_oleinik_V_inf": LO.sup_distance(Vinf),
        "dist_representation_lax_oleinik": rep.sup_distance(LO),
        "subaction_defect": subaction_defect(R, LO),
    }, EXIT_OK


def all_words(max_len: int) -> list[str]:
    return [format(i, f"0{L}b") for L in range(1, max_len + 1) for i in range(2 ** L)]


def cmd_oracle_check(cfg: Config):
    R = cfg.reduced()
    depth = int(cfg.get("depth", 8))
    betas = cfg.betas() if any(k in cfg for k in ("betas", "beta_range", "beta")) else [1, 5, 10, 20]
    words = all_words(int(cfg.get("max_word_len", 6)))
    lam_tol = float(cfg.get("lam_rtol", 1e-9))
    mu_tol = float(cfg.get("mu_atol", 1e-8))
    T = truncate(R, depth)

    def one(beta):
        res, mus = transfer_matrix_gibbs(T, beta, words)
        sp = solve_lambda(T.reduced, beta)
        tab = eigenfunction_table(T.reduced, sp, 1)
        lam_err = abs(res.lam_minus_1 / sp.lam_minus_1 - 1.0)
        mu_err = max(abs(gibbs_cylinder(T.reduced, sp, tab, w) - mus[w]) for w in words)
        return {"beta": beta, "lam1_oracle": res.lam_minus_1, "lam1_series": sp.lam_minus_1,
                "lam1_rel_err": lam_err, "mu_max_abs_err": mu_err,
                "passed": lam_err <= lam_tol and mu_err <= mu_tol}

    with _pool() as ex:
        rows = list(ex.map(one, betas))
    ok = all(r["passed"] for r in rows)
    return {"depth": depth, "rows": rows, "passed": ok}, (EXIT_OK if ok else EXIT_NUMERIC)


def cmd_nonselect(cfg: Config):
    if "schedule" in cfg:
        params = StageParams.from_dict(cfg.load_json_ref("schedule"))
    else:
        params = desk_schedule(**cfg.get("desk", {}))
    th = Thresholds(**cfg.get("thresholds", {}))
    report = check_rules(params, th)
    built = build_example(params)
    if built.astronomical:
        return {"rules": report.to_dict(), "astronomical": True, "reasons": built.reasons,
                "rows": []}, EXIT_OK
    with _pool() as ex:
        rows = oscillation_experiment(params, cfg.get("stages"),
                                      float(cfg.get("max_bracket", 0.1)), mapper=ex.map)
    return {"rules": report.to_dict(), "astronomical": False, "rows": rows}, EXIT_OK


def _substitute(obj, s, t):
    if isinstance(obj, str):
        if obj in ("s", "t"):
            return s if obj == "s" else t
        raise ValidationError(f"unknown placeholder {obj!r} in family template")
    if isinstance(obj, dict):
        return {k: (v if k == "kind" else _substitute(v, s, t)) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_substitute(v, s, t) for v in obj]
    return obj


def _axis(axis) -> list[float]:
    if isinstance(axis, dict):
        return np.linspace(axis["start"], axis["stop"], int(axis["num"])).tolist()
    return [float(x) for x in axis]


def cmd_phase_grid(cfg: Config):
    template = cfg.load_json_ref("family")

    def family(s, t):
        return potential_from_dict(_substitute(template, s, t))

    with _pool() as ex:
        rows = phase_grid(family, _axis(cfg["s"]), _axis(cfg["t"]), mapper=ex.map)
    return {"rows": rows}, EXIT_OK


COMMANDS = {
    "validate": (cmd_validate, None),
    "reduce": (cmd_reduce, None),
    "solve": (cmd_solve, None),
    "sweep": (cmd_sweep, SWEEP_COLUMNS),
    "classify": (cmd_classify, None),
    "barrier": (cmd_barrier, None),
    "subaction": (cmd_subaction, None),
    "oracle-check": (cmd_oracle_check, None),
    "nonselect": (cmd_nonselect, NONSELECT_COLUMNS),
    "phase-grid": (cmd_phase_grid, GRID_COLUMNS),
}


# -- output -----------------------------------------------------------------------

def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


def _csv_cell(v):
    return "" if v is None else v


def render(data: dict, fmt: str, columns) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    rows = data.get("rows") if columns else None
    if rows is None and "results" in data:
        rows, columns = data["results"], SWEEP_COLUMNS
    if rows is not None:
        w.writerow(columns)
        for r in rows:
            w.writerow([_csv_cell(r.get(c)) for c in columns])
    else:
        w.writerow(["key", "value"])
        for k, v in _flatten(data):
            w.writerow([k, _csv_cell(v)])
    return buf.getvalue()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dwt", description="Gibbs measures of double-well potentials.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="JSON config file")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="output format")
    p.add_argument("--version", action="version", version=f"dwt {__version__}")
    return p


def run(command: str, config_path, out=None, fmt=None) -> int:
    func, columns = COMMANDS[command]
    try:
        path = Path(config_path)
        with open(path) as fh:
            cfg = Config(json.load(fh), path.parent)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"dwt: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    fmt = fmt or ("csv" if columns else "json")
    try:
        data, code = func(cfg)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"dwt: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValidationError as exc:
        print(f"dwt: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericFailure, FloatingPointError, OverflowError) as exc:
        print(f"dwt: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (KeyError, TypeError, ValueError) as exc:
        print(f"dwt: invalid input: {exc!r}", file=sys.stderr)
        return EXIT_VALIDATION
    text = render(data, fmt, columns)
    try:
        if out:
            out = Path(out)
            out.write_text(text)
            if command == "sweep":
                out.with_suffix(out.suffix + ".slopes.json").write_text(
                    json.dumps(data["slopes"], indent=2) + "\n")
            meta = {"command": command, "config": str(path), "format": fmt, "exit": code,
                    "version": __version__,
                    "created": time.strftime("%Y-%m-%dT%H:%M:%S%z")}
            out.with_suffix(out.suffix + ".meta.json").write_text(json.dumps(meta, indent=2))
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"dwt: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ValidationError as exc:
        print(f"dwt: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return run(args.command, args.config, args.out, args.format)


if __name__ == "__main__":
    sys.exit(main())
