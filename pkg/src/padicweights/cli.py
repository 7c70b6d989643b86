"""Command line entry point: ``padicweights <command> [options]``.

Exit status: 0 when every requested check passes, 1 on a verification
failure (failures are written to stderr as JSON lines), 2 on a bad configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .characters import MultChar, characters_of_conductor
from .constants import load_constants
from .errors import PadicError

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)
    fmt: str = "json"
    workers: int = 1
    out: str | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls(**json.loads(text))


# --- parsing helpers -----------------------------------------------------------------------


def _char(spec: str) -> MultChar:
    try:
        return MultChar.parse(spec)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad character spec {spec!r}: {exc}") from exc


def _power(p: int, X: int, name: str) -> int:
    a, Y = 0, X
    while Y % p == 0:
        Y //= p
        a += 1
    if Y != 1:
        raise ConfigError(f"--{name} must be a power of p={p}")
    return a


def _complexes(text: str, count: int, name: str) -> tuple[complex, ...]:
    try:
        vals = tuple(complex(x.strip().replace(" ", "")) for x in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"--{name}: {exc}") from exc
    if len(vals) != count:
        raise ConfigError(f"--{name} needs {count} comma-separated values")
    return vals


def _chi_of_conductor(p: int, Q: int, parity_wanted: str) -> MultChar:
    from .dualweight import parity

    n = _power(p, Q, "Q")
    if n == 0:
        raise ConfigError("--Q must be at least p")
    want = 1 if parity_wanted == "even" else -1
    for c in characters_of_conductor(p, n):
        if parity(c) == want:
            return c
    raise ConfigError(f"no {parity_wanted} character of conductor {Q}")


# --- commands: each returns (records, failures) ----------------------------------------------


def cmd_gauss(o: dict):
    from .lfactors import gauss_sum, gauss_sum_brute

    chi = _char(o["chi"])
    if not chi.ramified:
        raise ConfigError("gauss needs a ramified character")
    xi = Fraction(o["xi"]) if o.get("xi") else Fraction(1, chi.conductor)
    g = gauss_sum(chi, xi)
    rec = {"chi": chi.spec(), "xi": str(xi), "re": g.real, "im": g.imag, "abs": abs(g),
           "expected_abs": chi.conductor ** -0.5 if g != 0 else 0.0}
    fails = []
    if o.get("brute"):
        b = gauss_sum_brute(chi, xi)
        rec["brute_err"] = abs(b - g)
        if rec["brute_err"] > 1e-10:
            fails.append({"check": "gauss-brute", **rec})
    return [rec], fails


def cmd_tate_check(o: dict):
    from .lfactors import random_tate_case, verify_tate

    rng = np.random.default_rng(o["seed"])
    recs, fails = [], []
    for i in range(o["cases"]):
        phi, chi, s = random_tate_case(rng, o["p"], o["max_n"])
        chk = verify_tate(phi, chi, s)
        rec = {"case": i, "chi": chi.spec(), "s_re": s.real, "s_im": s.imag, "residual": chk.residual}
        recs.append(rec)
        if chk.residual >= o["tol"]:
            fails.append({"check": "tate", **rec})
    return recs, fails


def cmd_rho(o: dict):
    from .dualweight import rho_uv_brute, rho_uv_fast

    p = o["p"]
    if o.get("chi"):
        chi = _char(o["chi"])
    elif o.get("Q"):
        chi = _chi_of_conductor(p, o["Q"], o["parity"])
    else:
        raise ConfigError("rho needs --chi or --Q")
    if chi.p != p:
        raise ConfigError("--chi prime differs from --p")
    if o.get("omega_trivial") == bool(o.get("omega")):
        raise ConfigError("give exactly one of --omega and --omega-trivial")
    omega = MultChar.trivial(p) if o.get("omega_trivial") else _char(o["omega"])
    a, b = _power(p, o["U"], "U"), _power(p, o["V"], "V")
    val = rho_uv_fast(chi, omega, a, b)
    rec = {"chi": chi.spec(), "omega": omega.spec(), "U": o["U"], "V": o["V"], "Q": chi.conductor,
           "re": val.real, "im": val.imag}
    fails = []
    if o.get("brute"):
        bv = rho_uv_brute(chi, omega, a, b)
        rec["brute_err"] = abs(bv - val)
        if rec["brute_err"] > 1e-9:
            fails.append({"check": "rho-brute", **rec})
    return [rec], fails


def cmd_dual_weight(o: dict):
    from .dualweight import classify_bounds, dual_weight, dual_weight_via_hsharp

    chi, omega = _char(o["chi"]), _char(o["omega"])
    if not chi.ramified:
        raise ConfigError("--chi must be ramified")
    rep = dual_weight(chi, omega)
    rec = rep.as_dict()
    ok, entry = classify_bounds(rep)
    rec["bound"] = entry
    fails = [] if ok else [{"check": "dual-weight-bound", **entry}]
    if o.get("oracle"):
        alt = dual_weight_via_hsharp(chi, omega)
        rec["oracle_err"] = abs(alt - rep.value)
        if rec["oracle_err"] > 1e-9:
            fails.append({"check": "dual-weight-oracle", "chi": chi.spec(), "omega": omega.spec(),
                          "err": rec["oracle_err"]})
    return [rec], fails


def cmd_atypical_scan(o: dict, workers: int):
    from .scans import atypical_scan, classify_summary

    chi = _char(o["chi"])
    if not chi.ramified:
        raise ConfigError("--chi must be ramified")
    exps = range(1, chi.n + 1) if o.get("omega_exps") is None else [int(x) for x in o["omega_exps"].split(",")]
    rows = atypical_scan(chi, exps, workers)
    summary = classify_summary(rows)
    fails = [] if summary["exceeds_subset_flagged"] else [{"check": "atypical-subset", **summary}]
    return rows, fails


def cmd_dfstar(o: dict):
    from .degenerate import d_f_star, n_alpha_weightnorm

    chi = _char(o["chi"])
    if not chi.ramified:
        raise ConfigError("--chi must be ramified")
    if o.get("alpha") is not None:
        rep = n_alpha_weightnorm(chi, o["alpha"], o["grid"])
        return [rep.as_dict()], []
    s = _complexes(o["s"], 3, "s")
    nu = _complexes(o["nu"], 2, "nu")
    try:
        ev = d_f_star(chi, s, nu, o["mode"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rec = ev.as_dict()
    fails = []
    if o.get("check"):
        other = d_f_star(chi, s, nu, "brute" if o["mode"] == "closed" else "closed")
        rel = abs(other.D_star - ev.D_star) / max(abs(ev.D_star), abs(other.D_star), 1e-6)
        rec["cross_rel_err"] = rel
        if rel >= 1e-6:
            fails.append({"check": "dfstar-cross", **rec})
    return [rec], fails


def cmd_verify_golden(o: dict, workers: int):
    from .scans import golden_rows

    rows = golden_rows(o["p"], o["max_cond_exp"], o["all_chars"], workers)
    tol = o["tol"]
    fails = [dict(check="golden-table", **r) for r in rows if r["err"] >= tol]
    return rows, fails


def cmd_bench(o: dict):
    from .scans import bench_fast_vs_brute

    rec = bench_fast_vs_brute(o["p"], o["n"], o["cases"], o["seed"])
    fails = []
    if rec["max_rel_err"] >= 1e-8:
        fails.append({"check": "bench-agreement", **rec})
    elif rec["speedup"] < o["min_speedup"]:
        fails.append({"check": "bench-speedup", **rec})
    return [rec], fails


# --- output -------------------------------------------------------------------------------------


def _tsv(records: list[dict]) -> str:
    if not records:
        return ""
    keys = []
    for r in records:
        keys += [k for k in r if k not in keys]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, delimiter="\t", lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in records:
        w.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})
    return buf.getvalue()


def render(records: list[dict], fmt: str, meta: dict) -> str:
    if fmt == "tsv":
        return _tsv(records)
    return json.dumps({"schema": SCHEMA_VERSION, "meta": meta, "records": records},
                      sort_keys=True, default=str) + "\n"


# --- argparse --------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padicweights", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--format", dest="fmt", choices=("json", "tsv"), default="json")
    common.add_argument("--out", default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gauss", parents=[common], help="Gauss sum G(chi, xi)")
    g.add_argument("--chi", required=True)
    g.add_argument("--xi", help="rational, default 1/C(chi)")
    g.add_argument("--brute", action="store_true")

    t = sub.add_parser("tate-check", parents=[common], help="random Tate functional equation checks")
    t.add_argument("--p", type=int, default=5)
    t.add_argument("--cases", type=int, default=200)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--max-n", type=int, default=2)
    t.add_argument("--tol", type=float, default=1e-8)

    r = sub.add_parser("rho", parents=[common], help="one dyadic piece rho_{U,V}")
    r.add_argument("--p", type=int, required=True)
    r.add_argument("--U", type=int, required=True)
    r.add_argument("--V", type=int, required=True)
    r.add_argument("--Q", type=int)
    r.add_argument("--chi")
    r.add_argument("--parity", choices=("even", "odd"), default="even",
                   help="with --Q: which character of that conductor to use")
    r.add_argument("--omega")
    r.add_argument("--omega-trivial", action="store_true")
    r.add_argument("--brute", action="store_true")

    d = sub.add_parser("dual-weight", parents=[common], help="h~(omega) with bound classification")
    d.add_argument("--chi", required=True)
    d.add_argument("--omega", required=True)
    d.add_argument("--oracle", action="store_true", help="also evaluate through h^sharp")

    a = sub.add_parser("atypical-scan", parents=[common], help="all omega of given conductors")
    a.add_argument("--chi", required=True)
    a.add_argument("--omega-exps", help="comma-separated conductor exponents, default 1..n")

    f = sub.add_parser("dfstar", parents=[common], help="normalized degenerate factor or its weight norm")
    f.add_argument("--chi", required=True)
    f.add_argument("--s", default="0,0,0")
    f.add_argument("--nu", default="0,0")
    f.add_argument("--mode", choices=("closed", "dyadic", "brute"), default="closed")
    f.add_argument("--check", action="store_true", help="cross-check against another mode")
    f.add_argument("--alpha", type=float, help="report the grid weight norm instead")
    f.add_argument("--grid", type=int, default=7)

    v = sub.add_parser("verify-appendix", parents=[common], help="golden table against brute force")
    v.add_argument("--p", type=int, required=True)
    v.add_argument("--max-cond-exp", type=int, default=3)
    v.add_argument("--all-chars", action="store_true")
    v.add_argument("--tol", type=float, default=1e-9)

    b = sub.add_parser("bench", parents=[common], help="coset evaluator vs brute force")
    b.add_argument("--p", type=int, default=5)
    b.add_argument("--n", type=int, default=4)
    b.add_argument("--cases", type=int, default=100)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--min-speedup", type=float, default=20.0)
    return ap


def _dispatch(cfg: RunConfig):
    o, w = cfg.options, cfg.workers
    table = {"gauss": cmd_gauss, "tate-check": cmd_tate_check, "rho": cmd_rho,
             "dual-weight": cmd_dual_weight, "dfstar": cmd_dfstar, "bench": cmd_bench}
    if cfg.command in table:
        return table[cfg.command](o)
    if cfg.command == "atypical-scan":
        return cmd_atypical_scan(o, w)
    if cfg.command == "verify-appendix":
        return cmd_verify_golden(o, w)
    raise ConfigError(f"unknown command {cfg.command}")


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if cfg.workers < 1:
        stderr.write(json.dumps({"error": "config", "message": "--workers must be >= 1"}) + "\n")
        return 2
    try:
        load_constants()
        records, failures = _dispatch(cfg)
    except (ConfigError, PadicError) as exc:
        stderr.write(json.dumps({"error": "config", "message": str(exc)}) + "\n")
        return 2
    meta = {"command": cfg.command, "options": cfg.options, "workers": cfg.workers,
            "zero_atol": load_constants()["zero_atol"]}
    text = render(records, cfg.fmt, meta)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    for f in failures:
        stderr.write(json.dumps(f, sort_keys=True, default=str) + "\n")
    return 1 if failures else 0


def config_from_args(argv=None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    fmt, workers, out = ns.pop("fmt"), ns.pop("workers"), ns.pop("out")
    return RunConfig(command, ns, fmt, workers, out)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
