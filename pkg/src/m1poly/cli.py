"""Command line front end: ``m1poly <eval|gram|convcheck|coupling>``.

Exit codes: 0 when every entry passes, 1 when some residual exceeds its
tolerance, 2 for usage or parameter errors. Reports are JSON (or a flat CSV
projection of the entries) and contain no timestamps, so a fixed seed gives
byte-identical output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np

from . import __version__
from .coupling import IrrepLabel, ThreeFoldLabels, cg_matrix, racah_matrix, racah_params
from .errors import M1PolyError
from .families import (BannaiItoParams, BigJacobiParams, ChiharaParams, DualHahnParams,
                       bannai_ito_eval, bannai_ito_table, bi_ortho, bigjacobi_eval,
                       chihara_eval, dualhahn_eval, dualhahn_ortho, dualhahn_table)
from .identities import (Sampler, bilinear_genfun_residual, conv1_inverse_residual,
                         conv1_residual, conv2_residual)
from .quadrature import QuadConfig, bigjacobi_expected_gram, bigjacobi_gram, chihara_gram

FAMILIES = ("chihara", "big-jacobi", "dual-hahn", "bannai-ito")
IDENTITIES = ("conv1", "conv1-inverse", "conv2", "conv2-inverse", "bilinear")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_TOL = {
    "eval": 1e-10, "gram-discrete": 1e-10, "gram-continuous": 1e-8, "coupling": 1e-10,
    "conv1": 1e-9, "conv1-inverse": 1e-9, "conv2": 1e-8, "conv2-inverse": 1e-8, "bilinear": 1e-7,
}
DEFAULT_NMAX = {"eval": 6, "gram": 6, "coupling": 6, "conv1": 8, "conv1-inverse": 8,
                "conv2": 5, "conv2-inverse": 5, "bilinear": 40}
DEFAULT_DRAWS = {"conv1": 50, "conv1-inverse": 50, "conv2": 30, "conv2-inverse": 30,
                 "bilinear": 30}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    identity: str | None = None
    params: dict[str, float] = field(default_factory=dict)
    nmax: int | None = None
    draws: int | None = None
    seed: int = 0
    tol: float | None = None
    format: str = "json"
    out: str | None = None


def parse_params(text: str | None) -> dict[str, float]:
    out: dict[str, float] = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} is not of the form key=value")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"parameter {key.strip()!r} has non-numeric value {value!r}") from None
    return out


def _need(params: dict[str, float], *keys: str, defaults: dict[str, float] | None = None):
    defaults = defaults or {}
    missing = [k for k in keys if k not in params and k not in defaults]
    if missing:
        raise UsageError(f"missing parameter(s): {', '.join(missing)}")
    return [params.get(k, defaults.get(k)) for k in keys]


def _int_param(params, key, default=None) -> int:
    v = params.get(key, default)
    if v is None:
        raise UsageError(f"missing parameter: {key}")
    if float(v) != int(v) or v < 0:
        raise UsageError(f"parameter {key} must be a nonnegative integer, got {v}")
    return int(v)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _family_params(cfg: RunConfig):
    f, p = cfg.family, cfg.params
    if f == "chihara":
        mu, gamma = _need(p, "mu", "gamma")
        return ChiharaParams(mu, gamma)
    if f == "big-jacobi":
        a, b, c = _need(p, "a", "b", "c")
        return BigJacobiParams(a, b, c)
    if f == "dual-hahn":
        eta, xi = _need(p, "eta", "xi")
        return DualHahnParams(eta, xi, _int_param(p, "N"))
    if f == "bannai-ito":
        return BannaiItoParams(*_need(p, "rho1", "rho2", "r1", "r2"))
    raise UsageError(f"--family must be one of {', '.join(FAMILIES)}")


# ------------------------------------------------------------------ commands

def cmd_eval(cfg: RunConfig) -> list[dict[str, Any]]:
    p = _family_params(cfg)
    x = cfg.params.get("x")
    if x is None:
        raise UsageError("eval needs the evaluation point x in --params")
    evaluator: Callable = {"chihara": chihara_eval, "big-jacobi": bigjacobi_eval,
                           "dual-hahn": dualhahn_eval, "bannai-ito": bannai_ito_eval}[cfg.family]
    rec_all = [float(evaluator(n, x, p, "recurrence")) for n in range(cfg.nmax + 1)]
    entries = []
    for n, rec in enumerate(rec_all):
        closed = float(evaluator(n, x, p, "closed"))
        delta = _rel(rec, closed)
        # round-off scale of the recurrence step producing P_n; at an exact
        # zero of P_n the relative delta is meaningless and this takes over
        scale = max(1.0, abs(x)) * max((abs(v) for v in rec_all[:n]), default=1.0)
        abs_delta = abs(rec - closed)
        entries.append({"n": n, "x": x, "recurrence": rec, "closed": closed,
                        "rel_delta": delta, "abs_delta": abs_delta, "scale": scale,
                        "passed": bool(delta <= cfg.tol or abs_delta <= cfg.tol * scale)})
    return entries


def _gram_entries(G: np.ndarray, expected: np.ndarray, tol: float) -> list[dict[str, Any]]:
    entries = []
    diag = np.sqrt(np.abs(np.diag(expected)))
    for n in range(G.shape[0]):
        for m in range(G.shape[1]):
            dev = abs(G[n, m] - expected[n, m]) / (diag[n] * diag[m])
            entries.append({"n": n, "m": m, "value": float(G[n, m]),
                            "expected": float(expected[n, m]), "deviation": float(dev),
                            "passed": bool(dev <= tol)})
    return entries


def cmd_gram(cfg: RunConfig) -> list[dict[str, Any]]:
    p = _family_params(cfg)
    if cfg.family == "chihara":
        G = chihara_gram(cfg.nmax, p, QuadConfig())
        return _gram_entries(G, np.eye(cfg.nmax + 1), cfg.tol)
    if cfg.family == "big-jacobi":
        G = bigjacobi_gram(cfg.nmax, p, QuadConfig())
        return _gram_entries(G, bigjacobi_expected_gram(cfg.nmax, p), cfg.tol)
    if cfg.family == "dual-hahn":
        data = dualhahn_ortho(p)
        R = dualhahn_table(p.N, data.points, p.eta, p.xi, p.N)
    else:
        N = _int_param(cfg.params, "N")
        data = bi_ortho(p, N)
        R = bannai_ito_table(N, data.points, p)
    return _gram_entries((R * data.weights) @ R.T, np.diag(data.norms), cfg.tol)


def _draw_entry(draw: int, worst, labels) -> dict[str, Any]:
    entry = {"draw": draw, "labels": labels}
    entry.update(worst.to_dict())
    return entry


def cmd_convcheck(cfg: RunConfig) -> tuple[list[dict[str, Any]], int]:
    ident = cfg.identity
    if ident not in IDENTITIES:
        raise UsageError(f"--identity must be one of {', '.join(IDENTITIES)}")
    sampler = Sampler(cfg.seed)
    fixed = cfg.params
    entries = []
    for d in range(cfg.draws):
        if ident in ("conv1", "conv1-inverse"):
            r1, r2 = sampler.irreps(2)
            pt = sampler.point2()
            if ident == "conv1":
                fn = lambda a, b: conv1_residual(a, b, pt, r1, r2, cfg.tol, cfg.seed)
                keys = ("N", "j")
            else:
                fn = lambda a, b: conv1_inverse_residual(a, b, pt, r1, r2, cfg.tol, cfg.seed)
                keys = ("n1", "n2")
            if keys[0] in fixed or keys[1] in fixed:
                grid = [(_int_param(fixed, keys[0], 0), _int_param(fixed, keys[1], 0))]
            else:
                grid = [(T - b, b) for T in range(cfg.nmax + 1) for b in range(T + 1)]
            reports = [(fn(a, b), {keys[0]: a, keys[1]: b}) for a, b in grid]
        elif ident in ("conv2", "conv2-inverse"):
            reps = sampler.irreps(3)
            pt = sampler.point3()
            direction = "forward" if ident == "conv2" else "inverse"
            if "j123" in fixed:
                J = _int_param(fixed, "j123")
                key = "j12" if direction == "forward" else "j23"
                js = [_int_param(fixed, key, 0)] if key in fixed else range(J + 1)
                grid = [(J, a) for a in js]
            else:
                grid = [(J, a) for J in range(cfg.nmax + 1) for a in range(J + 1)]
            reports = []
            for J, a in grid:
                labels = ThreeFoldLabels.from_independent(a, a, J)
                reports.append((conv2_residual(labels, pt, reps, direction, cfg.tol, cfg.seed),
                                {"j123": J, "j12" if direction == "forward" else "j23": a}))
        else:
            r1, r2 = sampler.irreps(2)
            pt = sampler.point2(lam_max=(2.0, 3.0))
            z1, z2 = sampler.z(), sampler.z()
            reports = [(bilinear_genfun_residual(pt, z1, z2, r1, r2, cfg.nmax, cfg.tol, cfg.seed),
                        {"jmax": cfg.nmax})]
        worst, labels = max(reports, key=lambda r: (not r[0].passed, r[0].rel_residual))
        entries.append(_draw_entry(d, worst, labels))
    return entries, sampler.rejections


def cmd_coupling(cfg: RunConfig) -> list[dict[str, Any]]:
    p = cfg.params
    mu1, mu2 = _need(p, "mu1", "mu2")
    eps1, eps2, eps3 = (int(p.get(k, 1)) for k in ("eps1", "eps2", "eps3"))
    r1, r2 = IrrepLabel(mu1, eps1), IrrepLabel(mu2, eps2)
    entries = []
    for total in range(cfg.nmax + 1):
        M = cg_matrix(total, r1, r2)
        dev = float(np.abs(M @ M.T - np.eye(total + 1)).max())
        entries.append({"kind": "cg", "total": total, "matrix": M.tolist(),
                        "deviation": dev, "passed": dev <= cfg.tol})
    if "mu3" in p:
        mu3 = p["mu3"]
        IrrepLabel(mu3, eps3)
        for J in range(cfg.nmax + 1):
            R = racah_matrix(J, mu1, mu2, mu3, eps3)
            dev = float(np.abs(R @ R.T - np.eye(J + 1)).max())
            bp = racah_params(mu1, mu2, mu3, J)
            trunc = (bp.r2 - bp.rho1) if J % 2 == 0 else -(bp.rho1 + bp.rho2)
            entries.append({"kind": "racah", "j123": J, "matrix": R.tolist(), "deviation": dev,
                            "truncation_defect": abs(trunc - (J + 1) / 2),
                            "passed": dev <= cfg.tol})
    return entries


# ------------------------------------------------------------------- report

def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _residual_of(entry: dict[str, Any]) -> float:
    if "rel_delta" in entry:
        return min(float(entry["rel_delta"]), float(entry["abs_delta"]) / float(entry["scale"]))
    for key in ("rel_residual", "rel_delta", "deviation"):
        if key in entry:
            return float(entry[key])
    return 0.0


def build_report(cfg: RunConfig, entries: list[dict[str, Any]], extra=None) -> dict[str, Any]:
    passed = sum(1 for e in entries if e["passed"])
    summary = {"count": len(entries), "passed": passed, "failed": len(entries) - passed,
               "max_residual": max((_residual_of(e) for e in entries), default=0.0)}
    summary.update(extra or {})
    return _clean({"version": __version__, "config": asdict(cfg), "entries": entries,
                   "summary": summary})


def _flatten(prefix: str, obj, out: dict[str, Any]):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(obj, list):
        out[prefix] = json.dumps(obj)
    else:
        out[prefix] = obj


def render(report: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    rows = []
    for e in report["entries"]:
        flat: dict[str, Any] = {}
        _flatten("", e, flat)
        rows.append(flat)
    fields: list[str] = []
    for r in rows:
        fields.extend(k for k in r if k not in fields)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="m1poly", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=("eval", "gram", "convcheck", "coupling"))
    ap.add_argument("--family", choices=FAMILIES)
    ap.add_argument("--identity", choices=IDENTITIES)
    ap.add_argument("--params", default="", help="comma separated key=value pairs")
    ap.add_argument("--nmax", type=int, help="degree bound, total, j123 bound or jmax")
    ap.add_argument("--draws", type=int, help="number of random draws (convcheck)")
    ap.add_argument("--seed", type=int, default=0, help="unsigned 64-bit seed")
    ap.add_argument("--tol", type=float, help="override the default tolerance")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--version", action="version", version=f"m1poly {__version__}")
    return ap


def resolve(args: argparse.Namespace) -> RunConfig:
    cmd = args.command
    if not 0 <= args.seed < 2 ** 64:
        raise UsageError("--seed must be an unsigned 64-bit integer")
    if cmd in ("eval", "gram") and args.family is None:
        raise UsageError(f"{cmd} needs --family")
    if cmd == "convcheck" and args.identity is None:
        raise UsageError("convcheck needs --identity")
    key = args.identity if cmd == "convcheck" else cmd
    if cmd == "gram":
        tol_key = "gram-continuous" if args.family in ("chihara", "big-jacobi") else "gram-discrete"
    else:
        tol_key = key
    cfg = RunConfig(
        command=cmd, family=args.family, identity=args.identity,
        params=parse_params(args.params),
        nmax=args.nmax if args.nmax is not None else DEFAULT_NMAX[key],
        draws=(args.draws if args.draws is not None else DEFAULT_DRAWS[key])
        if cmd == "convcheck" else None,
        seed=args.seed, tol=args.tol if args.tol is not None else DEFAULT_TOL[tol_key],
        format=args.format, out=args.out)
    if cfg.nmax < 0:
        raise UsageError("--nmax must be nonnegative")
    if cfg.draws is not None and cfg.draws < 1:
        raise UsageError("--draws must be positive")
    if not cfg.tol > 0:
        raise UsageError("--tol must be positive")
    return cfg


def run(cfg: RunConfig) -> dict[str, Any]:
    extra = None
    if cfg.command == "eval":
        entries = cmd_eval(cfg)
    elif cfg.command == "gram":
        entries = cmd_gram(cfg)
    elif cfg.command == "convcheck":
        entries, rejections = cmd_convcheck(cfg)
        extra = {"rejections": rejections}
    else:
        entries = cmd_coupling(cfg)
    return build_report(cfg, entries, extra)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        report = run(cfg)
    except (UsageError, M1PolyError, ValueError, ZeroDivisionError, ArithmeticError) as exc:
        print(f"m1poly: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(report, cfg.format)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["summary"]["failed"] == 0 else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
