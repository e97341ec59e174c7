"""Command-line surface: enumeration, integral evaluation, bound tables,
parameter scans, Monte-Carlo verification and the acceptance selfcheck.

Conventions shared by every subcommand:

  * an optional JSON config file (``--config``) supplies defaults; explicit
    flags override config values key by key;
  * outputs go to stdout or to ``--output PATH`` (a relative path is placed
    under ``$PAM_MOMENTS_OUTDIR`` when that variable is set);
  * floats are printed with 17 significant digits, so equal configs and
    seeds produce byte-identical files;
  * exit code 0 on success, 1 when a verification fails, 2 on usage errors.

CSV column orders (also documented in the README):

  gamma-scan:   H0, H, n, a, gamma_n
  bound-table:  t, p, series_value, envelope_value, C1, C2
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from fractions import Fraction

import numpy as np

from .errors import DomainError, SizeError, ValidationError
from .chaos_bounds import (
    FractionalParams,
    admissible_param_grid,
    fit_envelope_constants,
    gamma_n_matrix,
    log_chaos_series,
)
from .chaos_bounds import _envelope_exponent
from .initial_data import check_cond_mu0, j0 as eval_j0, measure_from_config
from .mc_verifier import verify_lemma32, verify_term_bound
from .path_combinatorics import (
    enumerate_exponent_vectors,
    expand_and_verify_identity,
    path_of,
)
from .simplex_integrals import SimplexIntegralSpec, brute_force, closed_form


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _resolve_output(path: str | None, stdout):
    if path is None:
        return stdout or sys.stdout, False
    outdir = os.environ.get("PAM_MOMENTS_OUTDIR")
    if outdir and not os.path.isabs(path):
        path = os.path.join(outdir, path)
    return open(path, "w"), True


def _merge_config(args: argparse.Namespace) -> dict:
    """Resolved config: file values overridden by explicitly set flags."""
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ValidationError("config file must contain a JSON object")
        cfg.update(loaded)
    for key, val in vars(args).items():
        if key in ("config", "func", "output") or val is None:
            continue
        cfg[key] = val
    return cfg


def _require(cfg: dict, key: str, cast):
    if key not in cfg:
        raise ValidationError(f"missing required option: {key}")
    try:
        return cast(cfg[key])
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad value for {key}: {cfg[key]!r} ({exc})") from exc


def _measure_of(cfg: dict):
    m = cfg.get("measure", {"type": "lebesgue", "c": 1.0})
    if isinstance(m, str):
        m = json.loads(m)
    return measure_from_config(m)


def _log_resolved(cfg: dict) -> None:
    print("config: " + json.dumps(cfg, sort_keys=True, default=str), file=sys.stderr)


def _cmd_paths(args, stdout) -> int:
    cfg = _merge_config(args)
    _log_resolved(cfg)
    n = _require(cfg, "n", int)
    out, close = _resolve_output(args.output, stdout)
    try:
        for a in enumerate_exponent_vectors(n):
            rec = {"n": n, "a": list(a), "path_heights": list(path_of(a).heights)}
            out.write(json.dumps(rec) + "\n")
    finally:
        if close:
            out.close()
    return 0


def _cmd_identity(args, stdout) -> int:
    cfg = _merge_config(args)
    _log_resolved(cfg)
    n = _require(cfg, "n", int)
    trials = int(cfg.get("trials", 100))
    rng = random.Random(int(cfg.get("seed", 0)))
    if "xs" in cfg:
        draws = [[Fraction(v) for v in str(cfg["xs"]).split(",")]]
    else:
        draws = [
            [Fraction(rng.randint(1, 12), rng.randint(1, 12)) for _ in range(n)]
            for _ in range(trials)
        ]
    failures = 0
    for xs in draws:
        lhs, rhs = expand_and_verify_identity(xs)
        if lhs != rhs:
            failures += 1
    out, close = _resolve_output(args.output, stdout)
    try:
        out.write(
            json.dumps({"n": n, "trials": len(draws), "failures": failures}) + "\n"
        )
    finally:
        if close:
            out.close()
    return 0 if failures == 0 else 1


def _cmd_gamma_scan(args, stdout) -> int:
    cfg = _merge_config(args)
    _log_resolved(cfg)
    n_max = int(cfg.get("n_max", 8))
    grid = admissible_param_grid(int(cfg.get("grid_size", 5)))
    out, close = _resolve_output(args.output, stdout)
    try:
        out.write("H0,H,n,a,gamma_n\n")
        for params in grid:
            for n in range(2, n_max + 1):
                vecs = enumerate_exponent_vectors(n)
                g = gamma_n_matrix(n, params)
                for a, gv in zip(vecs, g):
                    astr = "".join(str(v) for v in a)
                    out.write(
                        f"{_fmt(params.H0)},{_fmt(params.H)},{n},{astr},{_fmt(gv)}\n"
                    )
    finally:
        if close:
            out.close()
    return 0


def _cmd_dirichlet(args, stdout) -> int:
    cfg = _merge_config(args)
    _log_resolved(cfg)
    spec_cfg = cfg.get("spec")
    if isinstance(spec_cfg, str):
        spec_cfg = json.loads(spec_cfg)
    if not isinstance(spec_cfg, dict):
        raise ValidationError("missing required option: spec")
    spec = SimplexIntegralSpec(
        float(spec_cfg["t"]),
        tuple(float(v) for v in spec_cfg["alphas"]),
        tuple(float(v) for v in spec_cfg["betas"]),
    )
    value = closed_form(spec)
    record = {"t": spec.t, "alphas": list(spec.alphas), "betas": list(spec.betas),
              "closed_form": float(_fmt(value))}
    code = 0
    oracle = cfg.get("oracle")
    if oracle:
        rtol = float(cfg.get("rtol", 1e-6))
        method = {"quadrature": "nested-quadrature", "mc": "monte-carlo"}[oracle]
        res = brute_force(
            spec, method=method, rtol=rtol, seed=int(cfg.get("seed", 0))
        )
        rel = abs(res.estimate - value) / abs(value)
        record.update(
            oracle=oracle,
            oracle_estimate=float(_fmt(res.estimate)),
            oracle_error_bound=float(_fmt(res.error_bound)),
            rel_diff=float(_fmt(rel)),
        )
        tol = rtol if oracle == "quadrature" else max(
            rtol, 5.0 * res.error_bound / abs(value)
        )
        if rel > tol:
            code = 1
    out, close = _resolve_output(args.output, stdout)
    try:
        out.write(json.dumps(record) + "\n")
    finally:
        if close:
            out.close()
    return code


def _cmd_j0(args, stdout) -> int:
    cfg = _merge_config(args)
    _log_resolved(cfg)
    t = _require(cfg, "t", float)
    x = _require(cfg, "x", float)
    measure = _measure_of(cfg)
    rep = check_cond_mu0(measure)
    record = {
        "t": t,
        "x": x,
        "j0": float(_fmt(eval_j0(t, x, measure))),
        "cond_mu0_ok": rep.ok,
        "cond_mu0_values": [float(_fmt(v)) for v in rep.values],
    }
    out, close = _resolve_output(args.output, stdout)
    try:
        out.write(json.dumps(record) + "\n")
    finally:
        if close:
            out.close()
    return 0 if rep.ok else 1


def _cmd_bound_table(args, stdout) -> int:
    cfg = _merge_config(args)
    _log_resolved(cfg)
    params = FractionalParams(
        _require(cfg, "H0", float), _require(cfg, "H", float),
        float(cfg.get("b", 1.0)),
    )
    ps = cfg.get("p", "2")
    ts = cfg.get("t", "1,2,4,8")
    ps = _float_list(ps) if isinstance(ps, str) else [float(v) for v in np.atleast_1d(ps)]
    ts = _float_list(ts) if isinstance(ts, str) else [float(v) for v in np.atleast_1d(ts)]
    cc = float(cfg.get("C", 4.0))
    c1, c2 = fit_envelope_constants(
        params, C=cc, p_grid=tuple(ps), t_grid=tuple(ts)
    )
    out, close = _resolve_output(args.output, stdout)
    try:
        out.write("t,p,series_value,envelope_value,C1,C2\n")
        for t in ts:
            for p in ps:
                ls, _ = log_chaos_series(p, t, params, C=cc)
                env = math.log(c1) + c2 * _envelope_exponent(p, t, params) / p
                out.write(
                    f"{_fmt(t)},{_fmt(p)},{_fmt(math.exp(ls) if ls < 709 else math.inf)},"
                    f"{_fmt(math.exp(env) if env < 709 else math.inf)},"
                    f"{_fmt(c1)},{_fmt(c2)}\n"
                )
    finally:
        if close:
            out.close()
    return 0


def _cmd_mc_verify(args, stdout) -> int:
    cfg = _merge_config(args)
    _log_resolved(cfg)
    n = _require(cfg, "n", int)
    t = _require(cfg, "t", float)
    x = float(cfg.get("x", 0.0))
    params = FractionalParams(
        _require(cfg, "H0", float), _require(cfg, "H", float),
        float(cfg.get("b", 1.0)),
    )
    measure = _measure_of(cfg)
    samples = int(cfg.get("samples", 200_000))
    seed = int(cfg.get("seed", 0))
    workers = int(cfg.get("workers", 1))
    chk = verify_term_bound(n, t, x, measure, params, samples, seed, workers)
    cmp = verify_lemma32(
        n, t, x, measure, params,
        time_samples=int(cfg.get("time_samples", 10)),
        xi_samples=int(cfg.get("xi_samples", 4_000)),
        seed=seed, workers=workers,
    )
    report = {
        "config": {
            "n": n, "t": _fmt(t), "x": _fmt(x),
            "H0": _fmt(params.H0), "H": _fmt(params.H), "b": _fmt(params.b_H0),
            "measure": cfg.get("measure", {"type": "lebesgue", "c": 1.0}),
            "samples": samples, "seed": seed, "workers": workers,
        },
        "estimate": _fmt(chk.estimate.value),
        "stderr": _fmt(chk.estimate.stderr),
        "bound": _fmt(chk.bound),
        "minimal_b": _fmt(chk.minimal_b),
        "bound_passed": chk.passed,
        "spectral_majorant_passed": cmp.ok,
        "spectral_margins": [_fmt(v) for v in cmp.margins],
    }
    out, close = _resolve_output(args.output, stdout)
    try:
        out.write(json.dumps(report, sort_keys=True, default=str) + "\n")
    finally:
        if close:
            out.close()
    return 0 if chk.passed and cmp.ok else 1


def _cmd_selfcheck(args, stdout) -> int:
    from .acceptance import run_all

    out, close = _resolve_output(args.output, stdout)
    try:
        results = run_all(report=lambda line: out.write(line + "\n"))
    finally:
        if close:
            out.close()
    return 0 if all(r.ok for r in results) else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pam-moments",
        description="chaos-expansion moment bounds: enumeration, integrals, "
        "bound tables and Monte-Carlo verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--output", help="output path (default stdout)")

    p = sub.add_parser("paths", help="emit the exponent vectors / lattice paths")
    common(p)
    p.add_argument("--n", type=int)
    p.set_defaults(func=_cmd_paths)

    p = sub.add_parser("identity", help="check the product-expansion identity")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--xs", help="comma-separated rationals, e.g. 1/2,3,5/4")
    p.set_defaults(func=_cmd_identity)

    p = sub.add_parser("gamma-scan", help="CSV of gamma_n over the parameter grid")
    common(p)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--grid-size", dest="grid_size", type=int)
    p.set_defaults(func=_cmd_gamma_scan)

    p = sub.add_parser("dirichlet", help="evaluate a weighted simplex integral")
    common(p)
    p.add_argument("--spec", help='JSON {"t":..., "alphas":[...], "betas":[...]}')
    p.add_argument("--oracle", choices=("quadrature", "mc"))
    p.add_argument("--rtol", type=float)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_dirichlet)

    p = sub.add_parser("j0", help="deterministic part of the solution")
    common(p)
    p.add_argument("--t", type=float)
    p.add_argument("--x", type=float)
    p.add_argument("--measure", help='JSON, e.g. {"type": "dirac", "x0": 0.0}')
    p.set_defaults(func=_cmd_j0)

    p = sub.add_parser("bound-table", help="CSV of moment series and envelope")
    common(p)
    p.add_argument("--H0", type=float)
    p.add_argument("--H", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--C", type=float)
    p.add_argument("--p", help="comma-separated moment orders")
    p.add_argument("--t", help="comma-separated times")
    p.set_defaults(func=_cmd_bound_table)

    p = sub.add_parser("mc-verify", help="Monte-Carlo check of the chaos bounds")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=float)
    p.add_argument("--x", type=float)
    p.add_argument("--H0", type=float)
    p.add_argument("--H", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--measure", help='JSON, e.g. {"type": "dirac", "x0": 0.0}')
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_cmd_mc_verify)

    p = sub.add_parser("selfcheck", help="run the full acceptance suite")
    common(p)
    p.set_defaults(func=_cmd_selfcheck)

    return parser


def run(argv=None, stdout=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args, stdout)
    except (ValidationError, DomainError, SizeError, FileNotFoundError,
            json.JSONDecodeError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
