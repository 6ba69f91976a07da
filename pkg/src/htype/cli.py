"""Command line interface: ``htype {algebra,spectrum,geodesic,plot,verify}``.

A run is described by one JSON config::

    {"n": 8, "m": 7, "p": 2, "generators": "builtin:octonion",
     "u": [...], "v0dot": [...], "u0dot": [...], "t0": 0, "t1": 1, "samples": 101}

``generators`` is ``builtin:octonion``, ``builtin:heisenberg``,
``builtin:quaternion``, ``builtin:clifford`` (constructed for the given n, m)
or inline matrices (a list of n x n lists, or a {"n", "m", "matrices"} object).
Command-line flags override config values.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .algebra import causal_type, make_algebra, Signature
from .clifford import (GeneratorSet, build_generators, hurwitz_radon, octonion_generators,
                       validate_generators)
from .errors import HTypeError, InvalidGenerators, ZeroCenterVelocity
from .geodesic import momentum, sample, solve_geodesic, speed_squared
from .oracle import IntegratorConfig, integrate_geodesic
from .spectral import classify_spectrum
from .svg import projection_svgs
from .verification import FAULTS, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INVALID = 0, 1, 2, 3
MOMENTUM_TOL = 1e-8
SPEED_TOL = 1e-9
ORACLE_TOL = 1e-6

DEFAULT_CONFIG = {"p": 1, "generators": "builtin:octonion"}


class ConfigError(Exception):
    pass


def _vector(text_or_list, size, what):
    if text_or_list is None:
        return None
    if isinstance(text_or_list, str):
        try:
            vals = [float(x) for x in text_or_list.replace(" ", "").split(",") if x]
        except ValueError as exc:
            raise ConfigError(f"{what}: cannot parse {text_or_list!r}") from exc
    else:
        vals = [float(x) for x in text_or_list]
    if len(vals) != size:
        raise ConfigError(f"{what}: expected {size} values, got {len(vals)}")
    return np.array(vals)


def load_config(args) -> dict:
    cfg = dict(DEFAULT_CONFIG)
    if args.config:
        try:
            cfg.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    for key in ("p", "u", "v0dot", "u0dot", "t0", "t1", "samples"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def generators_from_config(cfg: dict) -> GeneratorSet:
    spec = cfg.get("generators", "builtin:octonion")
    if isinstance(spec, str):
        if spec == "builtin:octonion":
            g = octonion_generators()
        elif spec == "builtin:heisenberg":
            g = build_generators(2, 1)
        elif spec == "builtin:quaternion":
            g = build_generators(4, 3)
        elif spec == "builtin:clifford":
            try:
                g = build_generators(int(cfg["n"]), int(cfg["m"]))
            except KeyError as exc:
                raise ConfigError("builtin:clifford needs n and m") from exc
        else:
            raise ConfigError(f"unknown generator source {spec!r}")
    else:
        doc = spec if isinstance(spec, dict) else {"matrices": spec}
        mats = np.asarray(doc["matrices"], dtype=float)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise ConfigError(f"inline generators must have shape (m, n, n), got {mats.shape}")
        g = GeneratorSet.from_json({"n": mats.shape[1], "m": mats.shape[0],
                                    "matrices": mats.tolist()})
    for key, actual in (("n", g.n), ("m", g.m)):
        if key in cfg and int(cfg[key]) != actual:
            raise ConfigError(f"config says {key}={cfg[key]} but generators give {key}={actual}")
    return g


def algebra_from_config(cfg: dict, seed: int):
    g = generators_from_config(cfg)
    report = validate_generators(g)
    if not report.passed:
        raise InvalidGenerators(report)
    return make_algebra(g, int(cfg.get("p", 0)), seed=seed)


def _emit(obj, out_dir, name):
    text = json.dumps(obj, indent=2, sort_keys=True)
    print(text)
    if out_dir:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        (Path(out_dir) / name).write_text(text + "\n")


def cmd_algebra(args, cfg) -> int:
    g = generators_from_config(cfg)
    report = validate_generators(g)
    p = int(cfg.get("p", 0))
    sig = Signature.of(g.n, p)
    rho = hurwitz_radon(g.n)
    doc = {"n": g.n, "m": g.m, "p": sig.p, "q": sig.q, "rho": rho,
           "admissible": g.m < rho, "validation": report.to_json()}
    if report.passed:
        alg = make_algebra(g, sig, seed=args.seed)
        doc["construction_residuals"] = alg.construction_residuals
    else:
        doc["violations"] = report.failed()
    _emit(doc, args.out, "algebra.json")
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_spectrum(args, cfg) -> int:
    alg = algebra_from_config(cfg, args.seed)
    u = _vector(cfg.get("u"), alg.m, "u")
    if u is None:
        u = np.random.default_rng(args.seed).normal(size=alg.m)
    sd = classify_spectrum(alg, u)
    doc = sd.to_json()
    doc["invariants_ok"] = sd.invariants_ok
    _emit(doc, args.out, "spectrum.json")
    return EXIT_OK if sd.invariants_ok else EXIT_FAIL


def _initial(cfg, alg, seed):
    rng = np.random.default_rng(seed)
    v0 = _vector(cfg.get("v0dot"), alg.n, "v0dot")
    u0 = _vector(cfg.get("u0dot"), alg.m, "u0dot")
    if v0 is None:
        v0 = rng.normal(size=alg.n)
    if u0 is None:
        u0 = rng.normal(size=alg.m)
    return v0, u0


def cmd_geodesic(args, cfg) -> int:
    alg = algebra_from_config(cfg, args.seed)
    v0, u0 = _initial(cfg, alg, args.seed)
    t0, t1 = float(cfg.get("t0", 0.0)), float(cfg.get("t1", 1.0))
    steps = int(cfg.get("samples", 101))
    sol = solve_geodesic(alg, v0, u0)
    tr = sample(sol, t0, t1, steps)
    mom = max(float(np.abs(momentum(alg, s, w) - u0).max(initial=0.0))
              for s, w in zip(tr.states, tr.velocities))
    speeds = [speed_squared(alg, w, s) for s, w in zip(tr.states, tr.velocities)]
    speed = float(np.ptp(speeds))
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "geodesic.csv"
    with open(path, "w", newline="") as fh:
        tr.to_csv(fh)
    summary = {"csv": str(path), "rows": len(tr), "causal": str(causal_type(alg.sig, v0)),
               "momentum_drift": mom, "speed_drift": speed}
    ok = mom <= MOMENTUM_TOL and speed <= SPEED_TOL
    if args.oracle_check:
        if t0 != 0.0:
            raise ConfigError("--oracle-check needs t0 = 0")
        per = args.oracle_steps // (steps - 1)
        orc = integrate_geodesic(alg, v0, u0, IntegratorConfig(per * (steps - 1), t1, steps))
        dev = max(float(np.abs(orc.V - tr.V).max()), float(np.abs(orc.U - tr.U).max()))
        summary["oracle_deviation"] = dev
        ok = ok and dev <= ORACLE_TOL
    summary["ok"] = ok
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_plot(args, cfg) -> int:
    alg = algebra_from_config(cfg, args.seed)
    v0, u0 = _initial(cfg, alg, args.seed)
    if not np.any(u0):
        raise ZeroCenterVelocity("plot needs a nonzero u0dot")
    sol = solve_geodesic(alg, v0, u0)
    files = projection_svgs(sol, float(cfg.get("t0", 0.0)), float(cfg.get("t1", 1.0)),
                            int(cfg.get("samples", 21)))
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out_dir / name).write_text(text)
        print(out_dir / name)
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    results = run_suite(seed=args.seed, fault=args.inject_fault)
    width = max(len(r.name) for r in results)
    for r in results:
        rel = ">" if r.lower_bound else "<="
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.max_violation:.3e} {rel} {r.tol:.0e}")
    ok = all(r.passed for r in results)
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "verify.json").write_text(
            json.dumps({"seed": args.seed, "passed": ok, "checks": [r.to_json() for r in results]},
                       indent=2) + "\n")
    print("all checks passed" if ok else f"{sum(not r.passed for r in results)} check(s) failed")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"algebra": cmd_algebra, "spectrum": cmd_spectrum, "geodesic": cmd_geodesic,
            "plot": cmd_plot, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run config")
    common.add_argument("--seed", type=int, default=0, help="seed for random defaults")
    common.add_argument("--out", help="output directory")
    common.add_argument("--p", type=int, help="index of the horizontal metric")

    ap = argparse.ArgumentParser(prog="htype", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("algebra", parents=[common], help="validate generators and report the algebra")
    sp = sub.add_parser("spectrum", parents=[common], help="classify the spectrum of eta j(u)")
    sp.add_argument("--u", help="comma separated center vector")
    for name in ("geodesic", "plot"):
        gp = sub.add_parser(name, parents=[common],
                            help="sample a geodesic to CSV" if name == "geodesic"
                            else "write SVG projections, one per block")
        gp.add_argument("--v0dot", help="comma separated initial horizontal velocity")
        gp.add_argument("--u0dot", help="comma separated initial vertical velocity")
        gp.add_argument("--t0", type=float)
        gp.add_argument("--t1", type=float)
        gp.add_argument("--samples", type=int)
        if name == "geodesic":
            gp.add_argument("--oracle-check", action="store_true",
                            help="compare against RK4 integration of the full system")
            gp.add_argument("--oracle-steps", type=int, default=100_000)
    vp = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    vp.add_argument("--inject-fault", choices=FAULTS, help="deliberately break one check")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](args, cfg)
    except InvalidGenerators as exc:
        print(f"error: invalid generators: {', '.join(exc.report.failed())}", file=sys.stderr)
        return EXIT_INVALID
    except ZeroCenterVelocity as exc:
        print(f"error: ZeroCenterVelocity: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, HTypeError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
