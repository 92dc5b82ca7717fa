"""Command-line front end.

One JSON config document per invocation (``--config FILE``); every value is
echoable with ``--print-config`` for provenance.  Randomness is always
seeded (``--seed``, default 42) and all outputs are deterministic: the same
config and build produce byte-identical CSVs.  ``--plot`` additionally
renders figures next to the delimited outputs.

Exit codes: 0 success, 1 config error, 2 convexity loss during a
simulation, 3 counterexample scan found no witness, 4 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import sys
from pathlib import Path

import numpy as np

from . import counterexample, curvature, flow, geometry, speeds

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_CONVEXITY = 2
EXIT_NO_WITNESS = 3
EXIT_VERIFY = 4

IDENTITY_THRESHOLD = 1e-8


class ConfigError(ValueError):
    pass


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config document must be a JSON object")
    return cfg


def _check_keys(cfg: dict, allowed: set, context: str) -> None:
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown {context} config keys: {sorted(unknown)}")


def _require(cfg: dict, key: str, context: str):
    if key not in cfg:
        raise ConfigError(f"missing required {context} config key {key!r}")
    return cfg[key]


def _parse_speed(text) -> speeds.SpeedFunction:
    try:
        return speeds.parse_speed(str(text))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _write_json(doc: dict, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# simulate

_SIMULATE_KEYS = {"initial", "speed", "n", "cfl_safety", "stop_inradius_fraction",
                  "max_steps", "record_every", "rescale_mode", "t_end"}
_INITIAL_KEYS = {"kind", "radius", "a", "b", "path"}


def _build_initial(cfg: dict, n: int) -> geometry.SupportProfile:
    if not isinstance(cfg, dict):
        raise ConfigError("'initial' must be an object")
    _check_keys(cfg, _INITIAL_KEYS, "initial-body")
    kind = _require(cfg, "kind", "initial-body")
    try:
        if kind == "ball":
            return geometry.make_ball(float(cfg.get("radius", 1.0)), n)
        if kind == "spheroid":
            return geometry.make_spheroid(float(_require(cfg, "a", "spheroid")),
                                          float(_require(cfg, "b", "spheroid")), n)
        if kind == "profile_file":
            prof = geometry.read_revolution_csv(_require(cfg, "path", "profile-file"))
            return geometry.profile_to_support(prof, n)
    except (ValueError, OSError) as exc:
        raise ConfigError(f"invalid initial body: {exc}") from exc
    raise ConfigError(f"unknown initial body kind {kind!r}")


def _simulate_one(cfg: dict, out: Path, plot: bool) -> int:
    _check_keys(cfg, _SIMULATE_KEYS, "simulate")
    speed = _parse_speed(_require(cfg, "speed", "simulate"))
    try:
        fc = flow.FlowConfig(
            n=int(cfg.get("n", 256)),
            cfl_safety=float(cfg.get("cfl_safety", 0.4)),
            stop_inradius_fraction=float(cfg.get("stop_inradius_fraction", 0.05)),
            max_steps=int(cfg.get("max_steps", 2_000_000)),
            record_every=int(cfg.get("record_every", 25)),
            rescale_mode=str(cfg.get("rescale_mode", "none")),
            t_end=None if cfg.get("t_end") is None else float(cfg["t_end"]),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid flow configuration: {exc}") from exc
    initial = _build_initial(_require(cfg, "initial", "simulate"), fc.n)

    result = flow.run(initial, speed, fc)
    out.mkdir(parents=True, exist_ok=True)
    flow.write_timeseries_csv(result.records, out / "series.csv")
    geometry.write_support_csv(result.final_state.profile, out / "final_state.csv")

    if fc.rescale_mode != "none" and not result.stop_reason.startswith("convexity"):
        final = result.final_state
        diag = geometry.inradius_circumradius(final.profile)
        if fc.rescale_mode == "by_inradius":
            center = 0.5 * (diag.incenter + diag.circumcenter)
            scaled = geometry.SupportProfile(
                final.profile.theta,
                (final.profile.s - center * np.cos(final.profile.theta)) / diag.r_minus)
        else:
            T = flow.estimate_extinction(result.records, speed.alpha)
            scaled = flow.rescale(final, diag.incenter, T, speed.alpha)
        geometry.write_support_csv(scaled, out / "rescaled_final.csv")

    if plot:
        from . import plotting
        plotting.plot_monitor_series(result.records, out / "series.png")
        plotting.plot_support_profile(result.final_state.profile,
                                      out / "final_state.png",
                                      title=f"final state ({speed.name})")
    print(f"simulate: {len(result.records)} records, stop: {result.stop_reason}")
    if result.stop_reason.startswith("convexity"):
        return EXIT_CONVEXITY
    return EXIT_OK


def cmd_simulate(cfg: dict, out: Path, seed: int, jobs: int, plot: bool) -> int:
    if "sweep" in cfg:
        _check_keys(cfg, {"sweep"}, "simulate-sweep")
        entries = cfg["sweep"]
        if not isinstance(entries, list) or not entries:
            raise ConfigError("'sweep' must be a non-empty list of simulate configs")
        for entry in entries:
            _check_keys(entry, _SIMULATE_KEYS | {"name"}, "simulate")
        args = [(dict((k, v) for k, v in e.items() if k != "name"),
                 out / str(e.get("name", f"run{i:03d}")), plot)
                for i, e in enumerate(entries)]
        if jobs > 1:
            with multiprocessing.Pool(jobs) as pool:
                codes = pool.starmap(_simulate_one, args)
        else:
            codes = [_simulate_one(*a) for a in args]
        return max(codes)
    return _simulate_one(cfg, out, plot)


# ---------------------------------------------------------------------------
# build-counterexample

_COUNTEREXAMPLE_KEYS = {"r1", "u0", "U", "speed", "m", "quad_tol"}


def cmd_build_counterexample(cfg: dict, out: Path, seed: int, plot: bool) -> int:
    _check_keys(cfg, _COUNTEREXAMPLE_KEYS, "build-counterexample")
    speed = _parse_speed(_require(cfg, "speed", "build-counterexample"))
    if speed.alpha <= 1.0:
        raise ConfigError("counterexample construction requires a speed of degree > 1")
    try:
        spec = counterexample.PinchProfileSpec(
            r1=float(_require(cfg, "r1", "build-counterexample")),
            u0=float(_require(cfg, "u0", "build-counterexample")),
            U=float(cfg.get("U", 1.0)),
            quad_tol=float(cfg.get("quad_tol", 1e-10)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    m = int(cfg.get("m", 4096))

    profile = counterexample.build_profile(spec, m)
    witness = counterexample.find_pinch_violation(speed, spec, m)
    annulus = profile.u[1:-1] >= spec.u0
    max_up = float(np.max(np.abs(profile.uprime[1:-1][annulus])))

    out.mkdir(parents=True, exist_ok=True)
    geometry.write_revolution_csv(profile, out / "profile.csv")
    summary = {
        "L": profile.half_length,
        "r1": spec.r1,
        "u0": spec.u0,
        "U": spec.U,
        "speed": speed.name,
        "alpha": speed.alpha,
        "max_uprime_on_annulus": max_up,
        "witness": None if witness is None else {
            "x": witness.x, "u": witness.u,
            "uprime": witness.uprime, "dgdt": witness.dgdt,
        },
    }
    _write_json(summary, out / "summary.json")
    if plot:
        from . import plotting
        plotting.plot_revolution_profile(profile, out / "profile.png",
                                         title=f"r1={spec.r1:g}, u0={spec.u0:g}")
    if witness is None:
        print("build-counterexample: no pinching-violation witness")
        return EXIT_NO_WITNESS
    print(f"build-counterexample: witness at x={witness.x:.6g} "
          f"(u'={witness.uprime:.6g}, dG/dt={witness.dgdt:.6g})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify-identities

_VERIFY_KEYS = {"speeds", "samples"}


def cmd_verify_identities(cfg: dict, out: Path, seed: int) -> int:
    _check_keys(cfg, _VERIFY_KEYS, "verify-identities")
    names = _require(cfg, "speeds", "verify-identities")
    if not isinstance(names, list) or not names:
        raise ConfigError("'speeds' must be a non-empty list")
    samples = int(cfg.get("samples", 10_000))
    results = []
    worst = 0.0
    for name in names:
        speed = _parse_speed(name)
        report = speeds.check_homogeneity(speed, samples=samples, seed=seed)
        results.append(report)
        worst = max(worst, report["euler_first_max"], report["euler_second_max"])
    ok = worst < IDENTITY_THRESHOLD
    out.mkdir(parents=True, exist_ok=True)
    _write_json({"seed": seed, "samples": samples,
                 "threshold": IDENTITY_THRESHOLD, "max_residual": worst,
                 "ok": ok, "results": results}, out / "identities.json")
    print(f"verify-identities: max residual {worst:.3e} "
          f"({'ok' if ok else 'FAILED'})")
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# qform-scan

_QFORM_KEYS = {"speed", "r_min", "r_max", "r_step"}


def cmd_qform_scan(cfg: dict, out: Path, seed: int, plot: bool) -> int:
    _check_keys(cfg, _QFORM_KEYS, "qform-scan")
    speed = _parse_speed(_require(cfg, "speed", "qform-scan"))
    r_min = float(cfg.get("r_min", 1.01))
    r_max = float(cfg.get("r_max", 6.0))
    r_step = float(cfg.get("r_step", 0.01))
    if not (1.0 < r_min < r_max) or r_step <= 0.0:
        raise ConfigError("need 1 < r_min < r_max and r_step > 0")
    ratios = np.arange(r_min, r_max + 0.5 * r_step, r_step)

    rows = []
    for r in ratios:
        kappa = curvature.PrincipalCurvatures(1.0, float(r))
        if speed.alpha > 1.0:
            c1, c2 = curvature.q_form_degree_alpha_coefficients(speed, kappa)
            q = c1 + c2
        else:
            q = curvature.q_form_degree_one(speed, kappa, 1.0, 1.0)
            c1 = c2 = 0.5 * q
        rows.append((float(r), c1, c2, q))

    out.mkdir(parents=True, exist_ok=True)
    with open(out / "qform_scan.csv", "w") as fh:
        fh.write("r,c1,c2,q\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")

    c2v = np.array([row[2] for row in rows])
    report = {"speed": speed.name, "alpha": speed.alpha,
              "r_min": r_min, "r_max": r_max, "r_step": r_step}
    if speed.alpha > 1.0:
        critical = curvature.critical_ratio(speed.alpha)
        sign_flip = np.flatnonzero((c2v[:-1] < 0.0) & (c2v[1:] >= 0.0))
        if sign_flip.size != 1:
            report.update({"sign_change": None, "critical_ratio": critical, "ok": False})
            ok = False
        else:
            i = int(sign_flip[0])
            abscissa = 0.5 * (rows[i][0] + rows[i + 1][0])
            ok = abs(abscissa - critical) <= r_step
            report.update({"sign_change": abscissa, "critical_ratio": critical, "ok": ok})
    else:
        qv = np.array([row[3] for row in rows])
        ok = bool(np.all(qv <= 0.0))
        report.update({"sign_change": None, "critical_ratio": None,
                       "max_q": float(qv.max()), "ok": ok})
    _write_json(report, out / "qform_scan.json")
    if plot:
        from . import plotting
        plotting.plot_qform_scan(ratios, [row[1] for row in rows],
                                 [row[2] for row in rows], out / "qform_scan.png",
                                 critical=report.get("critical_ratio"))
    print(f"qform-scan: {speed.name} "
          f"sign change {report.get('sign_change')} ({'ok' if ok else 'FAILED'})")
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinchflow",
        description="Curvature contraction flows for convex surfaces of revolution")
    parser.add_argument("--config", required=False, help="JSON config file")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--seed", type=int, default=42, help="seed for sampled checks")
    parser.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")
    parser.add_argument("--print-config", action="store_true",
                        help="echo the resolved config to stdout")
    parser.add_argument("--plot", action="store_true",
                        help="render figures next to the CSV outputs")
    parser.add_argument("command",
                        choices=["simulate", "build-counterexample",
                                 "verify-identities", "qform-scan"])
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.config is None:
            raise ConfigError("--config FILE is required")
        cfg = _load_config(args.config)
        if args.print_config:
            json.dump({"command": args.command, "seed": args.seed, "config": cfg},
                      sys.stdout, indent=2, sort_keys=True)
            sys.stdout.write("\n")
        out = Path(args.out)
        if args.command == "simulate":
            return cmd_simulate(cfg, out, args.seed, args.jobs, args.plot)
        if args.command == "build-counterexample":
            return cmd_build_counterexample(cfg, out, args.seed, args.plot)
        if args.command == "verify-identities":
            return cmd_verify_identities(cfg, out, args.seed)
        return cmd_qform_scan(cfg, out, args.seed, args.plot)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
