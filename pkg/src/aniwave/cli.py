"""Command-line harness: one subcommand per experiment, artifacts on disk.

Every run writes into a directory under the output root (flag
--output-root, else the ANIWAVE_OUTPUT_ROOT environment variable, else
the working directory) and leaves a manifest.json tying the artifacts
to the exact configuration, seed, and code version.  Reruns of the same
configuration and seed produce byte-identical CSV files; manifests
carry timestamps and a fresh run id.

Exit codes: 0 success, 2 bad input or schema, 3 instability detected,
4 resource failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .dispersion import NullFormSpec, SignPair, WaveSpeeds
from .errors import DomainError, InstabilityError, ResourceError, SchemaError
from .grid import PeriodicGrid
from .propagator import measure_decay
from .resonance import (
    lower_bound_check,
    phase_expansion_check,
    resonance_sample,
    volume_support_estimate,
)
from .runio import (
    RunManifest,
    save_checkpoint,
    write_diagnostics_csv,
    write_json,
    write_table_csv,
)
from .sim import (
    SimConfig,
    blowup_probe,
    initial_profiles,
    scattering_check,
    simulate,
    transverse_reduction_compare,
)

__all__ = ["main"]


def _outdir(args, default_name: str) -> Path:
    root = args.output_root or os.environ.get("ANIWAVE_OUTPUT_ROOT") or "."
    d = Path(root) / (args.name or default_name)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _load_config(args) -> SimConfig:
    if args.config:
        try:
            with open(args.config) as f:
                data = json.load(f)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{args.config}: invalid JSON ({exc})") from None
        try:
            cfg = SimConfig.from_dict(data)
        except (TypeError, KeyError, ValueError) as exc:
            raise SchemaError(f"{args.config}: bad configuration ({exc})") from None
    else:
        cfg = SimConfig()
    overrides = {}
    for name in ("eps0", "t_final", "seed", "data_sigma"):
        v = getattr(args, name, None)
        if v is not None:
            overrides[name] = v
    if getattr(args, "nf", None):
        overrides["nf"] = (
            NullFormSpec.paper_null() if args.nf == "paper_null" else NullFormSpec.sign_flipped()
        )
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)
    return cfg


def cmd_print_config(args) -> int:
    json.dump(SimConfig().to_dict(), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    out = _outdir(args, "simulate")
    man = RunManifest.begin("simulate", cfg, cfg.seed)
    result = simulate(cfg)
    write_diagnostics_csv(out / "diagnostics.csv", result.frames)
    man.add("diagnostics", out / "diagnostics.csv")
    for st in result.checkpoints + [result.final]:
        p = out / f"state_t{st.t:g}.anwv"
        save_checkpoint(p, st, cfg.dims, cfg.box, cfg.speeds.c1, cfg.speeds.c2)
        man.add(f"state_t{st.t:g}", p)
    scat: dict = {"available": False}
    try:
        rep = scattering_check(result)
        scat = {
            "available": True,
            "checkpoints": [list(row) for row in rep.checkpoints],
            "fitted_decay": rep.fitted_decay,
        }
    except DomainError:
        pass
    payload = {
        "aborted": result.aborted,
        "abort_time": result.abort_time,
        "abort_message": result.abort_message,
        "scattering": scat,
    }
    write_json(out / "scattering.json", payload)
    man.add("scattering", out / "scattering.json")
    man.finish(out / "manifest.json")
    print(f"simulate: {len(result.frames)} frames -> {out}")
    if result.aborted:
        print(f"instability at t = {result.abort_time:g}", file=sys.stderr)
        return 3
    return 0


def cmd_decay(args) -> int:
    out = _outdir(args, "decay")
    n, L = args.n, args.box
    grid = PeriodicGrid((n,) * 3, (L,) * 3)
    speeds = WaveSpeeds(args.c1, args.c2)
    man = RunManifest.begin(
        "decay",
        {"n": n, "box": L, "a": args.a, "sigma": args.sigma, "norm": args.norm,
         "c1": args.c1, "c2": args.c2, "times": args.times},
        0,
    )
    from .dispersion import lam

    data = np.exp(-(args.sigma**2) * lam(args.a, grid.xi3, speeds) ** 2 / 2.0)
    data = data.astype(complex) * grid.volume / data.size  # unit-ish amplitude
    report = measure_decay(data, args.times, args.a, grid, speeds, norm=args.norm)
    write_table_csv(
        out / "decay.csv",
        ("t", "value"),
        list(zip(report.times, report.values)),
    )
    man.add("decay", out / "decay.csv")
    write_json(
        out / "decay.json",
        {
            "a": args.a,
            "norm": args.norm,
            "exponent": report.exponent,
            "valid": report.valid,
            "reason": report.reason,
            "shell_exponents": {str(k): v for k, v in report.shell_exponents.items()},
        },
    )
    man.add("report", out / "decay.json")
    man.finish(out / "manifest.json")
    print(f"decay: exponent {report.exponent:+.3f} (valid={report.valid}) -> {out}")
    return 0


def cmd_resonance(args) -> int:
    out = _outdir(args, "resonance")
    speeds = WaveSpeeds(args.c1, args.c2)
    signs = SignPair(args.mu, args.nu)
    man = RunManifest.begin(
        "resonance",
        {"a": args.a, "mu": args.mu, "nu": args.nu, "c1": args.c1, "c2": args.c2,
         "shells": args.shells, "samples": args.samples},
        args.seed,
    )
    pts = resonance_sample(
        args.a, signs, speeds,
        shells=tuple(args.shells), n_samples=args.samples, seed=args.seed,
    )
    rows = [
        (
            p.xi[0], p.xi[1], p.xi[2], p.eta[0], p.eta[1], p.eta[2],
            p.a, p.signs.mu, p.signs.nu,
            p.phase_value, p.grad_eta_phase_norm, p.transverse_ratio,
        )
        for p in pts
    ]
    cols = ("xi1", "xi2", "xi3", "eta1", "eta2", "eta3", "a", "mu", "nu",
            "phase", "grad_norm", "transverse_ratio")
    write_table_csv(out / "resonance.csv", cols, rows)
    man.add("points", out / "resonance.csv")
    lb = lower_bound_check(signs, speeds, n_samples=args.samples, seed=args.seed)
    exp = phase_expansion_check(
        args.a, signs, speeds, samples_per_m=args.samples, seed=args.seed
    )
    write_json(
        out / "resonance.json",
        {
            "n_points": len(pts),
            "max_transverse_ratio": max((p.transverse_ratio for p in pts), default=0.0),
            "lower_bound_min_ratio": lb.min_ratio,
            "expansion_slope": exp.fitted_slope,
        },
    )
    man.add("report", out / "resonance.json")
    man.finish(out / "manifest.json")
    print(f"resonance: {len(pts)} points -> {out}")
    return 0


def cmd_lpcheck(args) -> int:
    out = _outdir(args, "lpcheck")
    from .cutoffs import psi_k, psi_leq
    from .dyadic import atom_project, atom_scales

    man = RunManifest.begin("lpcheck", {"n": args.n, "seed": args.seed}, args.seed)
    x = np.geomspace(2.0**-18, 2.0**18, 4001)
    k_lo, k_hi = -24, 24
    total = psi_leq(x, k_lo)
    for k in range(k_lo + 1, k_hi + 1):
        total = total + psi_k(x, k)
    part_err = float(np.abs(total - 1.0).max())

    rng = np.random.default_rng(args.seed)
    grid = PeriodicGrid((args.n,) * 3, (16.0 * np.pi,) * 3)
    coeffs = rng.standard_normal(grid.dims) + 1j * rng.standard_normal(grid.dims)
    zero = (0,) * grid.ndim
    coeffs[zero] = 0.0
    # per shell, the atoms telescope exactly to the shell projection
    xi_mod = np.linalg.norm(grid.xi3, axis=-1)
    shells = grid.faithful_shells()
    target = np.zeros_like(coeffs)
    recon = np.zeros_like(coeffs)
    for k in shells:
        target = target + coeffs * psi_k(xi_mod, k)
        for j in atom_scales(grid, k):
            recon = recon + atom_project(coeffs, j, k, grid)
    atom_err = float(np.abs(recon - target).max() / np.abs(target).max())

    payload = {
        "partition_max_err": part_err,
        "atom_reconstruction_rel_err": atom_err,
        "shells": shells,
    }
    write_json(out / "lpcheck.json", payload)
    man.add("report", out / "lpcheck.json")
    man.finish(out / "manifest.json")
    print(f"lpcheck: partition {part_err:.2e}, atoms {atom_err:.2e} -> {out}")
    return 0


def cmd_volume(args) -> int:
    out = _outdir(args, "volume")
    speeds = WaveSpeeds(args.c1, args.c2)
    signs = SignPair(args.mu, args.nu)
    xi = np.array(args.xi, dtype=float)
    if args.l_hi < args.l_lo:
        raise DomainError(f"empty l range [{args.l_lo}, {args.l_hi}]")
    man = RunManifest.begin(
        "volume",
        {"k": args.k, "k1": args.k1, "k2": args.k2, "mu": args.mu, "nu": args.nu,
         "xi": list(xi), "c1": args.c1, "c2": args.c2, "samples": args.samples,
         "l_range": [args.l_lo, args.l_hi]},
        args.seed,
    )
    rows = []
    for l in range(args.l_lo, args.l_hi + 1):
        est = volume_support_estimate(
            args.k, args.k1, args.k2, l, signs, xi, speeds,
            n_samples=args.samples, seed=args.seed,
        )
        rows.append((l, est.measure, est.predicted, est.ratio, est.ci_halfwidth, est.hits))
    write_table_csv(
        out / "volume.csv",
        ("l", "measure", "predicted", "ratio", "ci_halfwidth", "hits"),
        rows,
    )
    man.add("table", out / "volume.csv")
    ratios = [r[3] for r in rows if r[5] > 0]
    write_json(
        out / "volume.json",
        {"max_ratio": max(ratios, default=0.0), "rows": len(rows)},
    )
    man.add("report", out / "volume.json")
    man.finish(out / "manifest.json")
    print(f"volume: {len(rows)} rows, max ratio {max(ratios, default=0.0):.3g} -> {out}")
    return 0


def cmd_compare(args) -> int:
    out = _outdir(args, "compare")
    cfg = SimConfig(
        dims=(args.n,),
        box=(args.box,),
        eps0=args.eps0,
        t_final=args.t_final,
        data_sigma=args.sigma,
        data_xi0=(args.xi0,),
        seed=args.seed if args.seed is not None else 0,
        checkpoint_times=(),
    )
    man = RunManifest.begin("compare", cfg, cfg.seed)
    payload: dict = {}
    if args.blowup:
        rep = blowup_probe(cfg)
        write_table_csv(
            out / "blowup.csv",
            ("t", "null_sup", "flipped_sup"),
            list(zip(rep.times, rep.null_sup, rep.flipped_sup)),
        )
        man.add("blowup", out / "blowup.csv")
        payload["blowup"] = {
            "exceed_time": rep.exceed_time,
            "null_max_ratio": rep.null_max_ratio,
            "flipped_blowup_time": rep.flipped_blowup_time,
        }
    else:
        dev = transverse_reduction_compare(cfg)
        payload["reduction_deviation"] = dev
    write_json(out / "compare.json", payload)
    man.add("report", out / "compare.json")
    man.finish(out / "manifest.json")
    print(f"compare -> {out}: {payload}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="aniwave",
        description="Coupled anisotropic half-wave simulator and checks",
    )
    p.add_argument("--output-root", default=None, help="artifact root (or ANIWAVE_OUTPUT_ROOT)")
    p.add_argument("--name", default=None, help="output subdirectory name")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("print-config", help="emit the full default configuration as JSON")
    q.set_defaults(fn=cmd_print_config)

    q = sub.add_parser("simulate", help="nonlinear profile evolution")
    q.add_argument("--config", default=None, help="JSON configuration file")
    q.add_argument("--eps0", type=float, default=None)
    q.add_argument("--t-final", dest="t_final", type=float, default=None)
    q.add_argument("--seed", type=int, default=None)
    q.add_argument("--data-sigma", dest="data_sigma", type=float, default=None)
    q.add_argument("--nf", choices=("paper_null", "sign_flipped"), default=None)
    q.set_defaults(fn=cmd_simulate)

    q = sub.add_parser("decay", help="linear sup-norm decay measurement")
    q.add_argument("--a", type=int, choices=(1, 2), default=1)
    q.add_argument("--n", type=int, default=128)
    q.add_argument("--box", type=float, default=224.0)
    q.add_argument("--sigma", type=float, default=1.2)
    q.add_argument("--c1", type=float, default=2.0)
    q.add_argument("--c2", type=float, default=2.0)
    q.add_argument("--norm", default="Linf")
    q.add_argument("--times", type=float, nargs="+",
                   default=[5.0, 7.1, 10.0, 14.1, 20.0, 28.3, 40.0])
    q.set_defaults(fn=cmd_decay)

    q = sub.add_parser("resonance", help="stationary-point sampling and checks")
    q.add_argument("--a", type=int, choices=(1, 2), default=1)
    q.add_argument("--mu", type=int, choices=(-1, 1), default=1)
    q.add_argument("--nu", type=int, choices=(-1, 1), default=1)
    q.add_argument("--c1", type=float, default=2.0)
    q.add_argument("--c2", type=float, default=2.0)
    q.add_argument("--shells", type=int, nargs=3, default=[0, 0, 0])
    q.add_argument("--samples", type=int, default=2000)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(fn=cmd_resonance)

    q = sub.add_parser("lpcheck", help="cutoff partition and atom reconstruction checks")
    q.add_argument("--n", type=int, default=64)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(fn=cmd_lpcheck)

    q = sub.add_parser("volume", help="resonant-set measure sweep")
    q.add_argument("--k", type=int, default=2)
    q.add_argument("--k1", type=int, default=0)
    q.add_argument("--k2", type=int, default=2)
    q.add_argument("--mu", type=int, choices=(-1, 1), default=-1)
    q.add_argument("--nu", type=int, choices=(-1, 1), default=1)
    q.add_argument("--xi", type=float, nargs=3, default=[2.7, 0.0, 0.0])
    q.add_argument("--c1", type=float, default=2.0)
    q.add_argument("--c2", type=float, default=2.0)
    q.add_argument("--l-lo", dest="l_lo", type=int, default=-10)
    q.add_argument("--l-hi", dest="l_hi", type=int, default=-2)
    q.add_argument("--samples", type=int, default=400_000)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(fn=cmd_volume)

    q = sub.add_parser("compare", help="1D reduction consistency / blow-up probe")
    q.add_argument("--n", type=int, default=64)
    q.add_argument("--box", type=float, default=224.0)
    q.add_argument("--eps0", type=float, default=1e-3)
    q.add_argument("--t-final", dest="t_final", type=float, default=10.0)
    q.add_argument("--sigma", type=float, default=3.5)
    q.add_argument("--xi0", type=float, default=0.0)
    q.add_argument("--seed", type=int, default=None)
    q.add_argument("--blowup", action="store_true", help="run the null vs flipped probe")
    q.set_defaults(fn=cmd_compare)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (DomainError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InstabilityError as exc:
        print(f"instability: {exc}", file=sys.stderr)
        return 3
    except (ResourceError, OSError, MemoryError) as exc:
        print(f"resource failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
