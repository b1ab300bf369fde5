"""Command-line front end.

Subcommands: scan, carpet, mask, mc, oracle, analyze.  Values may come
from flags, a --config file, or the built-in baseline, in that order of
precedence.  Exit codes: 0 success, 2 configuration problem, 3 physics
domain error, 4 oracle resolution cap exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .analysis import fringe_width_fraction, revival_distance, visibility
from .config import (CONFIG_KEYS, KEY_HELP, RunConfig, build_config,
                     echo_lines, parse_value, read_config_file)
from .csvio import (write_carpet_csv, write_mc_csv, write_oracle_csv,
                    write_scan_csv)
from .errors import ConfigError, DomainError, ResolutionCapError
from .grating import SlmProfile, render_slm_mask, write_pgm
from .model import NORM_COLUMN_MAX_ONE, NORM_RAW, talbot_length
from .montecarlo import RNG_ID, McRun, simulate_scan
from .oracle import DEFAULT_MAX_STEPS, DEFAULT_OVERSAMPLE, fresnel_intensity
from .propagation import carpet, intensity, scan
from .units import fmt, fmt_exact, parse_length

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_RESOLUTION = 4

_UNITS_EPILOG = ("lengths accept nm, um, mm and m suffixes; a bare number "
                 "is meters.  Negative values need the --flag=value form, "
                 "for example --scan-start=-600um.  Flags override --config "
                 "keys, which override the built-in baseline.")


def _add_common(sub: argparse.ArgumentParser, default_out=None) -> None:
    sub.add_argument("--config", metavar="PATH",
                     help="config file with 'key = value' lines")
    out_help = (f"output file (default: {default_out})" if default_out
                else "optional file to also receive the report")
    sub.add_argument("--out", metavar="PATH", default=default_out,
                     help=out_help)
    sub.add_argument("--threads", type=int, default=None, metavar="N",
                     help="worker threads (default: $TALBOT_SIM_THREADS or 1)")
    for key in CONFIG_KEYS:
        sub.add_argument("--" + key.replace("_", "-"), dest="key_" + key,
                         metavar="VALUE", help=KEY_HELP[key])


def _add_spectral(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--spectral-samples", type=int, default=41, metavar="N",
                     help="odd number of wavelength nodes (default 41)")
    sub.add_argument("--spectral-span", type=float, default=3.0, metavar="S",
                     help="wavelength grid half-span in units of beta "
                          "(default 3)")


def _overrides(args: argparse.Namespace) -> dict:
    out = {}
    for key in CONFIG_KEYS:
        text = getattr(args, "key_" + key)
        if text is not None:
            out[key] = parse_value(key, text)
    return out


def _load_config(args: argparse.Namespace) -> RunConfig:
    file_values = read_config_file(args.config) if args.config else None
    return build_config(file_values, _overrides(args))


def _threads(args: argparse.Namespace) -> int:
    n = args.threads
    if n is None:
        text = os.environ.get("TALBOT_SIM_THREADS", "").strip()
        if not text:
            return 1
        try:
            n = int(text)
        except ValueError:
            raise ConfigError("TALBOT_SIM_THREADS must be an integer, "
                              f"got {text!r}") from None
    if n < 1:
        raise ConfigError("thread count must be >= 1")
    return n


def _spectral_comments(args: argparse.Namespace) -> list[str]:
    return [f"# spectral-samples: {args.spectral_samples}",
            f"# spectral-span: {fmt_exact(args.spectral_span)}"]


def cmd_scan(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    pattern = scan(cfg.source(), cfg.grating(), cfg.detection(),
                   samples=args.spectral_samples, span=args.spectral_span,
                   threads=_threads(args))
    comments = echo_lines(cfg) + _spectral_comments(args) + [
        f"# magnification: {fmt_exact(pattern.meta['magnification'])}",
        f"# abscissa: {pattern.meta['abscissa']}",
    ]
    write_scan_csv(args.out, pattern, comments)
    return EXIT_OK


def cmd_carpet(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    lam = parse_length(args.wavelength) if args.wavelength else cfg.lambda0
    lt = talbot_length(cfg.d, lam)
    x_lo = parse_length(args.x_min) if args.x_min else -cfg.d
    x_hi = parse_length(args.x_max) if args.x_max else cfg.d
    z_lo = parse_length(args.z_min) if args.z_min else lt / 50.0
    z_hi = parse_length(args.z_max) if args.z_max else 2.0 * lt
    carp = carpet(cfg.source(), cfg.grating(),
                  np.linspace(x_lo, x_hi, args.x_count),
                  np.linspace(z_lo, z_hi, args.z_count),
                  lam=lam, norm=args.norm, threads=_threads(args))
    comments = echo_lines(cfg) + [
        f"# wavelength: {fmt_exact(lam)}",
        f"# norm: {args.norm}",
    ]
    write_carpet_csv(args.out, carp, comments)
    return EXIT_OK


def cmd_mask(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    profile = SlmProfile(width_px=args.width_px, height_px=args.height_px,
                         pixel_pitch=parse_length(args.pixel_pitch),
                         gray_open=args.gray_open,
                         gray_closed=args.gray_closed)
    write_pgm(args.out, render_slm_mask(cfg.grating(), profile))
    return EXIT_OK


def cmd_mc(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    run = McRun(seed=args.seed, events_per_point=args.events_per_point,
                source=cfg.source(), grating=cfg.grating(),
                scan=cfg.detection(),
                spectral_samples=args.spectral_samples,
                spectral_span=args.spectral_span)
    pattern = simulate_scan(run)
    comments = echo_lines(cfg) + [
        f"# seed: {run.seed}",
        f"# rng: {RNG_ID}",
        f"# events-per-point: {fmt_exact(run.events_per_point)}",
    ] + _spectral_comments(args)
    write_mc_csv(args.out, pattern, comments)
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    source, grating = cfg.source(), cfg.grating()
    lam = parse_length(args.wavelength) if args.wavelength else cfg.lambda0
    x_lo = parse_length(args.x_min) if args.x_min else -cfg.d
    x_hi = parse_length(args.x_max) if args.x_max else cfg.d
    xs = np.linspace(x_lo, x_hi, args.points)
    analytic = intensity(xs, lam, source, grating, cfg.z)
    numeric = fresnel_intensity(xs, lam, source, grating, cfg.z,
                                oversample=args.oversample,
                                max_steps=args.max_steps)
    comments = echo_lines(cfg) + [
        f"# wavelength: {fmt_exact(lam)}",
        f"# oversample: {args.oversample}",
    ]
    max_err = write_oracle_csv(args.out, xs, analytic, numeric, comments)
    print(f"max_rel_err={fmt(max_err)}")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    source, grating = cfg.source(), cfg.grating()
    pattern = scan(source, grating, cfg.detection(),
                   samples=args.spectral_samples, span=args.spectral_span,
                   threads=_threads(args))
    period = grating.d * pattern.meta["magnification"]
    z_lo = parse_length(args.z_lo) if args.z_lo else 0.8 * cfg.z
    z_hi = parse_length(args.z_hi) if args.z_hi else 1.3 * cfg.z
    revival = revival_distance(source, grating, cfg.lambda0, z_lo, z_hi,
                               steps=args.z_steps)
    lines = echo_lines(cfg) + [
        f"visibility = {fmt(visibility(pattern))}",
        f"fringe_fraction = {fmt(fringe_width_fraction(pattern, period))}",
        f"revival_mm = {fmt(revival * 1e3)}",
    ]
    report = "\n".join(lines) + "\n"
    sys.stdout.write(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="talbot-sim",
        description="Near-field grating diffraction simulator: slit scans, "
                    "intensity carpets, photon-count runs and validation.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_scan = subs.add_parser("scan", epilog=_UNITS_EPILOG,
                             help="slit-scan count-rate curve as CSV")
    _add_common(p_scan, "scan.csv")
    _add_spectral(p_scan)
    p_scan.set_defaults(func=cmd_scan)

    p_carpet = subs.add_parser("carpet", epilog=_UNITS_EPILOG,
                               help="monochromatic intensity raster as CSV")
    _add_common(p_carpet, "carpet.csv")
    p_carpet.add_argument("--wavelength", metavar="VALUE",
                          help="carpet wavelength (default: lambda0)")
    p_carpet.add_argument("--x-min", metavar="VALUE",
                          help="left edge of the x raster (default: -d)")
    p_carpet.add_argument("--x-max", metavar="VALUE",
                          help="right edge of the x raster (default: d)")
    p_carpet.add_argument("--x-count", type=int, default=256, metavar="N",
                          help="x samples (default 256)")
    p_carpet.add_argument("--z-min", metavar="VALUE",
                          help="nearest plane (default: d*d/lambda/50)")
    p_carpet.add_argument("--z-max", metavar="VALUE",
                          help="farthest plane (default: 2*d*d/lambda)")
    p_carpet.add_argument("--z-count", type=int, default=128, metavar="N",
                          help="z samples (default 128)")
    p_carpet.add_argument("--norm", default=NORM_RAW,
                          choices=(NORM_RAW, NORM_COLUMN_MAX_ONE),
                          help="value scaling (default raw)")
    p_carpet.set_defaults(func=cmd_carpet)

    p_mask = subs.add_parser("mask", epilog=_UNITS_EPILOG,
                             help="binary grating mask as a P5 PGM image")
    _add_common(p_mask, "mask.pgm")
    p_mask.add_argument("--width-px", type=int, default=1024, metavar="N",
                        help="mask width in pixels (default 1024)")
    p_mask.add_argument("--height-px", type=int, default=768, metavar="N",
                        help="mask height in pixels (default 768)")
    p_mask.add_argument("--pixel-pitch", default="36um", metavar="VALUE",
                        help="pixel size (default 36um)")
    p_mask.add_argument("--gray-open", type=int, default=255, metavar="G",
                        help="gray level of open columns (default 255)")
    p_mask.add_argument("--gray-closed", type=int, default=0, metavar="G",
                        help="gray level of closed columns (default 0)")
    p_mask.set_defaults(func=cmd_mask)

    p_mc = subs.add_parser("mc", epilog=_UNITS_EPILOG,
                           help="seeded photon-count simulation as CSV")
    _add_common(p_mc, "mc.csv")
    _add_spectral(p_mc)
    p_mc.add_argument("--seed", type=int, required=True, metavar="U64",
                      help="RNG seed; identical seeds give identical files")
    p_mc.add_argument("--events-per-point", type=float, default=1000.0,
                      metavar="MEAN",
                      help="expected counts at the curve peak (default 1000)")
    p_mc.set_defaults(func=cmd_mc)

    p_oracle = subs.add_parser(
        "oracle", epilog=_UNITS_EPILOG,
        help="analytic intensity vs direct quadrature, side by side")
    _add_common(p_oracle, "oracle.csv")
    p_oracle.add_argument("--wavelength", metavar="VALUE",
                          help="probe wavelength (default: lambda0)")
    p_oracle.add_argument("--x-min", metavar="VALUE",
                          help="first probe position (default: -d)")
    p_oracle.add_argument("--x-max", metavar="VALUE",
                          help="last probe position (default: d)")
    p_oracle.add_argument("--points", type=int, default=129, metavar="N",
                          help="probe positions (default 129)")
    p_oracle.add_argument("--oversample", type=int,
                          default=DEFAULT_OVERSAMPLE, metavar="K",
                          help="sampling densification beyond the chirp "
                               f"bound (default {DEFAULT_OVERSAMPLE})")
    p_oracle.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS,
                          metavar="N",
                          help="integrand sample cap per field evaluation "
                               f"(default {DEFAULT_MAX_STEPS})")
    p_oracle.set_defaults(func=cmd_oracle)

    p_an = subs.add_parser(
        "analyze", epilog=_UNITS_EPILOG,
        help="visibility, fringe width fraction and revival distance")
    _add_common(p_an)
    _add_spectral(p_an)
    p_an.add_argument("--z-lo", metavar="VALUE",
                      help="revival search start (default: 0.8*z)")
    p_an.add_argument("--z-hi", metavar="VALUE",
                      help="revival search end (default: 1.3*z)")
    p_an.add_argument("--z-steps", type=int, default=64, metavar="N",
                      help="revival search grid size (default 64)")
    p_an.set_defaults(func=cmd_analyze)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except ResolutionCapError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RESOLUTION
    except DomainError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
