"""Command-line front end.

    fastlight <command> [--config PATH] [--set KEY=VALUE ...] [--out PATH|-]

Exit codes: 0 success, 2 configuration/validation error (the offending key is
named), 3 numeric failure (the pipeline stage is named). Output files are
written atomically, so a failed run never leaves a partial CSV behind.
"""

import argparse
import math
import sys

from . import __version__
from . import config as cfgmod
from .errors import (
    NUMERIC_ERRORS,
    FastLightError,
    ParameterError,
    PipelineError,
    SmallnessViolation,
    ZeroSigma,
)
from .noise import beat_uncertainty, sensing_uncertainty
from .pipeline import (
    REPORT_FIELDS,
    dispersion_profile,
    figure3_table,
    run_scenario,
    run_sweep,
    stage,
    tuned_medium_table,
)
from .tables import format_csv, write_atomic

# validation-type failures that are not ParameterError subclasses
_INPUT_ERRORS = (SmallnessViolation, ZeroSigma)


def _key_block(keys):
    width = max(len(k) for k in keys)
    return "\n".join(f"  {k:<{width}}  {text}" for k, text in keys.items())


def _epilog(sweep=False):
    text = "config keys (file tables or --set KEY=VALUE):\n" + _key_block(cfgmod.KEY_HELP)
    if sweep:
        text += "\n\nsweep keys:\n" + _key_block(cfgmod.SWEEP_KEY_HELP)
        text += "\n\nreport fields usable in sweep.outputs:\n  " + ", ".join(REPORT_FIELDS)
    return text


def _common(parser):
    parser.add_argument("--config", metavar="PATH", help="TOML or JSON scenario file")
    parser.add_argument("--out", metavar="PATH|-", default="-", help="output file (default: stdout)")
    parser.add_argument("--set", metavar="KEY=VALUE", action="append", default=[], dest="overrides",
                        help="override one config key (repeatable)")
    parser.add_argument("--band-hz", type=float, metavar="F", help="shorthand for --set bandwidth_hz=F")
    parser.add_argument("--flat-index", action="store_true", help="zero all dispersion (debug)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fastlight",
        description="Dual-chamber fast-light interferometer simulator.",
        epilog=_epilog(sweep=True),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_text, sweep=False):
        p = sub.add_parser(name, help=help_text, description=help_text, epilog=_epilog(sweep),
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        _common(p)
        return p

    p = add("dispersion", "chi, n, gain and dispersion across the doublet (CSV)")
    p.add_argument("--span", type=float, default=5.0, help="half-range in units of the pump separation")
    p.add_argument("--points", type=int, default=1001)

    add("tune-cad", "tune the medium to the target centre slope and report it (CSV)")
    add("scenario", "one end-to-end report (key: value text)")

    p = add("fig3", "enhancement eta against n_g/n0 at the scenario's Q (CSV)")
    p.add_argument("--range", nargs=2, type=float, default=(-1.0, 1.0), metavar=("LO", "HI"))
    p.add_argument("--samples", type=int, default=2001)
    p.add_argument("--scale", choices=("log", "linear"), default="log")
    p.add_argument("--negative-branch", choices=("upper", "lower"), default="upper")

    p = add("noise", "shot-noise beat uncertainty and sensing uncertainty (key: value text)")
    p.add_argument("--enhancement", type=float, help="divide the literal delta_S by this factor as well")

    p = add("sweep", "tabulate report fields over one config axis (CSV)", sweep=True)
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes (output is identical for any N)")
    return parser


def _resolved(args):
    overrides = list(args.overrides)
    if args.band_hz is not None:
        overrides.append(f"bandwidth_hz={args.band_hz!r}")
    if args.flat_index:
        overrides.append("flat_index=true")
    return cfgmod.resolve(args.config, overrides)


def _fmt(value):
    if isinstance(value, float):
        return format(value, ".16e") if math.isfinite(value) else str(value)
    if isinstance(value, (tuple, list)):
        return " | ".join(str(v) for v in value) if value else "-"
    return str(value)


def format_report(pairs):
    return "".join(f"{k}: {_fmt(v)}\n" for k, v in pairs)


def _scenario_text(cfg):
    report = run_scenario(cfg)
    pairs = [("config_hash", cfg.digest())]
    pairs += [(k, getattr(report, k)) for k in REPORT_FIELDS]
    pairs.append(("notes", report.notes))
    return format_report(pairs)


def _noise_text(cfg, enhancement):
    with stage("noise"):
        delta_f = beat_uncertainty(cfg.detection)
        sens = sensing_uncertainty(delta_f, cfg.cavity.n0, cfg.perturbation.sigma, enhancement)
    pairs = [("config_hash", cfg.digest()), ("delta_f_hz", delta_f), ("delta_S", sens.literal)]
    if sens.enhanced is not None:
        pairs += [("enhancement", enhancement), ("delta_S_enhanced", sens.enhanced)]
    return format_report(pairs)


def _run(args):
    data = _resolved(args)
    if args.command == "sweep":
        spec = cfgmod.sweep_from_dict(data, REPORT_FIELDS)
        if args.jobs < 1:
            raise ParameterError("--jobs", "must be >= 1")
        return format_csv(run_sweep(spec, jobs=args.jobs))
    cfg = cfgmod.scenario_from_dict(data)
    if args.command == "dispersion":
        with stage("dispersion"):
            return format_csv(dispersion_profile(cfg, args.span, args.points))
    if args.command == "tune-cad":
        if cfg.cad_target_slope is None or cfg.cad_knob == "off":
            raise ParameterError("cad_target_slope", "tune-cad needs a target slope and a knob other than 'off'")
        with stage("tune"):
            return format_csv(tuned_medium_table(cfg, cfg.cad_target_slope, cfg.cad_knob))
    if args.command == "scenario":
        return _scenario_text(cfg)
    if args.command == "fig3":
        with stage("fig3"):
            return format_csv(figure3_table(cfg, tuple(args.range), args.samples, args.scale, args.negative_branch))
    if args.command == "noise":
        return _noise_text(cfg, args.enhancement)
    raise AssertionError(args.command)


def _classify(exc):
    """(exit code, message) for a simulator error."""
    stage_name = None
    if isinstance(exc, PipelineError):
        stage_name, exc = exc.stage, exc.cause
    if isinstance(exc, ParameterError):
        return 2, f"invalid configuration: {exc}"
    if isinstance(exc, _INPUT_ERRORS):
        return 2, f"invalid configuration: {type(exc).__name__}: {exc}"
    label = f"stage '{stage_name}'" if stage_name else "numeric stage"
    kind = "numeric failure" if isinstance(exc, NUMERIC_ERRORS) else "failure"
    return 3, f"{kind} in {label}: {type(exc).__name__}: {exc}"


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        text = _run(args)
    except FastLightError as exc:
        code, message = _classify(exc)
        print(f"fastlight {args.command}: {message}", file=sys.stderr)
        return code
    except ValueError as exc:
        print(f"fastlight {args.command}: invalid input: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fastlight {args.command}: {exc}", file=sys.stderr)
        return 2
    if args.out == "-":
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. piped into head); nothing left to report
            sys.stderr.close()
            return 0
    else:
        write_atomic(args.out, text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
