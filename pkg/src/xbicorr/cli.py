"""xbicorr: nonlinearity and windowed cross-bicorrelation analysis of price series.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
or output failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__, ingest, nonlin, pipeline, simulate
from .errors import ConfigError, DataError, NumericalError

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4

STAGES_BY_COMMAND = {
    "describe": ("describe",),
    "unitroot": ("unitroot",),
    "nonlin": ("nonlin",),
    "xbicorr": ("xbicorr",),
    "pipeline": pipeline.STAGES,
}


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _csv_list(text, conv=str):
    return tuple(conv(t) for t in text.split(",") if t.strip())


def _parse_input(text):
    if "=" in text:
        name, path = text.split("=", 1)
        return name.strip(), Path(path)
    return Path(text).stem, Path(text)


def _parse_pair(text):
    parts = [t.strip() for t in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise ConfigError(f"--pair expects A,B, got {text!r}")
    return tuple(parts)


def _parse_bds_grid(text):
    out = []
    for item in text.split(","):
        try:
            m, mult = item.split(":")
            out.append(nonlin.BdsConfig(int(m), float(mult)))
        except ValueError:
            raise ConfigError(f"--bds-grid entries look like 2:0.5, got {item!r}") from None
    return tuple(out)


def _add_data_args(p):
    p.add_argument("--input", action="append", default=[], metavar="[NAME=]FILE",
                   help="price CSV; repeat for several series (name defaults to the file stem)")
    p.add_argument("--date-col", default="date")
    p.add_argument("--price-col", default="price")
    p.add_argument("--date-format", default="%Y-%m-%d")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--lenient", action="store_true",
                   help="drop rows with missing or unparseable prices instead of failing")
    p.add_argument("--config", type=Path, help="JSON file with default values for these options")
    p.add_argument("--out", type=Path, help="output directory")
    p.add_argument("--format", default="json,csv,table", help="comma list of json, csv, table")
    p.add_argument("--pmax", type=int, default=10, help="largest AR/VAR order tried by BIC")


def _add_nonlin_args(p):
    p.add_argument("--lags", default="5,15,20")
    p.add_argument("--bds-grid", default="2:0.5,3:1.0,4:1.5")


def _add_xbicorr_args(p):
    p.add_argument("--pair", action="append", default=[], metavar="A,B")
    p.add_argument("--c", type=float, default=0.4)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--exclusion", choices=["dof", "paper"], default="dof")
    p.add_argument("--lag-depth", type=int, default=None)
    p.add_argument("--directions", default="x-on-y,y-on-x")
    p.add_argument("--combine", default="either", choices=["either", "both", "x-on-y", "y-on-x"])
    p.add_argument("--svg", action="store_true", help="also write an SVG stem plot per pair")


def build_parser():
    parser = _ArgumentParser(prog="xbicorr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    for name, help_ in [
        ("describe", "summary statistics of returns"),
        ("unitroot", "ADF test on returns"),
        ("nonlin", "AR pre-whitening and McLeod-Li / Engle LM / BDS tests"),
        ("xbicorr", "windowed cross-bicorrelation scan of series pairs"),
        ("pipeline", "every stage, end to end"),
    ]:
        p = sub.add_parser(name, help=help_)
        _add_data_args(p)
        if name in ("nonlin", "pipeline"):
            _add_nonlin_args(p)
        if name in ("xbicorr", "pipeline"):
            _add_xbicorr_args(p)

    p = sub.add_parser("simulate", help="write the synthetic three-series price dataset")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=4278, help="prices per series")
    return parser


def _apply_config_file(parser, args, argv):
    """Values from --config fill in options not given on the command line."""
    if args.config is None:
        return args
    try:
        data = json.loads(args.config.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {args.config}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {args.config} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    given = {a.split("=")[0] for a in argv if a.startswith("--")}
    for key, value in data.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise ConfigError(f"unknown config key {key!r}")
        if f"--{dest.replace('_', '-')}" in given:
            continue
        if isinstance(value, list) and dest in ("input", "pair"):
            value = [str(v) for v in value]
        elif isinstance(value, list):
            value = ",".join(str(v) for v in value)
        elif dest in ("out", "config"):
            value = Path(value)
        setattr(args, dest, value)
    return args


def config_from_args(args) -> pipeline.PipelineConfig:
    schema = ingest.CsvSchema(args.date_col, args.price_col, args.date_format, args.delimiter,
                              strict=not args.lenient)
    kwargs = dict(
        inputs=[_parse_input(t) for t in args.input],
        schema=schema,
        pmax=args.pmax,
        out_dir=args.out,
        formats=_csv_list(args.format),
        stages=STAGES_BY_COMMAND[args.command],
    )
    if hasattr(args, "lags"):
        try:
            kwargs["lags"] = _csv_list(args.lags, int)
        except ValueError:
            raise ConfigError(f"--lags expects integers, got {args.lags!r}") from None
        kwargs["bds_grid"] = _parse_bds_grid(args.bds_grid)
    if hasattr(args, "pair"):
        kwargs.update(
            pairs=[_parse_pair(t) for t in args.pair] or None,
            c=args.c,
            alpha=args.alpha,
            exclusion=args.exclusion,
            lag_depth=args.lag_depth,
            directions=_csv_list(args.directions),
            combine=args.combine,
            svg=args.svg,
        )
    return pipeline.PipelineConfig(**kwargs).validate()


def _run(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "simulate":
        for path in simulate.write_dataset(args.out, args.seed, args.n):
            print(path)
        return EXIT_OK
    args = _apply_config_file(parser, args, argv)
    config = config_from_args(args)
    doc, reports, series = pipeline.run_pipeline(config)
    if config.out_dir is not None:
        pipeline.write_outputs(doc, reports, series, config)
    if "table" in config.formats or config.out_dir is None:
        print(pipeline.render_text(doc))
    return EXIT_OK


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        return _run(argv)
    except ConfigError as exc:
        print(f"xbicorr: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"xbicorr: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"xbicorr: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"xbicorr: I/O failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
