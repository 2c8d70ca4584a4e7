import os
import sys
import argparse
import logging

from dgla.config import (
    C,
    load_config,
    config_toml,
    default_config_toml,
)
from dgla.errors import DglaError, EXIT_INPUT
from dgla.report import COMMANDS, JobSpec, run

LOG_FORMAT = "%(asctime)s %(name)s %(message)s"


def setup_logging(verbose: bool):
    handlers = [logging.FileHandler(C.log_file)]
    if verbose:
        handlers.append(logging.StreamHandler(sys.stderr))
    logging.basicConfig(level=C.log_level, format=LOG_FORMAT, handlers=handlers, force=True)


def build_parser() -> argparse.ArgumentParser:
    argp = argparse.ArgumentParser(prog="dgla")
    argp.add_argument(
        "-C", "--config-dir", default=os.path.join(os.path.expanduser("~"), ".dgla")
    )
    argp.add_argument(
        "-c",
        "--config",
        nargs=2,
        metavar=("path", "value"),
        action="append",
        default=[],
        help="Set config options by path and value",
    )
    argp.add_argument("--verbose", action="store_true", help="Also log to stderr")

    job = argparse.ArgumentParser(add_help=False)
    job.add_argument("--in", dest="input", required=True, help="Input JSON file")
    job.add_argument("--rep", help="Representation JSON file")
    job.add_argument("--algebra", help="Artinian algebra JSON file")
    job.add_argument("--n", type=int, default=1, help="Degree of the dual numbers")
    job.add_argument("--max-weight", type=int, help="Weight truncation")
    job.add_argument("--depth", type=int, help="Cellular depth")
    job.add_argument("--degree-window", help="Reported degrees, a:b")
    job.add_argument("--seed", type=int, help="Seed for randomized checks")
    job.add_argument(
        "--accept-truncated", action="store_true", help="Accept weight-truncated C(L) in unit-check"
    )
    job.add_argument("--out", help="Write the report here instead of stdout")
    job.add_argument("--format", dest="output_format", choices=["json", "csv", "table"])

    subp = argp.add_subparsers(dest="command", required=True, help="Command")
    for command in COMMANDS:
        subp.add_parser(command, parents=[job])
    subp.add_parser("default-config", help="Print the default config")
    subp.add_parser("config", help="Print the current config")
    return argp


def main(argv=None) -> int:
    argp = build_parser()
    args = argp.parse_args(argv)

    if not os.path.exists(args.config_dir) and args.config_dir != argp.get_default("config_dir"):
        sys.stderr.write(f"ERROR: Config directory '{args.config_dir}' does not exist\n")
        sys.exit(EXIT_INPUT)
        return

    try:
        load_config(args.config_dir)
        for path, val in args.config:
            C.set_by_path(path, val)
    except ValueError as exc:
        sys.stderr.write(f"ERROR: {exc}\n")
        sys.exit(EXIT_INPUT)
        return

    if args.command == "default-config":
        print(default_config_toml())
        return 0
    if args.command == "config":
        print(config_toml())
        return 0

    setup_logging(args.verbose)

    try:
        job = JobSpec(
            command=args.command,
            input=args.input,
            rep=args.rep,
            algebra=args.algebra,
            n=args.n,
            max_weight=args.max_weight,
            depth=args.depth,
            degree_window=args.degree_window,
            seed=args.seed,
            accept_truncated=args.accept_truncated,
            output_format=args.output_format,
        )
        report = run(job)
    except DglaError as exc:
        logging.getLogger(__name__).error("%s failed: %s", args.command, exc)
        sys.stderr.write(f"ERROR: {exc}\n")
        sys.stderr.flush()
        sys.exit(exc.exit_code)
        return

    text = report.render(job.output_format)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    sys.exit(report.exit_code)


if __name__ == "__main__":
    main()
