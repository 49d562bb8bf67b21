"""Command-line front end: ``afcsim {theory,simulate,sweep,efficiency,boundary}``.

Exit status is 0 on success, 1 when ``--check`` finds a simulation that
does not match theory and 2 for usage, configuration or domain errors.
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional

from pydantic import ValidationError

from afcsim.core.config import parse_overrides, read_config_file, settings
from afcsim.core.exceptions import AfcsimError
from afcsim.schemas.system import SystemConfig
from afcsim.services.commands import CommandFactory
from afcsim.services.model import load_config
from afcsim.services.output import FORMATS, write_table

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

logger = logging.getLogger(__name__)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value system-config file")
    common.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE",
        help="override one config key (repeatable)",
    )
    for field in SystemConfig.model_fields:
        common.add_argument(
            f"--{field.replace('_', '-')}", dest=f"cfg_{field}", default=None,
            help=f"override config key {field}",
        )
    common.add_argument("--output", help="write the table here instead of stdout")
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument(
        "--check", action="store_true",
        help="exit with status 1 when the result fails its consistency check",
    )
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afcsim",
        description="Optimal adaptive feedback communication system simulator",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()
    for metadata in CommandFactory.list_commands():
        subparser = subparsers.add_parser(
            metadata.name, parents=[common], help=metadata.description
        )
        CommandFactory.get_command(metadata.name).add_arguments(subparser)
    return parser


def resolve_config(namespace: argparse.Namespace) -> Optional[SystemConfig]:
    """Merge the config file, --set overrides and per-key flags, in that order"""
    raw: Dict[str, str] = {}
    if namespace.config:
        raw.update(read_config_file(namespace.config))
    raw.update(parse_overrides(namespace.set))
    for field in SystemConfig.model_fields:
        value = getattr(namespace, f"cfg_{field}")
        if value is not None:
            raw[field] = value
    if not raw:
        return None
    return load_config(raw)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    namespace = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if namespace.verbose else settings.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )

    command = CommandFactory.get_command(namespace.command)
    logger.debug("Dispatching command %s", namespace.command)
    config = None
    try:
        config = resolve_config(namespace)
        args = command.convert_args(command.cli_args(namespace, config))
        table = command.execute(args)
    except ValidationError as e:
        error = e.errors()[0]
        key = ".".join(str(part) for part in error["loc"]) or namespace.command
        message = error["msg"]
        if key == "config" and config is None:
            message = "no system configuration given (use --config or --set)"
        print(f"afcsim: error: {key}: {message}", file=sys.stderr)
        return EXIT_USAGE
    except AfcsimError as e:
        print(f"afcsim: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    text = write_table(table, namespace.format, namespace.output)
    if not namespace.output:
        sys.stdout.write(text)

    if namespace.check and table.passed is False:
        logger.warning("Consistency check failed")
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
