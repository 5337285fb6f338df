# src/fronttrack/__main__.py
import logging
import sys

from dotenv import load_dotenv

from fronttrack.cli.args import parse_args
from fronttrack.cli.commands import dispatch
from fronttrack.errors import ConfigError, FrontTrackError
from fronttrack.log import configure_logging

load_dotenv()

logger = logging.getLogger("fronttrack")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    args = parse_args(argv)
    try:
        return dispatch(args)
    except ConfigError as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except FrontTrackError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
