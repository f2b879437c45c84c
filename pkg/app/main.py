import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from app.cli.config_file import parse_config
from app.cli.routes import dispatch
from app.config import get_settings
from app.errors import ConfigError, RqaError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME_ERROR = 1
EXIT_CONFIG_ERROR = 2


def configure_logging(level: str) -> None:
    """Install a stderr handler once; later calls only change the level."""
    root = logging.getLogger()
    if not root.handlers:
        logging.basicConfig(format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    root.setLevel(level)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the process exit status."""
    configure_logging(get_settings().LOG_LEVEL.upper())
    try:
        config = parse_config(argv)
    except ConfigError as e:
        print(f"rqentropy: invalid config {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    configure_logging(config.run.log_level)

    try:
        lines = dispatch(config)
    except (RqaError, OSError, ValidationError) as e:
        logger.error(f"{config.run.command} failed: {e}")
        print(f"rqentropy: {e}", file=sys.stderr)
        return EXIT_RUNTIME_ERROR

    for line in lines:
        print(line)
    return EXIT_OK


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()
