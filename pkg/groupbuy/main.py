import logging
import sys

import sentry_sdk
from pydantic import ValidationError

from groupbuy.commands import build_parser
from groupbuy.constants import ExitCode
from groupbuy.core.config import settings
from groupbuy.exceptions import BudgetExceeded, InvalidInstance, UnknownVendor, Unstabilizable

logging.basicConfig(
    format="[%(levelname)s] (%(asctime)s) %(module)s:%(pathname)s:%(funcName)s:%(lineno)s:: %(message)s",
    level=settings.LOG_LEVEL,
    datefmt="%d-%m-%y %H:%M:%S",
    stream=sys.stderr,
)

# Initialize Sentry SDK if a DSN is defined in our environment
if settings.SENTRY_DSN:
    sentry_sdk.init(dsn=settings.SENTRY_DSN, traces_sample_rate=1.0)


def run(argv: list[str] | None = None) -> ExitCode:
    """
    Function to run one command and map its failure, if any, to an exit code
    :param argv: Command-line arguments, sys.argv[1:] when None
    :return: The exit code
    """
    args = build_parser().parse_args(argv)
    try:
        code: ExitCode = args.handler(args)
        return code
    except (InvalidInstance, UnknownVendor, ValidationError, OSError) as e:
        logging.error(f"Could not read input: {e}")
        return ExitCode.PARSE_ERROR
    except BudgetExceeded as e:
        logging.error(str(e))
        return ExitCode.BUDGET_EXCEEDED
    except Unstabilizable as e:
        logging.error(f"Not stabilizable by rational transfers: {e}")
        return ExitCode.UNSTABILIZABLE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
