import logging
import sys
import os

sys.path.append(os.path.abspath(
    os.path.join(os.path.dirname(__file__), "../../")))
sys.path.append(os.path.abspath(os.path.dirname(__file__)))

from src.core.settings import load_settings
from src.cli.dispatcher import cli_dispatch


if __name__ == '__main__':
    settings = load_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    sys.exit(cli_dispatch(sys.argv[1:]))
