import logging
from config import Config


def create_cli(config_class=Config):
    log_level = getattr(logging, config_class.LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(
        level=log_level,
        format='[%(levelname)s] - %(message)s'
    )

    if log_level > logging.DEBUG:
        logging.getLogger('sympy').setLevel(logging.WARNING)

    from .cli import cli
    return cli
