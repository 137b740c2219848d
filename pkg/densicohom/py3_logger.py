import logging
import sys
from typing import Optional

LOGGER_NAME = 'densicohom'


def get_logger(logging_level: Optional[str] = None):
    """
    Gets the densicohom logger, sets the format and logging level

    The handler is attached only once. Library modules call this without a level and
    inherit whatever the command line configured, warnings by default.

    :param logging_level: logging level of logger, one of debug, info, warning, error, critical
    """
    switcher = {'debug': logging.DEBUG, 'info': logging.INFO, 'warning': logging.WARNING,
                'error': logging.ERROR, 'critical': logging.CRITICAL}

    logger = logging.getLogger(LOGGER_NAME)
    # Check if the logger has already been configured
    if len(logger.handlers) > 0:
        if logging_level is not None:
            configure(logger, switcher.get(logging_level, logging.WARNING))
        return logger

    # stdout carries the JSON and CSV output
    handler = logging.StreamHandler(stream=sys.stderr)
    logger.addHandler(handler)
    configure(logger, switcher.get(logging_level, logging.WARNING))
    return logger


def configure(logger: logging.Logger, log_level: int):
    """
    Sets the level of the logger and the format of its handlers.

    :param logger: logger to configure
    :param log_level: numeric logging level
    """
    # Print originating filename only in debug mode
    if log_level == logging.DEBUG:
        logging_format = logging\
            .Formatter('%(asctime)s - %(levelname)s @ %(filename)s: %(message)s', '%H:%M:%S')
    else:
        logging_format = logging.Formatter('%(asctime)s - %(levelname)s: %(message)s', '%H:%M:%S')

    for handler in logger.handlers:
        handler.setFormatter(logging_format)
    # Set level of logger
    logger.setLevel(log_level)
