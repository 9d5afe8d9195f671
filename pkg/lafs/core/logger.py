import logging
from sys import stdout
from typing import TextIO, Union

logger = logging.getLogger("lafs")


def get_stream_logger(level: Union[int, str] = logging.DEBUG, stream: TextIO = stdout):
    """
    Attach one formatted stream handler to the ``lafs`` logger.

    Calling again only moves the existing handler to ``stream`` and updates the level.
    """
    logger.setLevel(level)
    for handler in logger.handlers:
        if getattr(handler, "_lafs_stream", False):
            handler.setStream(stream)
            return logger

    stream_handler = logging.StreamHandler(stream)
    stream_handler._lafs_stream = True  # pylint: disable=protected-access
    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    stream_handler.setFormatter(formatter)
    logger.addHandler(stream_handler)

    return logger
