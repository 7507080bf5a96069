import logging

logger = logging.getLogger("cfphase")


def log_debug(msg, *args):
    logger.debug(msg, *args)


def log_info(msg, *args):
    logger.info(msg, *args)


def log_warn(msg, *args):
    logger.warning(msg, *args)


def log_alert(msg, *args):
    logger.error(msg, *args)


def setup_logging(verbose=False):
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s"
    )
    logger.setLevel(logging.INFO if verbose else logging.WARNING)
