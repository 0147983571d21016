import sys

from loguru import logger

from config.settings import settings

logger.remove()
logger.add(sys.stderr, level=settings.LOG_LEVEL)
if settings.LOG_FILE:
    logger.add(settings.LOG_FILE, rotation="5 MB", level=settings.LOG_LEVEL)
