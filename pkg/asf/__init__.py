import logging

from ._version_info import __version__

from .config import kc

logger = logging.getLogger(__name__)
logging.basicConfig()
logger.setLevel(getattr(logging, str(kc('log_level')).upper(), logging.INFO))
