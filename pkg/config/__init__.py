"""
Configuration selector for spacing-lab

The environment comes from the argument or from SPACING_LAB_ENV; unknown
names fall back to development with a warning.
"""
import logging
import os

from .base import Config
from .development import DevelopmentConfig
from .production import ProductionConfig
from .testing import TestingConfig

logger = logging.getLogger(__name__)

ENVIRONMENTS = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
}
DEFAULT_ENVIRONMENT = 'development'


def get_config(config_name=None):
    """
    Return the configuration class for an environment name

    Example:
        from config import get_config
        config = get_config("testing")()
    """
    name = (config_name or os.getenv('SPACING_LAB_ENV', DEFAULT_ENVIRONMENT)).lower()
    selected = ENVIRONMENTS.get(name)
    if selected is None:
        logger.warning(f"Unknown environment '{name}', using {DEFAULT_ENVIRONMENT}")
        selected = ENVIRONMENTS[DEFAULT_ENVIRONMENT]
    logger.info(f"Loading configuration: {selected.__name__}")
    return selected


__all__ = [
    'get_config',
    'Config',
    'DevelopmentConfig',
    'ProductionConfig',
    'TestingConfig',
    'ENVIRONMENTS'
]
