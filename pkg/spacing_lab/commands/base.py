"""
Shared plumbing for CLI commands: the context object and error conversion
"""
import functools
import logging
import os
from dataclasses import dataclass
from typing import Optional

import click

from ..errors import SpacingLabError

logger = logging.getLogger(__name__)


@dataclass
class AppContext:
    config: object
    seed: int
    threads: int
    out_dir: str

    def output_path(self, given: Optional[str], default_name: str) -> str:
        """Explicit --out wins; otherwise the default name inside --out-dir."""
        path = given or os.path.join(self.out_dir, default_name)
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        return path


def handle_errors(func):
    """Turn library errors into a clean click failure (exit status 1)."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except SpacingLabError as e:
            logger.debug("Command failed", exc_info=True)
            raise click.ClickException(str(e))
    return wrapper


model_option = click.option(
    "--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False),
    help="Model specification file (key=value)"
)
