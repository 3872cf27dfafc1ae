import logging
import os

import click
from dotenv import load_dotenv

from .commands.base import AppContext

# Load environment variables
load_dotenv()

__version__ = "1.0.0"


def create_app(config_name=None):
    """Application factory: configuration, logging and the command registry"""

    # ============================================
    # LOAD CONFIGURATION
    # ============================================
    from config import get_config
    config_name = config_name or os.getenv('SPACING_LAB_ENV', 'development')
    config = get_config(config_name)()

    logging.basicConfig(
        level=getattr(logging, str(config.LOG_LEVEL).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )

    @click.group(name="spacing-lab")
    @click.version_option(__version__, prog_name=config.APP_NAME)
    @click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=0, show_default=True,
                  help="Base seed for every random stream")
    @click.option("--threads", type=click.IntRange(min=1), default=config.THREADS, show_default=True,
                  help="Worker threads for replicas and table nodes")
    @click.option("--out-dir", type=click.Path(file_okay=False), default=config.OUTPUT_DIR, show_default=True,
                  help="Directory for outputs given without a path")
    @click.pass_context
    def cli(ctx, seed, threads, out_dir):
        """Spacing statistics of unitary invariant ensembles and repulsive particle systems."""
        ctx.obj = AppContext(config=config, seed=seed, threads=threads, out_dir=out_dir)

    # ============================================
    # REGISTER COMMANDS
    # ============================================
    from .commands import (
        register_sample_commands,
        register_equilibrium_commands,
        register_gaudin_commands,
        register_spacing_commands,
        register_universality_commands,
        register_study_commands
    )

    register_sample_commands(cli)
    register_equilibrium_commands(cli)
    register_gaudin_commands(cli)
    register_spacing_commands(cli)
    register_universality_commands(cli)
    register_study_commands(cli)

    return cli
