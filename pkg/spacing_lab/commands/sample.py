import logging
import os

import click

from ..models.configuration import McmcParams, SamplerKind
from ..services import PersistenceService, SamplingService
from ..utils.seeding import derive_seed
from .base import handle_errors, model_option

logger = logging.getLogger(__name__)

SAMPLER_CHOICES = ["auto"] + [kind.value for kind in SamplerKind]


def register_sample_commands(cli):
    """Registers the sampling command."""

    @cli.command("sample")
    @model_option
    @click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of particles N")
    @click.option("--replicas", type=click.IntRange(min=1), default=1, show_default=True)
    @click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=None,
                  help="Base seed (defaults to the global --seed)")
    @click.option("--sampler", type=click.Choice(SAMPLER_CHOICES), default="auto", show_default=True)
    @click.option("--out", "out", type=click.Path(file_okay=False), default=None,
                  help="Directory for the replica files")
    @click.pass_obj
    @handle_errors
    def sample(app, model_path, n, replicas, seed, sampler, out):
        """Draw independent configurations and write one CSV per replica."""
        model = PersistenceService.load_model(model_path)
        base_seed = app.seed if seed is None else seed
        kind = None if sampler == "auto" else SamplerKind(sampler)
        params = McmcParams.from_config(app.config)
        directory = out or os.path.join(app.out_dir, f"{model.tag}-n{n}")
        os.makedirs(directory, exist_ok=True)

        for replica in range(replicas):
            replica_seed = derive_seed(base_seed, n, 0, replica)
            x = SamplingService.sample(model, n, replica_seed, kind, params)
            path = os.path.join(directory, PersistenceService.configuration_name(x, replica))
            PersistenceService.save_configuration(x, path)
            logger.info(f"Replica {replica} ({x.sampler.value}, seed {replica_seed}) written to {path}")
        click.echo(f"{replicas} configuration(s) written to {directory}")
