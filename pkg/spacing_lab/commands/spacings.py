import logging

import click

from ..errors import NoSpacingsError
from ..models.configuration import SamplerKind
from ..models.spacing import IntervalMode, IntervalSpec
from ..services import EquilibriumService, GaudinService, PersistenceService, SpacingService
from .base import handle_errors, model_option

logger = logging.getLogger(__name__)

HEADER = ("replica_id", "n_spacings", "ks_distance", "wigner_distance")


def register_spacing_commands(cli):
    """Registers the spacing statistics command."""

    @cli.command("spacings")
    @click.option("--in", "in_dir", required=True, type=click.Path(exists=True, file_okay=False),
                  help="Directory of configuration files")
    @model_option
    @click.option("--interval", default="full", show_default=True, help="full | q:<lo>,<hi> | loc:<a>,<t>")
    @click.option("--gaudin", "gaudin_path", type=click.Path(exists=True, dir_okay=False), default=None,
                  help="Gaudin table file (built or read from the cache otherwise)")
    @click.option("--out", type=click.Path(dir_okay=False), default=None)
    @click.pass_obj
    @handle_errors
    def spacings(app, in_dir, model_path, interval, gaudin_path, out):
        """Kolmogorov distance to the Gaudin law for every stored configuration."""
        config = app.config
        model = PersistenceService.load_model(model_path)
        spec = IntervalSpec.parse(interval)
        if gaudin_path:
            table = PersistenceService.load_gaudin_table(gaudin_path)
        else:
            table = GaudinService.load_or_build_table(
                config.GAUDIN_SMAX, config.GAUDIN_STEP, config.GAUDIN_ORDER,
                config.GAUDIN_CACHE_DIR, app.threads
            )

        configurations = PersistenceService.load_configurations(in_dir)
        needs_measure = any(x.sampler is not SamplerKind.CUE and not x.unfolded for _, x in configurations)
        measure = EquilibriumService.measure_for(model, config) if needs_measure or spec.mode is IntervalMode.LOCALIZED else None

        rows = []
        for name, x in configurations:
            gaps, length = SpacingService.observe(x, spec, measure)
            try:
                cdf = SpacingService.empirical_spacing_cdf(gaps)
            except NoSpacingsError:
                logger.warning(f"{name}: no spacings in {spec.label}")
                rows.append((name, 0, float("nan"), float("nan")))
                continue
            rows.append((name, cdf.n, SpacingService.kolmogorov_distance(cdf, table),
                         SpacingService.wigner_distance(cdf)))

        path = app.output_path(out, f"{model.tag}-spacings.csv")
        PersistenceService.save_report(path, "spacings-report", HEADER, rows,
                                       model_tag=model.tag, interval=spec.label)
        click.echo(f"{len(rows)} replica(s) evaluated, report written to {path}")
