import logging
import os

import click

from ..services import PersistenceService, StudyService
from .base import handle_errors

logger = logging.getLogger(__name__)


def _study_option(func):
    return click.option("--study", "study_path", required=True, type=click.Path(exists=True, dir_okay=False),
                        help="Study file (key = value lines)")(func)


def _out_option(func):
    return click.option("--out", type=click.Path(dir_okay=False), default=None, help="Report CSV path")(func)


def _load(app, study_path, out, suffix):
    config = PersistenceService.load_study(study_path, app.config)
    default_name = f"{config.model.tag}-{suffix}.csv"
    if out is None and config.output_dir:
        out = os.path.join(config.output_dir, default_name)
    path = app.output_path(out, default_name)
    table = StudyService.study_table(config, app.config.GAUDIN_CACHE_DIR, app.threads)
    return config, table, path


def register_study_commands(cli):
    """Registers the Monte Carlo study drivers."""

    @cli.command("convergence-study")
    @_study_option
    @_out_option
    @click.pass_obj
    @handle_errors
    def convergence_study(app, study_path, out):
        """Mean Kolmogorov distance to the Gaudin law per N and interval."""
        config, table, path = _load(app, study_path, out, "convergence")
        measure = StudyService.study_measure(config, app.config)
        rows = StudyService.run_convergence_study(config, table, app.threads, measure)
        for written in StudyService.write_convergence_report(rows, config, path):
            click.echo(f"written {written}")

    @cli.command("rate-study")
    @_study_option
    @_out_option
    @click.pass_obj
    @handle_errors
    def rate_study(app, study_path, out):
        """Log-log fit of the distance against the interval length for every N."""
        config, table, path = _load(app, study_path, out, "rate")
        measure = StudyService.study_measure(config, app.config)
        rows, fits = StudyService.run_rate_study(config, table, app.threads, app.config.RATE_FIT_MIN_R2, measure)
        StudyService.write_convergence_report(rows, config, path)
        fit_path = f"{os.path.splitext(path)[0]}-fit.csv"
        StudyService.write_rate_report(fits, config, fit_path)
        for n, fit in sorted(fits.items()):
            verdict = "conclusive" if fit.conclusive else "inconclusive"
            click.echo(f"N = {n}: slope {fit.slope:.4f}, r^2 {fit.r_squared:.3f} ({verdict})")
        click.echo(f"written {path} and {fit_path}")

    @cli.command("intensity-study")
    @_study_option
    @_out_option
    @click.pass_obj
    @handle_errors
    def intensity_study(app, study_path, out):
        """Distance of the replica-pooled spacing intensity to the Gaudin law."""
        config, table, path = _load(app, study_path, out, "intensity")
        measure = StudyService.study_measure(config, app.config)
        rows = StudyService.run_intensity_study(config, table, app.threads, app.config.INTENSITY_MIN_REPLICAS, measure)
        for written in StudyService.write_intensity_report(rows, config, path):
            click.echo(f"written {written}")
