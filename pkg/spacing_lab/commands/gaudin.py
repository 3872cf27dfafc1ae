import click

from ..services import GaudinService, PersistenceService
from .base import handle_errors


def register_gaudin_commands(cli):
    """Registers the Gaudin table command."""

    @cli.command("gaudin-table")
    @click.option("--smax", type=float, default=None, help="Largest spacing (default 5)")
    @click.option("--step", type=float, default=None, help="Grid step (default 0.005)")
    @click.option("--order", type=click.IntRange(min=4), default=None, help="Gauss-Legendre order (default 40)")
    @click.option("--out", type=click.Path(dir_okay=False), default=None)
    @click.pass_obj
    @handle_errors
    def gaudin_table(app, smax, step, order, out):
        """Tabulate the gap probability E(s) and the Gaudin CDF G(s)."""
        config = app.config
        smax = smax or config.GAUDIN_SMAX
        step = step or config.GAUDIN_STEP
        order = order or config.GAUDIN_ORDER
        table = GaudinService.build_gaudin_table(smax, step, order, threads=app.threads)
        path = app.output_path(out, PersistenceService.gaudin_cache_name(smax, step, order))
        PersistenceService.save_gaudin_table(table, path)
        click.echo(f"{table.s_grid.size} nodes written to {path}")
