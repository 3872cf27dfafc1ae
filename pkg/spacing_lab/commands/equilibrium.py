import json
import logging

import click

from ..models.ensemble import InvariantModel
from ..models.potential_helpers import check_assumptions, check_repulsive_assumptions
from ..services import EquilibriumService, PersistenceService
from .base import handle_errors, model_option

logger = logging.getLogger(__name__)


def register_equilibrium_commands(cli):
    """Registers the equilibrium measure and model check commands."""

    @cli.command("equilibrium")
    @model_option
    @click.option("--nodes", type=click.IntRange(min=2), default=None, help="Chebyshev nodes (default 256)")
    @click.option("--tol", type=float, default=None, help="Endpoint tolerance (default 1e-10)")
    @click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV with columns t, density, cdf")
    @click.pass_obj
    @handle_errors
    def equilibrium(app, model_path, nodes, tol, out):
        """Compute the limiting measure of a model and write its density and CDF."""
        config = app.config
        model = PersistenceService.load_model(model_path)
        nodes = nodes or config.EQUILIBRIUM_NODES
        tol = tol or config.EQUILIBRIUM_TOL
        if isinstance(model, InvariantModel):
            measure = EquilibriumService.build_measure(
                model.v, n_nodes=nodes, tol=tol,
                quad_points=config.DENSITY_QUAD_POINTS, theta_points=config.MRS_THETA_POINTS
            )
        else:
            _, measure, report = EquilibriumService.repulsive_fixed_point(
                model.q, model.h,
                damping=config.FIXED_POINT_DAMPING,
                tol=config.FIXED_POINT_TOL,
                max_iter=config.FIXED_POINT_MAX_ITER,
                degree=config.FIXED_POINT_DEGREE,
                quad_points=config.FIXED_POINT_QUAD_POINTS,
                n_nodes=nodes,
                measure_tol=tol
            )
            click.echo(f"fixed point: {report.iterations} iterations, residual {report.final_residual:.3e}, "
                       f"fit residual {report.fit_residual:.3e}")
        path = app.output_path(out, f"{model.tag}-equilibrium.csv")
        PersistenceService.save_measure(measure, path)
        click.echo(f"support [{measure.a!r}, {measure.b!r}] written to {path}")

    @cli.command("check-model")
    @model_option
    @click.option("--grid-radius", type=float, default=20.0, show_default=True)
    @click.option("--grid-points", type=click.IntRange(min=2), default=10_000, show_default=True)
    @click.pass_obj
    @handle_errors
    def check_model(app, model_path, grid_radius, grid_points):
        """Print the convexity and confinement report of a model."""
        model = PersistenceService.load_model(model_path)
        if isinstance(model, InvariantModel):
            report = check_assumptions(model.v, grid_radius, grid_points, f=model.f)
        else:
            report = check_repulsive_assumptions(model.q, model.h, grid_radius, grid_points)
        click.echo(json.dumps(report.as_dict(), indent=2))
        if not report.passed:
            raise click.ClickException(f"model '{model.tag}' fails the standing assumptions")
