import click

from ..errors import DomainError
from ..models.ensemble import InvariantModel
from ..models.spacing import IntervalMode, IntervalSpec
from ..services import EquilibriumService, KernelService, PersistenceService
from .base import handle_errors, model_option


def register_universality_commands(cli):
    """Registers the sine-kernel universality check."""

    @cli.command("universality-check")
    @model_option
    @click.option("--n", "sizes", type=click.IntRange(min=2), multiple=True, required=True,
                  help="Matrix size N (repeatable)")
    @click.option("--interval", default="q:0.25,0.75", show_default=True, help="q:<lo>,<hi>")
    @click.option("--grid", type=click.IntRange(min=2), default=64, show_default=True)
    @click.option("--out", type=click.Path(dir_okay=False), default=None)
    @click.pass_obj
    @handle_errors
    def universality_check(app, model_path, sizes, interval, grid, out):
        """Sup error between the unfolded Christoffel-Darboux kernel and the sine kernel."""
        model = PersistenceService.load_model(model_path)
        if not isinstance(model, InvariantModel):
            raise DomainError("the kernel check applies to invariant ensembles only")
        spec = IntervalSpec.parse(interval)
        if spec.mode is not IntervalMode.QUANTILE_WINDOW:
            raise DomainError("the kernel check needs a q:<lo>,<hi> interval")
        measure = EquilibriumService.build_measure(model.v)

        rows = []
        for n in sizes:
            table = KernelService.recurrence_coefficients(
                model.v, model.f, n, quad_points=app.config.STIELTJES_QUAD_POINTS
            )
            error = KernelService.unfolded_kernel_error(table, measure, (spec.lower * n, spec.upper * n), grid)
            rows.append((n, error))
            click.echo(f"N = {n}: sup error {error:.6e}")

        path = app.output_path(out, f"{model.tag}-universality.csv")
        PersistenceService.save_report(path, "universality-report", ("N", "sup_error"), rows,
                                       model_tag=model.tag, interval=spec.label, grid=grid)
        click.echo(f"report written to {path}")
