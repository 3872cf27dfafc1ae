from .potential import Potential, PotentialKind, Interaction
from .ensemble import InvariantModel, RepulsiveModel, EnsembleModel, ModelKind
from .configuration import Configuration, McmcParams, SamplerKind
from .measure import EquilibriumMeasure, FixedPointReport
from .gaudin_table import GaudinTable, TABLE_FORMAT_VERSION
from .spacing import IntervalSpec, IntervalMode, EmpiricalCDF, Normalization
from .recurrence import RecurrenceTable
from .study import StudyConfig, StudyRow, IntensityRow, RateFit, GaudinParams
from .potential_helpers import (
    AssumptionReport,
    eval_potential,
    eval_interaction,
    check_assumptions,
    check_repulsive_assumptions
)

__all__ = [
    'Potential', 'PotentialKind', 'Interaction', 'InvariantModel', 'RepulsiveModel',
    'EnsembleModel', 'ModelKind', 'Configuration', 'McmcParams', 'SamplerKind',
    'EquilibriumMeasure', 'FixedPointReport', 'GaudinTable', 'TABLE_FORMAT_VERSION', 'IntervalSpec',
    'IntervalMode', 'EmpiricalCDF', 'Normalization', 'RecurrenceTable', 'StudyConfig',
    'StudyRow', 'IntensityRow', 'RateFit', 'GaudinParams', 'AssumptionReport',
    'eval_potential', 'eval_interaction', 'check_assumptions', 'check_repulsive_assumptions'
]
