from .equilibrium_service import EquilibriumService
from .sampling_service import SamplingService
from .gaudin_service import GaudinService
from .spacing_service import SpacingService
from .kernel_service import KernelService
from .persistence_service import PersistenceService
from .study_service import StudyService

__all__ = [
    'EquilibriumService',
    'SamplingService',
    'GaudinService',
    'SpacingService',
    'KernelService',
    'PersistenceService',
    'StudyService'
]
