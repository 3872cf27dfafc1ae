from .sample import register_sample_commands
from .equilibrium import register_equilibrium_commands
from .gaudin import register_gaudin_commands
from .spacings import register_spacing_commands
from .universality import register_universality_commands
from .study import register_study_commands

__all__ = [
    'register_sample_commands',
    'register_equilibrium_commands',
    'register_gaudin_commands',
    'register_spacing_commands',
    'register_universality_commands',
    'register_study_commands'
]
