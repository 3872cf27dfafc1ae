from .quadrature import (
    gauss_legendre,
    gauss_chebyshev,
    chebyshev_nodes,
    trapezoid_theta,
    tensor_gauss
)
from .seeding import derive_seed, generator, replica_key

__all__ = [
    'gauss_legendre', 'gauss_chebyshev', 'chebyshev_nodes', 'trapezoid_theta',
    'tensor_gauss', 'derive_seed', 'generator', 'replica_key'
]
