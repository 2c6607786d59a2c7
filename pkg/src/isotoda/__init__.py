"""
isotoda - isospectral spaces of periodic tridiagonal Hermitian matrices.

This package computes the spectral invariants, the Toda flow, monodromy
and forbidden zones of periodic Jacobi matrices, the permutohedral
subdivision of the torus and the Betti numbers of isospectral spaces.
"""

__version__ = "0.1.0"
__author__ = "isotoda contributors"
__license__ = "MIT"
__description__ = "Isospectral periodic tridiagonal matrices, Toda flow and their topology"

# Package metadata
__all__ = [
    "__version__",
    "__author__",
    "__license__",
    "__description__",
]

# Import main components for easy access
try:
    from .config import ConfigurationManager
    from .homology import betti_table, diagnostics
    from .models import PeriodicJacobi, RunConfig, Spectrum, TorusElement
    from .schrodinger import forbidden_zones, monodromy
    from .spectrum import analyze, bset_contains
    from .tiling import build_complex, dual_poset_stats
    from .toda import integrate

    __all__.extend([
        "ConfigurationManager",
        "PeriodicJacobi",
        "RunConfig",
        "Spectrum",
        "TorusElement",
        "analyze",
        "betti_table",
        "bset_contains",
        "build_complex",
        "diagnostics",
        "dual_poset_stats",
        "forbidden_zones",
        "integrate",
        "monodromy",
    ])

except ImportError:
    # Handle import errors gracefully during package installation
    pass
