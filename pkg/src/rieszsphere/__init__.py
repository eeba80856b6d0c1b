"""Riesz potentials and signed equilibria on spheres in the field of a point charge.

Submodules:

* ``specfun``: hypergeometric, incomplete beta and elliptic routines
* ``potential``: potential of the normalized surface measure
* ``sphere_equilibrium``: signed equilibria and critical source distances
* ``gonchar_poly``: the polynomial families behind the critical distances
* ``cap_equilibrium``: signed and extremal equilibria on spherical caps
* ``cli``: the ``rieszsphere`` command
"""
from .errors import (DomainError, NoConvergence, NoSignChange, RieszError, SolverFailure)
from .potential import LOG, RieszParams, potential_sigma, riesz_energy
from .sphere_equilibrium import (CriticalKind, FieldConfig, critical_distance, critical_distance_log,
                                 signed_density)
from .gonchar_poly import PolyKind, build_poly, roots
from .cap_equilibrium import CapConfig, solve_tc, solve_tc_exceptional

__version__ = "0.1.0"
