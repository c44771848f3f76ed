# Convenience imports for interactive use

from cutbirth.core.criticality import find_critical_temperature
from cutbirth.core.equilibrium import Potential, solve_endpoints
