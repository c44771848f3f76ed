"""
Module defining numeric defaults used throughout the library.

Constants
---------
QUADRATURE_NODES : int
    Gauss-Legendre nodes per quadrature panel.
SERIES_PADDING : int
    Laurent coefficients retained beyond deg(V').
SOLVER_TOLERANCE : float
    Residual norm at which the endpoint Newton iteration stops.
MAX_NEWTON_ITERATIONS : int
    Iteration cap of the endpoint solver.
JACOBIAN_STEP : float
    Relative forward-difference step of the numerical Jacobian.
MIN_GAP_WIDTH : float
    Smallest distance allowed between consecutive endpoints.
DENSITY_FLOOR : float
    Density values below this count as negative.
FERMI_CONSISTENCY : float
    Largest admissible spread of the Fermi level between cuts.
TAIL_REACH : float
    Multiple of the largest endpoint modulus beyond which W is summed from its Laurent tail.
TAIL_TERMS : int
    Negative powers kept in that sum.
"""
QUADRATURE_NODES = 128
SERIES_PADDING = 8

SOLVER_TOLERANCE = 1e-10
MAX_NEWTON_ITERATIONS = 60
MAX_STEP_HALVINGS = 40
JACOBIAN_STEP = 1e-7
MIN_GAP_WIDTH = 1e-12

DENSITY_FLOOR = -1e-10
GAP_FLOOR = -1e-10
DENSITY_SAMPLES = 257
FERMI_CONSISTENCY = 1e-6

TAIL_REACH = 10.0
TAIL_TERMS = 24

CRITICAL_TOLERANCE = 1e-10
BISECTION_RATIO = 1e-3
MAX_BISECTIONS = 80
NU_TOLERANCE = 1e-6

FIRST_CONTINUATION_STEP = 1e-4
CONTINUATION_RELATIVE_STEP = 0.01
BIRTH_WIDTH_FRACTION = 0.05
SEED_WIDTH_FACTORS = (1.0, 0.5, 2.0, 0.25)

WINDOW_FRACTION = 0.08
POINTS_PER_SIDE = 12
NEAREST_GRID_FRACTION = 1.0 / 32.0
WIDTH_SCALING_RANGE = 1.1

GAS_TOLERANCE = 1e-9
GAS_MAX_ITERATIONS = 200
GAS_ENERGY_SLACK = 1e-12
GAS_COLLISION_DISTANCE = 1e-12

DEFAULT_BRACKET = (0.05, 5.0)
