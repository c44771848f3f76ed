"""
Named potentials, coefficients lowest degree first.

PRESETS
    birth-demo : V(x) = x^4/4 - (5/3) x^3 + 3 x^2, V'(x) = x (x - 2)(x - 3).
        Absolute minimum at 0, second well at 3 with V(3) = 9/4, barrier at 2
        with V(2) = 8/3. The reproduction target for the birth of a cut.
    gaussian : V(x) = x^2/2, the semicircle oracle.
"""
from typing import Dict, Tuple

PRESETS: Dict[str, Tuple[float, ...]] = {
    "birth-demo": (0.0, 0.0, 3.0, -5.0 / 3.0, 0.25),
    "gaussian": (0.0, 0.0, 0.5),
}
