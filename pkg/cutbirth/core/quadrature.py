"""
Quadrature primitives for densities with square-root edges and logarithmic kernels.

All rules are fixed-node Gauss-Legendre rules, so results are deterministic and
smooth in the endpoints (finite-difference derivatives of them stay clean).
Endpoint singularities of the form sqrt(t - x_i) or log|t - x| are removed by
splitting at the singular point and substituting t = end +/- u**2 on each
half panel.

Classes
-------
DensityData
    Density rho = M * Im sqrt(sigma(x + i0)) / (2 pi) on one or two cuts.

Functions
---------
sqrt_sigma_boundary(x, endpoints)
    Boundary value of sqrt(sigma) from the upper half-plane.
cut_quadrature(p, left, right)
    Integral of p(t) * sqrt((t - left)(right - t)) over [left, right].
gap_quadrature(m, endpoints, start, stop)
    Integral of m(t) * sqrt(sigma(t)) across a gap or the exterior.
log_potential(x, density)
    Logarithmic potential U(x) = int log|x - y| rho(y) dy.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Tuple

import numpy as np

from cutbirth.core.algebra import Poly, check_endpoints
from cutbirth.core.default.constants import QUADRATURE_NODES
from cutbirth.core.errors import EmptyInterval, IntervalCrossesCut

# i**k for k endpoints to the right of x
_PHASES = np.array([1.0, 1.0j, -1.0, -1.0j])


@lru_cache(maxsize=None)
def gauss_legendre(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def sqrt_sigma_boundary(x, endpoints: Sequence[float]):
    """
    Evaluate sqrt(prod(x - x_i)) as the limit from the upper half-plane.

    Each endpoint to the right of x contributes a factor i, so the value is
    real on gaps and the exterior (positive beyond the last endpoint) and
    purely imaginary inside cuts.
    """
    e = np.asarray(endpoints, dtype=float)
    t = np.asarray(x, dtype=float)
    diffs = t[..., None] - e
    right_of = np.count_nonzero(diffs < 0.0, axis=-1)
    modulus = np.sqrt(np.abs(np.prod(diffs, axis=-1)))
    value = _PHASES[right_of % 4] * modulus
    return value[()] if value.ndim == 0 else value


def _anchored_offsets(p: float, q: float, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = gauss_legendre(nodes)
    reach = np.sqrt(0.5 * (q - p))
    u = 0.5 * reach * (x + 1.0)
    return u * u, 0.5 * reach * w * 2.0 * u


def anchored_rule(p: float, q: float, nodes: int = QUADRATURE_NODES) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes and weights on [p, q] graded towards both ends.

    The panel is split at its midpoint; each half uses t = end +/- u**2, which
    turns sqrt and log singularities sitting at p or q into smooth or
    mildly singular integrands in u.
    """
    squares, wu = _anchored_offsets(p, q, nodes)
    return np.concatenate([p + squares, q - squares]), np.concatenate([wu, wu])


def log_distance_rule(
    breaks: Sequence[float], x: float, nodes: int = QUADRATURE_NODES
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Panel rule over `breaks` together with log|x - t| at every node.

    The distance is taken as (end - x) +/- u**2 from the panel end, never as
    x - t, so nodes within rounding of x keep a finite logarithm.
    """
    ts, ws, logs = [], [], []
    for p, q in zip(breaks, breaks[1:]):
        if not q > p:
            continue
        squares, wu = _anchored_offsets(p, q, nodes)
        ts += [p + squares, q - squares]
        ws += [wu, wu]
        logs += [np.log(np.abs((p - x) + squares)), np.log(np.abs((q - x) - squares))]
    if not ts:
        return np.zeros(0), np.zeros(0), np.zeros(0)
    return np.concatenate(ts), np.concatenate(ws), np.concatenate(logs)


def panel_rule(breaks: Iterable[float], nodes: int = QUADRATURE_NODES) -> Tuple[np.ndarray, np.ndarray]:
    """Concatenate anchored rules over consecutive break points."""
    points = list(breaks)
    parts = [anchored_rule(p, q, nodes) for p, q in zip(points, points[1:]) if q > p]
    if not parts:
        return np.zeros(0), np.zeros(0)
    return np.concatenate([t for t, _ in parts]), np.concatenate([w for _, w in parts])


def cut_quadrature(p: Poly, left: float, right: float, nodes: int = QUADRATURE_NODES) -> float:
    """
    Integrate p(t) * sqrt((t - left)(right - t)) over [left, right].

    Uses t = mid + half * cos(theta), which maps the weight to sin(theta)**2.
    """
    if not left < right:
        raise EmptyInterval(f"empty interval [{left}, {right}]")
    mid, half = 0.5 * (left + right), 0.5 * (right - left)
    x, w = gauss_legendre(nodes)
    theta = 0.5 * np.pi * (x + 1.0)
    weights = 0.5 * np.pi * w
    values = p(mid + half * np.cos(theta)) * np.sin(theta) ** 2
    return float(half * half * np.dot(weights, values))


def _check_outside_cuts(endpoints: np.ndarray, lo: float, hi: float) -> None:
    for left, right in zip(endpoints[0::2], endpoints[1::2]):
        if max(lo, left) < min(hi, right):
            raise IntervalCrossesCut(
                f"[{lo:.6g}, {hi:.6g}] overlaps the cut ({left:.6g}, {right:.6g})"
            )


def gap_quadrature(
    m: Poly,
    endpoints: Sequence[float],
    start: float,
    stop: float,
    nodes: int = QUADRATURE_NODES,
) -> float:
    """
    Integrate m(t) * sqrt(sigma(t)) from `start` to `stop` off the support.

    Parameters
    ----------
    m : Poly
        Polynomial factor.
    endpoints : sequence of float
        Sorted cut endpoints.
    start, stop : float
        Integration limits; the interval between them must not meet a cut interior.

    Returns
    -------
    float
        Signed integral, negative when stop < start.
    """
    e = check_endpoints(endpoints)
    if start == stop:
        return 0.0
    lo, hi = min(start, stop), max(start, stop)
    _check_outside_cuts(e, lo, hi)
    t, w = anchored_rule(lo, hi, nodes)
    value = float(np.dot(w, m(t) * np.real(sqrt_sigma_boundary(t, e))))
    return value if start < stop else -value


@dataclass(frozen=True)
class DensityData:
    """
    Density rho(x) = M(x) * Im sqrt(sigma(x + i0)) / (2 pi) on the cuts of `endpoints`.

    Attributes
    ----------
    M : Poly
        Moment polynomial.
    endpoints : tuple of float
        Sorted cut endpoints (two or four).
    """

    M: Poly
    endpoints: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "endpoints", tuple(float(x) for x in check_endpoints(self.endpoints)))

    @property
    def cuts(self) -> Tuple[Tuple[float, float], ...]:
        e = self.endpoints
        return tuple((e[i], e[i + 1]) for i in range(0, len(e), 2))

    def __call__(self, x):
        return self.M(x) * np.imag(sqrt_sigma_boundary(x, self.endpoints)) / (2.0 * np.pi)

    def integrate(
        self,
        f: Callable[[np.ndarray], np.ndarray],
        left: float,
        right: float,
        split_at: Sequence[float] = (),
        nodes: int = QUADRATURE_NODES,
    ) -> float:
        """Integrate f(t) * rho(t) over [left, right], splitting at interior singular points."""
        inner = sorted(s for s in split_at if left < s < right)
        t, w = panel_rule([left, *inner, right], nodes)
        if t.size == 0:
            return 0.0
        return float(np.dot(w, f(t) * self(t)))

    def cut_masses(self, nodes: int = QUADRATURE_NODES) -> Tuple[float, ...]:
        return tuple(
            self.integrate(np.ones_like, left, right, nodes=nodes) for left, right in self.cuts
        )


def log_potential(x: float, density: DensityData, nodes: int = QUADRATURE_NODES) -> float:
    """
    Return U(x) = int log|x - y| rho(y) dy.

    A cut containing x is split there, so the logarithmic point is always a
    panel end and receives the u**2 grading.
    """
    parts = [
        log_distance_rule([left, x, right] if left < x < right else [left, right], x, nodes)
        for left, right in density.cuts
    ]
    t = np.concatenate([p[0] for p in parts])
    w = np.concatenate([p[1] for p in parts])
    logs = np.concatenate([p[2] for p in parts])
    return float(np.dot(w, density(t) * logs))
