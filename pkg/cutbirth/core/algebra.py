"""
Laurent-series algebra at infinity for hyperelliptic square roots.

The resolvent of a matrix model with support on s cuts has the form
W = (V' - M * sqrt(sigma)) / 2 with sigma(z) = prod(z - x_i). Everything the
endpoint conditions need is read off the expansion of these objects at
z = +infinity, which this module computes exactly up to a truncation depth.

Classes
-------
Poly
    Immutable real polynomial, coefficients lowest degree first.
LaurentTail
    Truncated Laurent expansion at infinity.

Functions
---------
sqrt_sigma_series(endpoints, order) -> LaurentTail
    Expansion of sqrt(prod(z - x_i)) on the branch positive for large real z.
polynomial_part(vprime, endpoints, order) -> (Poly, LaurentTail)
    Split V'/sqrt(sigma) into its polynomial part M and the decaying rest.
resolvent_tail(vprime, endpoints, order) -> (Poly, LaurentTail)
    M together with the expansion of V' - M * sqrt(sigma).
"""
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P

from cutbirth.core.default.constants import SERIES_PADDING
from cutbirth.core.errors import InsufficientOrder, NonIncreasingEndpoints

Number = Union[int, float]


def _trim(coeffs: Iterable[float]) -> Tuple[float, ...]:
    values = [float(c) for c in coeffs]
    while len(values) > 1 and values[-1] == 0.0:
        values.pop()
    return tuple(values) if values else (0.0,)


@dataclass(frozen=True)
class Poly:
    """
    Real polynomial c_0 + c_1 x + ... + c_d x^d.

    Trailing zero coefficients are dropped on construction, so the last
    coefficient is nonzero unless the polynomial is identically zero, in which
    case `coeffs == (0.0,)` and the degree is reported as 0.

    Attributes
    ----------
    coeffs : tuple of float
        Coefficients, lowest degree first.
    """

    coeffs: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def zero(cls) -> "Poly":
        return cls((0.0,))

    @classmethod
    def from_roots(cls, roots: Sequence[float], lead: float = 1.0) -> "Poly":
        return cls(tuple(lead * P.polyfromroots(roots)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    @property
    def norm(self) -> float:
        """Largest coefficient magnitude."""
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, x):
        return P.polyval(x, self.coeffs)

    def deriv(self, m: int = 1) -> "Poly":
        return Poly(tuple(P.polyder(self.coeffs, m)))

    def integ(self) -> "Poly":
        return Poly(tuple(P.polyint(self.coeffs)))

    def __add__(self, other: Union["Poly", Number]) -> "Poly":
        return Poly(tuple(P.polyadd(self.coeffs, _coeffs_of(other))))

    def __sub__(self, other: Union["Poly", Number]) -> "Poly":
        return Poly(tuple(P.polysub(self.coeffs, _coeffs_of(other))))

    def __mul__(self, other: Union["Poly", Number]) -> "Poly":
        return Poly(tuple(P.polymul(self.coeffs, _coeffs_of(other))))

    __rmul__ = __mul__

    def shifted(self, s: float) -> "Poly":
        """Return the polynomial x -> p(x - s)."""
        composed = Polynomial(self.coeffs)(Polynomial([-s, 1.0]))
        return Poly(tuple(composed.coef))

    def real_roots(self, tol: float = 1e-8) -> Tuple[float, ...]:
        """Real roots in increasing order; complex pairs with tiny imaginary part count as real."""
        if self.degree < 1:
            return ()
        roots = P.polyroots(self.coeffs)
        real = [
            float(r.real) for r in np.atleast_1d(roots) if abs(r.imag) <= tol * (1.0 + abs(r.real))
        ]
        return tuple(sorted(real))

    def deflate(self, root: float, times: int = 1) -> Tuple["Poly", Tuple[float, ...]]:
        """
        Divide by (x - root) `times` times using synthetic division.

        Returns
        -------
        tuple
            The quotient and the remainders produced at each division.
        """
        quotient = list(self.coeffs)
        remainders = []
        for _ in range(times):
            if len(quotient) == 1:
                remainders.append(quotient[0])
                quotient = [0.0]
                continue
            # Horner from the top coefficient down
            degree = len(quotient) - 1
            out = [0.0] * degree
            carry = 0.0
            for k in range(degree, 0, -1):
                carry = quotient[k] + carry * root
                out[k - 1] = carry
            remainders.append(quotient[0] + carry * root)
            quotient = out
        return Poly(tuple(quotient)), tuple(remainders)


def _coeffs_of(value: Union[Poly, Number]) -> Tuple[float, ...]:
    if isinstance(value, Poly):
        return value.coeffs
    return (float(value),)


@dataclass(frozen=True)
class LaurentTail:
    """
    Truncated expansion sum_k coeffs[k] * z**(lead_exp - k) + O(z**(lead_exp - order)).

    Attributes
    ----------
    lead_exp : int
        Exponent of the first retained coefficient.
    coeffs : tuple of float
        Retained coefficients, highest exponent first.
    """

    lead_exp: int
    coeffs: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.coeffs:
            raise InsufficientOrder("a Laurent tail needs at least one coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def lowest_exp(self) -> int:
        """Smallest exponent whose coefficient is known."""
        return self.lead_exp - self.order + 1

    @classmethod
    def from_poly(cls, p: Poly, order: int) -> "LaurentTail":
        """Exact tail of a polynomial, zero-padded to at least `order` coefficients."""
        top_down = list(reversed(p.coeffs))
        top_down += [0.0] * max(0, order - len(top_down))
        return cls(p.degree, tuple(top_down))

    def coefficient(self, exp: int) -> float:
        if exp > self.lead_exp:
            return 0.0
        if exp < self.lowest_exp:
            raise InsufficientOrder(
                f"coefficient of z^{exp} lies beyond the truncation (lowest known z^{self.lowest_exp})"
            )
        return self.coeffs[self.lead_exp - exp]

    def __mul__(self, other: "LaurentTail") -> "LaurentTail":
        n = min(self.order, other.order)
        product = np.convolve(self.coeffs[:n], other.coeffs[:n])[:n]
        return LaurentTail(self.lead_exp + other.lead_exp, tuple(product))

    def _combine(self, other: "LaurentTail", sign: float) -> "LaurentTail":
        lead = max(self.lead_exp, other.lead_exp)
        lowest = max(self.lowest_exp, other.lowest_exp)
        coeffs = []
        for exp in range(lead, lowest - 1, -1):
            mine = self.coefficient(exp) if exp >= self.lowest_exp else 0.0
            theirs = other.coefficient(exp) if exp >= other.lowest_exp else 0.0
            coeffs.append(mine + sign * theirs)
        return LaurentTail(lead, tuple(coeffs))

    def __add__(self, other: "LaurentTail") -> "LaurentTail":
        return self._combine(other, 1.0)

    def __sub__(self, other: "LaurentTail") -> "LaurentTail":
        return self._combine(other, -1.0)

    def evaluate(self, z: float, max_exp: Optional[int] = None) -> float:
        """Sum of the retained terms with exponent at most `max_exp` (all of them by default)."""
        top = self.lead_exp if max_exp is None else min(max_exp, self.lead_exp)
        return float(
            sum(self.coefficient(exp) * z**exp for exp in range(top, self.lowest_exp - 1, -1))
        )


def check_endpoints(endpoints: Sequence[float]) -> np.ndarray:
    """Validate a sorted endpoint list with one or two cuts and return it as an array."""
    x = np.asarray(endpoints, dtype=float)
    if x.ndim != 1 or x.size not in (2, 4):
        raise NonIncreasingEndpoints(
            f"expected 2 or 4 endpoints (one or two cuts), got {x.size}"
        )
    if not np.all(np.diff(x) > 0):
        raise NonIncreasingEndpoints(f"endpoints {tuple(x)} are not strictly increasing")
    return x


def sqrt_sigma_series(endpoints: Sequence[float], order: int) -> LaurentTail:
    """
    Expand sqrt(prod_i (z - x_i)) at z = +infinity.

    Writes the product as z**(2s) * prod(1 - x_i u) with u = 1/z and takes the
    power-series square root with constant term 1, which selects the branch
    positive for real z beyond the last endpoint.

    Parameters
    ----------
    endpoints : sequence of float
        Strictly increasing endpoints x_1 < ... < x_2s.
    order : int
        Number of coefficients to return.

    Returns
    -------
    LaurentTail
        Tail with lead exponent s.
    """
    x = check_endpoints(endpoints)
    if order < 1:
        raise InsufficientOrder("order must be at least 1")
    poly_u = np.array([1.0])
    for xi in x:
        poly_u = P.polymul(poly_u, [1.0, -xi])
    p = np.zeros(order)
    n_known = min(order, poly_u.size)
    p[:n_known] = poly_u[:n_known]

    g = np.zeros(order)
    g[0] = 1.0
    for n in range(1, order):
        g[n] = 0.5 * (p[n] - np.dot(g[1:n], g[n - 1 : 0 : -1]))
    return LaurentTail(x.size // 2, tuple(g))


def _reciprocal(series: Sequence[float]) -> np.ndarray:
    """Power-series reciprocal of a series with constant term 1."""
    g = np.asarray(series, dtype=float)
    h = np.zeros_like(g)
    h[0] = 1.0
    for n in range(1, g.size):
        h[n] = -np.dot(g[1 : n + 1], h[n - 1 :: -1])
    return h


def polynomial_part(
    vprime: Poly, endpoints: Sequence[float], order: Optional[int] = None
) -> Tuple[Poly, LaurentTail]:
    """
    Split V'(z)/sqrt(sigma(z)) into its polynomial part and the O(1/z) remainder.

    Parameters
    ----------
    vprime : Poly
        Derivative of the potential.
    endpoints : sequence of float
        Sorted cut endpoints.
    order : int, optional
        Truncation depth, default deg(V') + 8.

    Returns
    -------
    tuple of (Poly, LaurentTail)
        M with deg(M) = deg(V') - s (zero when deg(V') < s), and the remainder
        tail starting at z^-1.

    Raises
    ------
    InsufficientOrder
        If fewer than deg(V') + 2 coefficients are requested.
    """
    d = vprime.degree
    order = d + SERIES_PADDING if order is None else order
    if order < d + 2:
        raise InsufficientOrder(
            f"order {order} cannot resolve M for deg(V') = {d}; need at least {d + 2}"
        )
    root = sqrt_sigma_series(endpoints, order)
    inverse = LaurentTail(-root.lead_exp, tuple(_reciprocal(root.coeffs)))
    quotient = LaurentTail.from_poly(vprime, order) * inverse

    n_nonneg = max(0, quotient.lead_exp + 1)
    if n_nonneg:
        M = Poly(tuple(reversed(quotient.coeffs[:n_nonneg])))
        remainder = LaurentTail(-1, quotient.coeffs[n_nonneg:])
    else:
        M = Poly.zero()
        padding = (0.0,) * (-1 - quotient.lead_exp)
        remainder = LaurentTail(-1, padding + quotient.coeffs)
    return M, remainder


def resolvent_tail(
    vprime: Poly, endpoints: Sequence[float], order: Optional[int] = None
) -> Tuple[Poly, LaurentTail]:
    """
    Return M and the expansion of V' - M * sqrt(sigma), which equals 2 W(z).

    The tail starts at z^deg(V') and is exact through z^-1 at the default depth.
    """
    order = vprime.degree + SERIES_PADDING if order is None else order
    M, _ = polynomial_part(vprime, endpoints, order)
    root = sqrt_sigma_series(endpoints, order)
    product = LaurentTail.from_poly(M, order) * root
    return M, LaurentTail.from_poly(vprime, order) - product
