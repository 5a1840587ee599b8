"""Odd Chebyshev approximations of the sign function on a gapped domain.

Construction: Chebyshev interpolation of the smoothed sign erf(kappa*x),
with kappa chosen so the smoothing error on |x| >= delta_prime is half the
budget, and the interpolation degree from a fixed-point estimate of the
coefficient tail.  The interpolant is renormalized to |p| <= 1 and then
*certified* by dense evaluation on a theta-uniform grid (40 points per
Chebyshev oscillation); the certified sup error is what the polynomial
carries, not an analytic bound.

Degrees stay within DEGREE_BOUND_K * ln(2/eps) / delta_prime
(DEGREE_BOUND_K = 3; realized constants are near 1.6) and are hard-capped
at DEGREE_CAP.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.fft import dct, next_fast_len
from scipy.special import erf, erfcinv

from .errors import CapacityError, ParameterError

DEGREE_CAP = 200_000
DEGREE_BOUND_K = 3.0

try:
    import numba

    @numba.njit(cache=True)
    def _clenshaw(c, x):  # pragma: no cover - exercised via evaluate()
        n = x.size
        b0 = np.zeros(n)
        b1 = np.zeros(n)
        tx = 2.0 * x
        for k in range(c.size - 1, 0, -1):
            ck = c[k]
            for i in range(n):
                t = ck + tx[i] * b0[i] - b1[i]
                b1[i] = b0[i]
                b0[i] = t
        return c[0] + x * b0 - b1

except ImportError:  # pragma: no cover

    def _clenshaw(c, x):
        return np.polynomial.chebyshev.chebval(x, c)


@dataclass(frozen=True)
class ChebPoly:
    """Certified odd polynomial in the Chebyshev basis.

    ``coeffs`` holds the odd-index coefficients only (c_1, c_3, ..., c_l);
    even coefficients are identically zero.  ``sup_err`` is the grid-
    certified sup of |p - sign| on [-1, -target_gap] u [target_gap, 1].
    """

    degree: int
    coeffs: np.ndarray
    target_gap: float
    sup_err: float

    def full_coeffs(self) -> np.ndarray:
        c = np.zeros(self.degree + 1)
        c[1::2] = self.coeffs
        return c

    def evaluate(self, x) -> np.ndarray:
        """p(x) by the Clenshaw recurrence, vectorized over x."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return _clenshaw(self.full_coeffs(), np.ascontiguousarray(x))


def _theta_grid_values(full_coeffs: np.ndarray, npoints: int):
    """Evaluate the series at x_j = cos(pi*j/m) for a theta-uniform grid of
    at least ``npoints`` points, via a type-I DCT.  Returns (x, p(x))."""
    l = full_coeffs.size - 1
    m = next_fast_len(max(npoints, 2048), real=True)
    a = np.zeros(m + 1)
    a[0] = full_coeffs[0]
    a[1 : l + 1] = full_coeffs[1:] / 2.0
    vals = dct(a, type=1)
    xs = np.cos(np.pi * np.arange(m + 1) / m)
    return xs, vals


def _interp_erf_coeffs(kappa: float, degree: int) -> np.ndarray:
    """Chebyshev coefficients (degree+1 of them) interpolating erf(kappa*x)
    at first-kind Chebyshev points, odd part only."""
    n = degree + 1
    nodes = np.cos(np.pi * (np.arange(n) + 0.5) / n)
    c = dct(erf(kappa * nodes), type=2) / n
    c[0] /= 2.0
    c[0::2] = 0.0  # erf(kappa*x) is odd; make the even part exactly zero
    return c


def _odd_ceil(x: float) -> int:
    k = int(math.ceil(x))
    return k if k % 2 == 1 else k + 1


def sign_poly(delta_prime: float, eps_sgn: float) -> ChebPoly:
    """Certified sign approximation on [-1, -delta_prime] u [delta_prime, 1].

    Raises CapacityError when the required degree exceeds DEGREE_CAP.
    """
    if not 0.0 < delta_prime < 1.0:
        raise ParameterError(f"delta_prime must lie in (0, 1), got {delta_prime}")
    if not 0.0 < eps_sgn < 1.0:
        raise ParameterError(f"eps_sgn must lie in (0, 1), got {eps_sgn}")

    kappa = float(erfcinv(eps_sgn / 2.0)) / delta_prime
    # fixed point for the truncation degree of the erf interpolant
    l_est = 4.0 * kappa
    for _ in range(3):
        inner = max(math.log(8.0 * kappa**2 / (math.pi * l_est**2 * (eps_sgn / 2.0))), 1.0)
        l_est = 2.0 * kappa * math.sqrt(inner)
    degree = _odd_ceil(max(l_est, 3.0))
    if degree > DEGREE_CAP:
        raise CapacityError(
            f"sign polynomial needs degree ~{degree} > cap {DEGREE_CAP} "
            f"(delta_prime={delta_prime:g}, eps_sgn={eps_sgn:g})"
        )

    while True:
        c = _interp_erf_coeffs(kappa, degree)
        xs, vals = _theta_grid_values(c, 20 * degree)
        maxabs = float(np.max(np.abs(vals)))
        # the grid can undersample a ripple peak by ~0.3% of the ripple, so
        # renormalize with a margin to keep |p| <= 1 off-grid as well
        target = maxabs * (1.0 + 0.01 * eps_sgn)
        if target > 1.0:
            c = c / target
            vals = vals / target
        mask = np.abs(xs) >= delta_prime
        sup = float(np.max(np.abs(vals[mask] - np.sign(xs[mask]))))
        # the theta grid straddles +-delta_prime; pin the edges explicitly
        edge = _clenshaw(c, np.array([delta_prime, -delta_prime]))
        sup = max(sup, float(np.max(np.abs(edge - np.array([1.0, -1.0])))))
        if sup <= eps_sgn:
            return ChebPoly(
                degree=degree,
                coeffs=np.ascontiguousarray(c[1::2]),
                target_gap=float(delta_prime),
                sup_err=sup,
            )
        degree = _odd_ceil(degree * 1.25)
        if degree > DEGREE_CAP:
            raise CapacityError(
                f"sign polynomial failed to certify below degree cap {DEGREE_CAP} "
                f"(delta_prime={delta_prime:g}, eps_sgn={eps_sgn:g})"
            )


def quantize_gap_down(delta_prime: float, steps_per_octave: int = 4) -> float:
    """Round delta_prime down to a 2**(1/steps) lattice.

    A polynomial certified for the smaller gap is valid for the true one,
    and the lattice lets nearby requests share one cached polynomial.
    """
    q = math.floor(math.log2(delta_prime) * steps_per_octave)
    return float(2.0 ** (q / steps_per_octave))


@lru_cache(maxsize=64)
def sign_poly_cached(delta_prime: float, eps_sgn: float) -> ChebPoly:
    return sign_poly(delta_prime, eps_sgn)


# --- text serialization: "CHEB <degree> <delta_prime> <sup_err>" header and
# --- one stored (odd) coefficient per line


def dump_chebpoly(p: ChebPoly) -> str:
    out = io.StringIO()
    out.write(f"CHEB {p.degree} {p.target_gap:.17g} {p.sup_err:.17g}\n")
    for ck in p.coeffs:
        out.write(f"{ck:.17g}\n")
    return out.getvalue()


def load_chebpoly(text: str) -> ChebPoly:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 4 or head[0] != "CHEB":
        raise ParameterError("expected 'CHEB <degree> <delta_prime> <sup_err>' header")
    degree = int(head[1])
    coeffs = np.array([float(ln) for ln in lines[1:]])
    if coeffs.size != (degree + 1) // 2:
        raise ParameterError(
            f"expected {(degree + 1) // 2} coefficients for degree {degree}, got {coeffs.size}"
        )
    return ChebPoly(
        degree=degree,
        coeffs=coeffs,
        target_gap=float(head[2]),
        sup_err=float(head[3]),
    )
