"""Special functions: principal-branch dilogarithm, trigonometric bracket,
truncated q-Pochhammer products, and the asymptotic link between the two.

The dilogarithm uses the standard transformation strategy: a direct power
series on |z| <= 1/2, and reflection z -> 1-z / inversion z -> 1/z moves
into a region where the series in u = -log(1-w) converges geometrically
(|u| stays below 1.5 for every branch of the decision tree, against a
radius of 2*pi).  Absolute accuracy is well below 1e-12 for |z| <= 10.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction as Q
from typing import NamedTuple, Tuple

PI2_6 = math.pi * math.pi / 6.0

_N_LOG_COEFFS = 64


def _bernoulli_numbers(n: int):
    # u/(e^u - 1) generating-function convention, so B_1 = -1/2
    bern = [Q(0)] * (n + 1)
    bern[0] = Q(1)
    for m in range(1, n + 1):
        acc = Q(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * bern[k]
        bern[m] = -acc / (m + 1)
    return bern


# coefficients of Li2 as a series in u = -log(1-z): sum_n B_n u^(n+1)/(n+1)!
_LOG_COEFFS = tuple(
    float(b / (math.factorial(n + 1)))
    for n, b in enumerate(_bernoulli_numbers(_N_LOG_COEFFS))
)


def _dilog_power_series(z: complex) -> complex:
    # sum z^k / k^2, adequate for |z| <= 0.5
    zpow = z
    total = z
    for k in range(2, 200):
        zpow *= z
        term = zpow / (k * k)
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            break
    return total


def _dilog_log_series(u: complex) -> complex:
    # Li2 expressed through u = -log(1-z); geometric for |u| < 2*pi
    total = 0j
    upow = u
    for c in _LOG_COEFFS:
        if c != 0.0:
            term = c * upow
            total += term
            if abs(term) < 1e-18 * max(1.0, abs(total)):
                break
        upow *= u
    return total


def dilog(z: complex) -> complex:
    """Principal-branch Li2 with the cut along [1, oo).

    Real arguments greater than 1 are rejected; z = 1 returns pi^2/6.
    """
    z = complex(z)
    if z == 0:
        return 0j
    if z.imag == 0.0 and z.real == 1.0:
        return complex(PI2_6)
    if z.imag == 0.0 and z.real > 1.0:
        raise ValueError("dilog: %r lies on the branch cut [1, oo)" % (z,))

    norm2 = z.real * z.real + z.imag * z.imag
    if norm2 <= 0.25:
        return _dilog_power_series(z)

    if z.real <= 0.5:
        if norm2 > 1.0:
            # inversion into the unit disk
            lz = cmath.log(-z)
            return -_dilog_log_series(-cmath.log(1.0 - 1.0 / z)) - PI2_6 - 0.5 * lz * lz
        return _dilog_log_series(-cmath.log(1.0 - z))

    if norm2 <= 2.0 * z.real:
        # reflection z -> 1-z ( |1-z| <= 1 here )
        lz = cmath.log(z)
        return PI2_6 - lz * cmath.log(1.0 - z) - _dilog_log_series(-lz)

    lz = cmath.log(-z)
    return -_dilog_log_series(-cmath.log(1.0 - 1.0 / z)) - PI2_6 - 0.5 * lz * lz


def dilog_factorization_residual(z: complex, r: int) -> float:
    """|Li2(z^r) - r * sum_j Li2(w^j z)| over the r-th roots of unity w^j."""
    if r < 2:
        raise ValueError("factorization order must be at least 2")
    w = cmath.exp(2j * cmath.pi / r)
    total = sum(dilog(w ** j * z) for j in range(r))
    return abs(dilog(z ** r) - r * total)


def dilog_exp_derivative(x: complex) -> complex:
    """Analytic d/dx Li2(e^x) = -log(1 - e^x), principal branch."""
    w = cmath.exp(x)
    if w == 1.0:
        raise ValueError("derivative singular at e^x = 1")
    return -cmath.log(1.0 - w)


def dilog_grad_check(x: complex, h: float = 1e-6) -> Tuple[complex, complex]:
    """Return (analytic, central finite difference) for d/dx Li2(e^x)."""
    if not 1e-7 <= h <= 1e-3:
        raise ValueError("step h must lie in [1e-7, 1e-3]")
    analytic = dilog_exp_derivative(x)
    fd = (dilog(cmath.exp(x + h)) - dilog(cmath.exp(x - h))) / (2.0 * h)
    return analytic, fd


class SingularPointError(ValueError):
    """Raised when an evaluation point sits on (or too close to) a pole/zero."""


@dataclass(frozen=True)
class BracketContext:
    """Crossing parameter for the trigonometric bracket [x] = sin(pi x)/sin(pi eta)."""

    eta: float

    def __post_init__(self) -> None:
        if abs(cmath.sin(cmath.pi * complex(self.eta))) < 1e-14:
            raise ValueError("crossing parameter eta must not be an integer")


def bracket(x: complex, ctx: BracketContext) -> complex:
    """Trigonometric weight sin(pi x)/sin(pi eta); periodic in x with period 2."""
    den = cmath.sin(cmath.pi * complex(ctx.eta))
    return cmath.sin(cmath.pi * complex(x)) / den


class QPochResult(NamedTuple):
    value: complex
    tail_bound: float


def qpoch(z: complex, q: complex, terms: int) -> QPochResult:
    """Truncated product prod_{k<terms} (1 - z q^k) with its tail bound.

    The bound |z| |q|^terms / (1 - |q|) controls the dropped log-tail when
    |q| < 1; it is +inf otherwise.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    z = complex(z)
    q = complex(q)
    aq = abs(q)
    if aq >= 1.0:
        raise ValueError("the infinite product needs |q| < 1")
    value = 1.0 + 0j
    zq = z
    for _ in range(terms):
        value *= 1.0 - zq
        zq *= q
    bound = abs(z) * aq**terms / (1.0 - aq)
    return QPochResult(value=value, tail_bound=bound)


def qpoch_terms_for(z: complex, q: complex, tol: float) -> int:
    """Smallest truncation order whose tail bound is below tol."""
    az, aq = abs(complex(z)), abs(complex(q))
    if aq >= 1.0:
        raise ValueError("tail bound requires |q| < 1")
    if az == 0.0 or tol <= 0.0:
        return 1
    target = tol * (1.0 - aq) / az
    if target >= 1.0:
        return 1
    return max(1, math.ceil(math.log(target) / math.log(aq)))


def dilog_qpoch_link(z: complex, beta2: float, tol: float = 1e-12) -> Tuple[complex, complex, float]:
    """Compare -2*beta2*log prod(1 - z e^(-2 beta2 k)) against Li2(z).

    Returns (product_side, dilog_side, relative_error).  The agreement is
    O(beta2), which is the one-loop scaling the superpotential check relies
    on.  z = 0 gives (0, 0, 0).
    """
    z = complex(z)
    if z == 0:
        return 0j, 0j, 0.0
    q = math.exp(-2.0 * beta2)
    n_terms = qpoch_terms_for(z, q, tol)
    total = 0j
    zq = z
    for _ in range(n_terms):
        total += cmath.log(1.0 - zq)
        zq *= q
    lhs = -2.0 * beta2 * total
    rhs = dilog(z)
    rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
    return lhs, rhs, rel
