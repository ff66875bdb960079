"""Effective superpotentials on Lie-algebra root data and their vacuum equations.

The superpotential of a theory with adjoint and fundamental matter is a sum
of dilogarithms and quadratic terms over roots and weights.  Exponentiating
one component of its gradient collapses, pair by pair, into a product of
sine ratios; the per-family closed products implemented here are the
authoritative vacuum equations, and the gradient route is kept as an
independent cross-check.

Two realizations of the weight normalization are supported:

* ``II`` puts the per-root factor 4/|alpha|^2 into the exponents (doubled
  arguments); fundamentals are doubled.  This is the default.
* ``I`` keeps the factor as a multiplicity-style coefficient and carries an
  explicit anti-fundamental mass list.  Its closed vacuum products split
  the matter factor into fundamental and anti-fundamental halves; with
  equal mass lists the squared equations coincide with realization II.

Branch choice (whether a product is pinned to +1 or -1) is metadata on the
equation contract and never modifies the left-hand side.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import lie_roots
from .specfun import SingularPointError, dilog, dilog_qpoch_link

FAMILIES = ("A", "B", "C", "D", "E8", "F4")

#: minimum distance of any sine argument to the singular set pi*Z
SINGULAR_TOL = 1e-6


@dataclass(frozen=True)
class VacuumBranch:
    """Sign of the right-hand side in the square-rooted vacuum equation."""

    sign: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("branch sign must be +1 or -1")


BRANCH_PLUS = VacuumBranch(1)
BRANCH_MINUS = VacuumBranch(-1)


@dataclass(frozen=True)
class GaugeTheorySpec:
    """Family, rank and matter content of one effective gauge theory."""

    family: str
    rank: int
    n_fund: int
    masses: Tuple[float, ...]
    m_adj: float
    realization: str = "II"
    masses_anti: Tuple[float, ...] = None  # type: ignore[assignment]
    beta2: float = 1.0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError("family must be one of %s" % (FAMILIES,))
        if self.family == "E8" and self.rank != 8:
            raise ValueError("E8 has rank 8")
        if self.family == "F4" and self.rank != 4:
            raise ValueError("F4 has rank 4")
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.realization not in ("I", "II"):
            raise ValueError("realization must be 'I' or 'II'")
        if self.family in ("E8", "F4") and self.realization == "I":
            raise ValueError("realization I is only defined for the classical families")
        object.__setattr__(self, "masses", tuple(float(m) for m in self.masses))
        if len(self.masses) != self.n_fund:
            raise ValueError("expected %d fundamental masses" % self.n_fund)
        if self.masses_anti is None:
            if self.family == "A" or self.realization == "I":
                object.__setattr__(self, "masses_anti", self.masses)
        else:
            object.__setattr__(
                self, "masses_anti", tuple(float(m) for m in self.masses_anti)
            )
            if self.family != "A" and self.realization == "II":
                raise ValueError(
                    "anti-fundamental masses only enter the A family or realization I"
                )
        if self.beta2 <= 0:
            raise ValueError("beta2 must be positive")

    @property
    def dim(self) -> int:
        return 8 if self.family == "E8" else self.rank


def equation_count(spec: GaugeTheorySpec) -> int:
    """Number of vacuum equations: one per Cartan direction."""
    return spec.dim


@lru_cache(maxsize=None)
def _root_data(family: str, rank: int):
    """Per-root (coordinates, weight factor, integer gradient exponents)."""
    fam, rk = {"E8": ("E", 8), "F4": ("F", 4)}.get(family, (family, rank))
    data = []
    for alpha in lie_roots.generate_roots(fam, rk):
        c = lie_roots.weight_factor(alpha)
        exps = tuple(c * a for a in alpha)
        if any(e.denominator != 1 for e in exps):
            raise AssertionError("non-integer gradient exponent for root %r" % (alpha,))
        data.append(
            (
                tuple(float(a) for a in alpha),
                float(c),
                tuple(int(e) for e in exps),
            )
        )
    return tuple(data)


def _fund_weight_axes(spec: GaugeTheorySpec) -> Tuple[int, ...]:
    # signs of the fundamental weight set on each axis: A couples e_j only,
    # every other family couples +-e_j
    return (1,) if spec.family == "A" else (1, -1)


def _sin_guarded(x: complex) -> complex:
    xr = complex(x)
    dist = abs(xr.real / math.pi - round(xr.real / math.pi)) * math.pi
    if math.hypot(dist, xr.imag) < SINGULAR_TOL:
        raise SingularPointError("sine argument %r within %g of pi*Z" % (x, SINGULAR_TOL))
    return cmath.sin(xr)


def _check_sigma(spec: GaugeTheorySpec, sigma: Sequence[float]) -> np.ndarray:
    sig = np.asarray(sigma, dtype=complex)
    if sig.shape != (spec.dim,):
        raise ValueError("sigma must have %d components" % spec.dim)
    return sig


# ---------------------------------------------------------------------------
# superpotential value and gradient
# ---------------------------------------------------------------------------


def _terms_realization_ii(spec: GaugeTheorySpec, sig: np.ndarray):
    """Yield (dilog argument exponent, quadratic linear form, kind) triples.

    Each term of beta2*W is  s * [ Li2(e^{i*coef*form}) - (coef*form)^2/4 ]
    with s = -1 for gauge terms (coef = +c) and s = +1 for matter terms
    (coef = -c for adjoint, -2 for fundamentals).
    """
    m_adj = spec.m_adj
    for alpha, c, _ in _root_data(spec.family, spec.rank):
        t = sum(a * s for a, s in zip(alpha, sig))
        yield ("gauge", c, t, alpha)
        yield ("adjoint", c, t + m_adj, alpha)
    for axis_sign in _fund_weight_axes(spec):
        for j in range(spec.dim):
            w = [0.0] * spec.dim
            w[j] = axis_sign
            for m in spec.masses:
                yield ("fund", 2.0, axis_sign * sig[j] + m, tuple(w))
    if spec.family == "A":
        for j in range(spec.dim):
            w = [0.0] * spec.dim
            w[j] = -1.0
            for m in spec.masses_anti:
                yield ("fund", 2.0, -sig[j] + m, tuple(w))


def _terms_realization_i(spec: GaugeTheorySpec, sig: np.ndarray):
    """Like the above, with the weight factor as a coefficient.

    Terms of beta2*W; matter arguments are doubled but keep coefficient 1,
    gauge and adjoint carry the multiplicity c; the overall prefactor 1/2 is
    applied by the callers.
    """
    m_adj = spec.m_adj
    for alpha, c, _ in _root_data(spec.family, spec.rank):
        t = sum(a * s for a, s in zip(alpha, sig))
        yield ("gauge", c, t, alpha)
        yield ("adjoint", c, t + m_adj, alpha)
    for axis_sign in _fund_weight_axes(spec):
        for j in range(spec.dim):
            w = [0.0] * spec.dim
            w[j] = axis_sign
            for m in spec.masses:
                yield ("fund", 1.0, axis_sign * sig[j] + m, tuple(w))
            for m in spec.masses_anti:
                yield ("fund", 1.0, -axis_sign * sig[j] + m, tuple(-x for x in w))


def superpotential_value(spec: GaugeTheorySpec, sigma: Sequence[float], tol: float = 1e-12) -> complex:
    """W evaluated at sigma (the combination beta2*W divided by beta2).

    The dilogarithm evaluations are accurate to well below the requested
    absolute budget ``tol`` on the admissible domain.
    """
    sig = _check_sigma(spec, sigma)
    total = 0j
    if spec.realization == "II":
        for kind, c, x, _ in _terms_realization_ii(spec, sig):
            if kind == "gauge":
                total += -dilog(cmath.exp(1j * c * x)) + (c * x) ** 2 / 4.0
            elif kind == "adjoint":
                total += dilog(cmath.exp(-1j * c * x)) - (c * x) ** 2 / 4.0
            else:
                total += dilog(cmath.exp(-2j * x)) - x * x
    else:
        for kind, c, x, _ in _terms_realization_i(spec, sig):
            if kind == "gauge":
                total += 0.5 * c * (-dilog(cmath.exp(2j * x)) + x * x)
            elif kind == "adjoint":
                total += 0.5 * c * (dilog(cmath.exp(-2j * x)) - x * x)
            else:
                total += 0.5 * (dilog(cmath.exp(-2j * x)) - x * x)
    return total / spec.beta2


def superpotential_grad(spec: GaugeTheorySpec, sigma: Sequence[float]) -> np.ndarray:
    """Analytic gradient dW/dsigma_j, assembled from -log(1-e^..) pieces."""
    sig = _check_sigma(spec, sigma)
    grad = np.zeros(spec.dim, dtype=complex)
    if spec.realization == "II":
        for kind, c, x, w in _terms_realization_ii(spec, sig):
            if kind == "gauge":
                d = 1j * c * cmath.log(1.0 - cmath.exp(1j * c * x)) + c * c * x / 2.0
            elif kind == "adjoint":
                d = 1j * c * cmath.log(1.0 - cmath.exp(-1j * c * x)) - c * c * x / 2.0
            else:
                d = 2j * cmath.log(1.0 - cmath.exp(-2j * x)) - 2.0 * x
            for j, wj in enumerate(w):
                if wj != 0.0:
                    grad[j] += wj * d
    else:
        for kind, c, x, w in _terms_realization_i(spec, sig):
            if kind == "gauge":
                d = 0.5 * c * (2j * cmath.log(1.0 - cmath.exp(2j * x)) + 2.0 * x)
            elif kind == "adjoint":
                d = 0.5 * c * (2j * cmath.log(1.0 - cmath.exp(-2j * x)) - 2.0 * x)
            else:
                d = 0.5 * (2j * cmath.log(1.0 - cmath.exp(-2j * x)) - 2.0 * x)
            for j, wj in enumerate(w):
                if wj != 0.0:
                    grad[j] += wj * d
    return grad / spec.beta2


def vacuum_from_gradient(spec: GaugeTheorySpec, sigma: Sequence[float]) -> np.ndarray:
    """exp(beta2*i*dW/dsigma_j) for every j: the gradient route to the products."""
    grad = superpotential_grad(spec, sigma)
    return np.exp(1j * spec.beta2 * grad)


# ---------------------------------------------------------------------------
# closed vacuum products
# ---------------------------------------------------------------------------


def _adjoint_pair_factor(sig, j: int, m_adj: float, power: int) -> complex:
    # prod over k != j and both signs of sin(s_j +- s_k - m)/sin(-s_j +- s_k - m)
    out = 1.0 + 0j
    for k in range(len(sig)):
        if k == j:
            continue
        for sgn in (1.0, -1.0):
            num = _sin_guarded(sig[j] + sgn * sig[k] - m_adj)
            den = _sin_guarded(-sig[j] + sgn * sig[k] - m_adj)
            out *= (num / den) ** power
    return out


def _fund_factor(sig_j: complex, masses: Iterable[float], power: int) -> complex:
    out = 1.0 + 0j
    for m in masses:
        num = _sin_guarded(sig_j - m)
        den = _sin_guarded(-sig_j - m)
        out *= (num / den) ** power
    return out


def _matter_factor(spec: GaugeTheorySpec, sig_j: complex, power: int) -> complex:
    """Fundamental-matter factor; power 1 is the square-rooted equation, 2 the full one.

    Realization II carries the fundamental list once per equation level.
    Realization I splits the full factor into fundamental and
    anti-fundamental halves; its square-rooted form pairs the two mass
    lists (and is an exact square root only on the equal-mass locus).
    """
    if spec.realization == "II":
        return _fund_factor(sig_j, spec.masses, power)
    if power == 1:
        if len(spec.masses) != len(spec.masses_anti):
            raise ValueError("paired square-rooted form needs N_f = N_f'")
        out = 1.0 + 0j
        for ma, mb in zip(spec.masses_anti, spec.masses):
            out *= _sin_guarded(sig_j - ma) / _sin_guarded(-sig_j - mb)
        return out
    half = power // 2
    return _fund_factor(sig_j, spec.masses, half) * _fund_factor(
        sig_j, spec.masses_anti, half
    )


def _generated_product(spec: GaugeTheorySpec, sig, j: int, power: int) -> complex:
    # the pairwise-collapsed gradient exponential, usable for any root system
    out = 1.0 + 0j
    for alpha, c, exps in _root_data(spec.family, spec.rank):
        e = exps[j] * power
        if e == 0:
            continue
        t = sum(a * s for a, s in zip(alpha, sig))
        out *= (-2j * _sin_guarded(0.5 * c * t)) ** (-e)
        out *= (2j * _sin_guarded(0.5 * c * (t + spec.m_adj))) ** (-e)
    if spec.family == "A":
        # fundamentals couple through +e_j only, anti-fundamentals through -e_j
        for m in spec.masses:
            out *= (2j * _sin_guarded(sig[j] + m)) ** (-2 * power)
        for m in spec.masses_anti:
            out *= (2j * _sin_guarded(-sig[j] + m)) ** (2 * power)
        return out
    out *= _fund_factor(sig[j], spec.masses, 2 * power)  # weights +-e_j, argument doubled
    return out


def vacuum_lhs(
    spec: GaugeTheorySpec,
    sigma: Sequence[float],
    j: int,
    branch: VacuumBranch = BRANCH_PLUS,
) -> complex:
    """Left-hand side of the j-th vacuum equation (contract: equals branch.sign).

    The classical families and F4 use the square-rooted closed products; E8
    uses the full product generated from the superpotential gradient.  The
    branch never enters the value.
    """
    del branch  # contract metadata only
    sig = _check_sigma(spec, sigma)
    if not 0 <= j < spec.dim:
        raise ValueError("equation index %d out of range" % j)
    m = spec.m_adj
    fam = spec.family

    if fam == "A":
        if len(spec.masses) != len(spec.masses_anti):
            raise ValueError("A-family vacuum product needs N_f = N_f'")
        out = 1.0 + 0j
        for ma, mb in zip(spec.masses_anti, spec.masses):
            out *= _sin_guarded(sig[j] - ma) / _sin_guarded(sig[j] + mb)
        for k in range(spec.rank):
            if k == j:
                continue
            out *= _sin_guarded(sig[j] - sig[k] - m) / _sin_guarded(sig[j] - sig[k] + m)
        return out

    if fam == "E8":
        return _generated_product(spec, sig, j, power=1)

    out = _adjoint_pair_factor(sig, j, m, power=1) * _matter_factor(spec, sig[j], 1)
    if fam == "B":
        pref = (
            _sin_guarded(sig[j] - m)
            * cmath.cos(sig[j] - m)
            / (_sin_guarded(sig[j] + m) * cmath.cos(sig[j] + m))
        )
        out *= pref * pref
    elif fam == "C":
        out *= _sin_guarded(sig[j] - m / 2.0) / _sin_guarded(sig[j] + m / 2.0)
    elif fam == "F4":
        pref = _sin_guarded(sig[j] - m) / _sin_guarded(sig[j] + m)
        out *= pref * pref
        half_sum = sum(sig[k] for k in range(4) if k != j)
        for sgn in (1.0, -1.0):
            num = _sin_guarded(sig[j] + sgn * half_sum - m)
            den = _sin_guarded(-sig[j] + sgn * half_sum - m)
            out *= num / den
    return out


def vacuum_lhs_squared(spec: GaugeTheorySpec, sigma: Sequence[float], j: int) -> complex:
    """The full (unsquare-rooted) vacuum product, evaluated independently.

    For the classical families this is the doubled-argument form whose
    square root gives :func:`vacuum_lhs`; it also equals the exponentiated
    gradient of the realization II superpotential.
    """
    sig = _check_sigma(spec, sigma)
    if not 0 <= j < spec.dim:
        raise ValueError("equation index %d out of range" % j)
    m = spec.m_adj
    fam = spec.family

    if fam == "A":
        out = 1.0 + 0j
        for ma, mb in zip(spec.masses_anti, spec.masses):
            out *= (_sin_guarded(sig[j] - ma) / _sin_guarded(sig[j] + mb)) ** 2
        for k in range(spec.rank):
            if k == j:
                continue
            out *= (
                _sin_guarded(sig[j] - sig[k] - m) / _sin_guarded(sig[j] - sig[k] + m)
            ) ** 2
        return out

    if fam == "E8":
        return _generated_product(spec, sig, j, power=2)

    out = _adjoint_pair_factor(sig, j, m, power=2) * _matter_factor(spec, sig[j], 2)
    if fam == "B":
        pref = _sin_guarded(2.0 * (sig[j] - m)) / _sin_guarded(2.0 * (sig[j] + m))
        out *= pref**4
    elif fam == "C":
        pref = _sin_guarded(sig[j] - m / 2.0) / _sin_guarded(sig[j] + m / 2.0)
        out *= pref**2
    elif fam == "F4":
        pref = _sin_guarded(sig[j] - m) / _sin_guarded(sig[j] + m)
        out *= pref**4
        half_sum = sum(sig[k] for k in range(4) if k != j)
        for sgn in (1.0, -1.0):
            num = _sin_guarded(sig[j] + sgn * half_sum - m)
            den = _sin_guarded(-sig[j] + sgn * half_sum - m)
            out *= (num / den) ** 2
    return out


# ---------------------------------------------------------------------------
# two-dimensional (rational) degeneration
# ---------------------------------------------------------------------------


def _lin_guarded(x: complex) -> complex:
    if abs(x) < SINGULAR_TOL:
        raise SingularPointError("linear factor %r within %g of zero" % (x, SINGULAR_TOL))
    return complex(x)


def vacuum_lhs_2d(
    spec: GaugeTheorySpec,
    sigma: Sequence[float],
    j: int,
    branch: VacuumBranch = BRANCH_PLUS,
) -> complex:
    """Rational vacuum product of the two-dimensional limit (sin x -> x)."""
    del branch
    sig = _check_sigma(spec, sigma)
    if not 0 <= j < spec.dim:
        raise ValueError("equation index %d out of range" % j)
    fam = spec.family
    if fam in ("E8", "F4"):
        raise ValueError("the rational limit is implemented for the classical families")
    m = spec.m_adj

    if fam == "A":
        out = 1.0 + 0j
        for ma, mb in zip(spec.masses_anti, spec.masses):
            out *= _lin_guarded(sig[j] - ma) / _lin_guarded(sig[j] + mb)
        for k in range(spec.rank):
            if k == j:
                continue
            out *= _lin_guarded(sig[j] - sig[k] - m) / _lin_guarded(sig[j] - sig[k] + m)
        return out

    out = 1.0 + 0j
    for k in range(spec.rank):
        if k == j:
            continue
        for sgn in (1.0, -1.0):
            out *= _lin_guarded(sig[j] + sgn * sig[k] - m) / _lin_guarded(
                -sig[j] + sgn * sig[k] - m
            )
    if spec.realization == "II":
        for ma in spec.masses:
            out *= _lin_guarded(sig[j] - ma) / _lin_guarded(-sig[j] - ma)
    else:
        if len(spec.masses) != len(spec.masses_anti):
            raise ValueError("paired square-rooted form needs N_f = N_f'")
        for ma, mb in zip(spec.masses_anti, spec.masses):
            out *= _lin_guarded(sig[j] - ma) / _lin_guarded(-sig[j] - mb)
    if fam == "B":
        out *= (_lin_guarded(sig[j] - m) / _lin_guarded(sig[j] + m)) ** 2
    elif fam == "C":
        out *= _lin_guarded(sig[j] - m / 2.0) / _lin_guarded(sig[j] + m / 2.0)
    return out


# ---------------------------------------------------------------------------
# one-loop asymptotics
# ---------------------------------------------------------------------------


@dataclass
class OneLoopReport:
    beta2s: Tuple[float, ...]
    max_rel_errors: Tuple[float, ...]
    rate: float
    n_terms: int = 0

    @property
    def decreasing(self) -> bool:
        pairs = zip(self.max_rel_errors, self.max_rel_errors[1:])
        return all(b <= a for a, b in pairs)


def one_loop_asymptotic_check(
    spec: GaugeTheorySpec,
    sigma: Sequence[float],
    beta2s: Sequence[float],
    tol: float = 1e-12,
) -> OneLoopReport:
    """Check each dilogarithm of the superpotential against its product form.

    Every dilog argument z appearing in beta2*W at sigma is compared with
    -2*beta2*log prod_k (1 - z e^(-2 beta2 k)); the report carries the worst
    relative error per beta2 and the fitted log-log convergence rate.
    """
    sig = _check_sigma(spec, sigma)
    if spec.realization == "II":
        terms = list(_terms_realization_ii(spec, sig))
    else:
        terms = list(_terms_realization_i(spec, sig))
    args: List[complex] = []
    for kind, c, x, _ in terms:
        if spec.realization == "II":
            z = cmath.exp(1j * c * x) if kind == "gauge" else (
                cmath.exp(-1j * c * x) if kind == "adjoint" else cmath.exp(-2j * x)
            )
        else:
            z = cmath.exp(2j * x) if kind == "gauge" else cmath.exp(-2j * x)
        if abs(1.0 - z) < SINGULAR_TOL:
            raise SingularPointError("dilog argument %r too close to 1" % (z,))
        args.append(z)

    betas = tuple(float(b) for b in beta2s)
    if any(b <= 0 for b in betas):
        raise ValueError("beta2 values must be positive")
    maxima = []
    for b2 in betas:
        worst = 0.0
        for z in args:
            _, _, rel = dilog_qpoch_link(z, b2, tol)
            worst = max(worst, rel)
        maxima.append(worst)

    rate = float("nan")
    usable = [(b, e) for b, e in zip(betas, maxima) if e > 0]
    if len(usable) >= 2:
        xs = np.log([b for b, _ in usable])
        ys = np.log([e for _, e in usable])
        rate = float(np.polyfit(xs, ys, 1)[0])
    return OneLoopReport(
        beta2s=betas,
        max_rel_errors=tuple(maxima),
        rate=rate,
        n_terms=len(args),
    )
