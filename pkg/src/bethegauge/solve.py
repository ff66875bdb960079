"""Multi-start Newton solvers for Bethe and vacuum equation systems.

Both systems are products of sine (or linear) ratios equated to +-1, so the
solver works on the summed principal-branch logarithms.  Each equation is a
list of terms power * log f(c.u + shift) with integer coefficient vectors c,
giving an exact cotangent Jacobian.  The log residual is folded back by
multiples of 2*pi*i, which removes the winding ambiguity of the product form;
acceptance of a candidate always goes through the independent product-form
evaluators, never the solver's own residual.

Deduplication quotients by the exact symmetries of each system: magnon
permutations, periodicity u -> u + 1 for trig chains, u_i -> -u_i for open
chains, and the Weyl group plus sigma -> sigma + pi on the vacuum side.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .chain import BetheRoots, ChainSpec, bethe_residuals, validate_roots
from .gauge import GaugeTheorySpec, VacuumBranch, vacuum_lhs, vacuum_lhs_2d
from .specfun import SingularPointError

#: starts are resampled while any product factor is smaller than this
POLE_TOL = 1e-3
#: open-chain roots with 2u integral are reflection-degenerate, never eigenvectors
SELF_CONJUGATE_TOL = 1e-6

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SolveConfig:
    n_starts: int = 64
    tol: float = 1e-10
    max_iter: int = 40
    damping: float = 1.0
    seed: int = 0
    dedup_tol: float = 1e-6

    def __post_init__(self) -> None:
        if self.n_starts <= 0:
            raise ValueError("n_starts must be positive")
        if self.max_iter < 10:
            raise ValueError("max_iter must be at least 10")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")
        if not self.tol < self.dedup_tol:
            raise ValueError("tol must be smaller than dedup_tol")


@dataclass(frozen=True)
class LogTerm:
    """power * log f(sum_k coeff_k u_k + shift)."""

    power: int
    coeffs: Tuple[Tuple[int, int], ...]
    shift: complex


@dataclass
class SolveResult:
    """List-like container of solutions plus run diagnostics."""

    solutions: List
    diagnostics: Dict[str, object] = field(default_factory=dict)

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)

    def __getitem__(self, k):
        return self.solutions[k]


class _PoleHit(Exception):
    pass


# ---------------------------------------------------------------------------
# log-residual core
# ---------------------------------------------------------------------------


def _factor_fns(kind: str):
    if kind == "sin_pi":
        return (
            lambda x: cmath.sin(math.pi * x),
            lambda x: math.pi / cmath.tan(math.pi * x),
        )
    if kind == "sin":
        return (cmath.sin, lambda x: 1.0 / cmath.tan(x))
    if kind == "linear":
        return (lambda x: x, lambda x: 1.0 / x)
    raise ValueError("unknown factor kind %r" % kind)


def _fold(z: complex) -> complex:
    return complex(z.real, z.imag - _TWO_PI * round(z.imag / _TWO_PI))


class _LogSystem:
    """Equations sum_t power_t log f(arg_t) = target (mod 2 pi i)."""

    def __init__(self, terms: Sequence[Sequence[LogTerm]], kind: str,
                 targets: Sequence[complex], domain=None):
        self.terms = [list(eq) for eq in terms]
        self.n = len(self.terms)
        self.f, self.dlogf = _factor_fns(kind)
        self.targets = list(targets)
        # products tend to 1 at infinity, so cap the search box
        self.domain = domain if domain is not None else (lambda u: True)

    def _arg(self, term: LogTerm, u: np.ndarray) -> complex:
        a = term.shift
        for k, c in term.coeffs:
            a += c * u[k]
        return a

    def min_factor(self, u: np.ndarray) -> float:
        out = math.inf
        for eq in self.terms:
            for t in eq:
                out = min(out, abs(self.f(self._arg(t, u))))
        return out

    def residual(self, u: np.ndarray) -> np.ndarray:
        if not self.domain(u):
            raise _PoleHit()
        out = np.zeros(self.n, dtype=complex)
        for i, eq in enumerate(self.terms):
            acc = 0.0 + 0.0j
            for t in eq:
                try:
                    v = self.f(self._arg(t, u))
                except OverflowError:
                    raise _PoleHit()
                if abs(v) < 1e-14:
                    raise _PoleHit()
                acc += t.power * cmath.log(v)
            out[i] = _fold(acc - self.targets[i])
        return out

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        jac = np.zeros((self.n, len(u)), dtype=complex)
        for i, eq in enumerate(self.terms):
            for t in eq:
                a = self._arg(t, u)
                try:
                    if abs(self.f(a)) < 1e-14:
                        raise _PoleHit()
                except OverflowError:
                    raise _PoleHit()
                g = t.power * self.dlogf(a)
                for k, c in t.coeffs:
                    jac[i, k] += c * g
        return jac


def _newton(system: _LogSystem, u0: np.ndarray, cfg: SolveConfig) -> Optional[np.ndarray]:
    u = u0.astype(complex)
    try:
        res = system.residual(u)
    except _PoleHit:
        return None
    norm = np.max(np.abs(res))
    for _ in range(cfg.max_iter):
        if norm < 1e-12:
            return u
        try:
            jac = system.jacobian(u)
            step = np.linalg.solve(jac, -res)
        except (np.linalg.LinAlgError, _PoleHit):
            return None
        lam = cfg.damping
        moved = False
        while lam > 1.0 / 256.0:
            try:
                u_try = u + lam * step
                res_try = system.residual(u_try)
            except _PoleHit:
                lam *= 0.5
                continue
            norm_try = np.max(np.abs(res_try))
            if norm_try < norm * (1.0 - 0.25 * lam) or norm_try < 1e-12:
                u, res, norm = u_try, res_try, norm_try
                moved = True
                break
            lam *= 0.5
        if not moved:
            return None
    return u if norm < 1e-12 else None


# ---------------------------------------------------------------------------
# Bethe system assembly
# ---------------------------------------------------------------------------


def _bethe_terms(chain: ChainSpec) -> List[List[LogTerm]]:
    eta = chain.eta
    out: List[List[LogTerm]] = []
    for i in range(chain.n_magnons):
        eq: List[LogTerm] = []
        for s, th in zip(chain.spins, chain.inhomogeneities):
            up = eta / 2.0 + eta * s - th
            dn = eta / 2.0 - eta * s - th
            if chain.is_open:
                eq.append(LogTerm(+1, ((i, +1),), up))
                eq.append(LogTerm(+1, ((i, -1),), dn))
                eq.append(LogTerm(-1, ((i, -1),), up))
                eq.append(LogTerm(-1, ((i, +1),), dn))
            else:
                eq.append(LogTerm(+1, ((i, +1),), up))
                eq.append(LogTerm(-1, ((i, +1),), dn))
        if chain.is_open:
            for xi in (chain.xi_plus, chain.xi_minus):
                eq.append(LogTerm(+1, ((i, +1),), -eta / 2.0 + xi))
                eq.append(LogTerm(-1, ((i, +1),), eta / 2.0 - xi))
        for j in range(chain.n_magnons):
            if j == i:
                continue
            eq.append(LogTerm(+1, ((i, +1), (j, -1)), -eta))
            eq.append(LogTerm(-1, ((i, +1), (j, -1)), +eta))
            if chain.is_open:
                eq.append(LogTerm(+1, ((i, +1), (j, +1)), -eta))
                eq.append(LogTerm(-1, ((i, +1), (j, +1)), +eta))
        out.append(eq)
    return out


def _canonical_roots(chain: ChainSpec, values: Sequence[complex]) -> Tuple[complex, ...]:
    def reduce_one(u: complex) -> complex:
        if chain.is_trig:
            u = complex(u.real - math.floor(u.real), u.imag)
        if chain.is_open:
            v = complex((-u).real - math.floor((-u).real), -u.imag) if chain.is_trig else -u
            if (round(v.real, 9), round(v.imag, 9)) < (round(u.real, 9), round(u.imag, 9)):
                u = v
        return u

    reduced = [reduce_one(u) for u in values]
    reduced.sort(key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return tuple(reduced)


def solve_bethe(chain: ChainSpec, cfg: SolveConfig) -> SolveResult:
    """All distinct Bethe root sets found from cfg.n_starts seeded starts."""
    m = chain.n_magnons
    if m == 0:
        return SolveResult([BetheRoots(())], {"n_converged": 1, "n_starts": 0})
    radius = (
        2.0
        + chain.n_sites * abs(chain.eta) * max(1.0, max(abs(s) for s in chain.spins))
        + max(abs(complex(t)) for t in chain.inhomogeneities)
    )
    if chain.is_trig:
        domain = lambda u: bool(np.all(np.abs(u.imag) <= radius))  # noqa: E731
    else:
        domain = lambda u: bool(np.all(np.abs(u) <= radius))  # noqa: E731
    system = _LogSystem(_bethe_terms(chain), "sin_pi" if chain.is_trig else "linear",
                        [0.0] * m, domain=domain)
    rng = np.random.default_rng(cfg.seed)
    found: List[BetheRoots] = []
    canon: List[Tuple[complex, ...]] = []
    n_converged = 0
    half = 0.5 * radius
    for _ in range(cfg.n_starts):
        u0 = None
        for _ in range(100):
            if chain.is_trig:
                re = rng.uniform(0.02, 0.98, size=m)
            else:
                re = rng.uniform(-half, half, size=m)
            cand = re + 1j * rng.normal(0.0, 0.2, size=m)
            if system.min_factor(cand) > POLE_TOL:
                u0 = cand
                break
        if u0 is None:
            continue
        u = _newton(system, u0, cfg)
        if u is None:
            continue
        n_converged += 1
        vals = _canonical_roots(chain, list(u))
        if chain.is_open and any(
            abs(2.0 * v.real - round(2.0 * v.real)) < SELF_CONJUGATE_TOL
            and abs(v.imag) < SELF_CONJUGATE_TOL
            for v in vals
        ):
            continue
        try:
            roots = BetheRoots(vals)
            validate_roots(chain, roots)
            if np.max(bethe_residuals(chain, roots)) > cfg.tol:
                continue
        except (ValueError, SingularPointError):
            continue
        if any(
            max(abs(a - b) for a, b in zip(vals, prev)) < cfg.dedup_tol
            for prev in canon
        ):
            continue
        canon.append(vals)
        found.append(roots)
    return SolveResult(found, {"n_converged": n_converged, "n_starts": cfg.n_starts})


# ---------------------------------------------------------------------------
# vacuum system assembly
# ---------------------------------------------------------------------------


def _vacuum_matter_terms(spec: GaugeTheorySpec, j: int) -> List[LogTerm]:
    eq: List[LogTerm] = []
    if spec.family == "A":
        for m, mp in zip(spec.masses, spec.masses_anti):
            eq.append(LogTerm(+1, ((j, +1),), -mp))
            eq.append(LogTerm(-1, ((j, +1),), +m))
    elif spec.realization == "I":
        if len(spec.masses) != len(spec.masses_anti):
            raise ValueError("paired square-rooted form needs N_f = N_f'")
        for m, mp in zip(spec.masses_anti, spec.masses):
            eq.append(LogTerm(+1, ((j, +1),), -m))
            eq.append(LogTerm(-1, ((j, -1),), -mp))
    else:
        for m in spec.masses:
            eq.append(LogTerm(+1, ((j, +1),), -m))
            eq.append(LogTerm(-1, ((j, -1),), -m))
    return eq


def _vacuum_terms(spec: GaugeTheorySpec, rational: bool) -> List[List[LogTerm]]:
    if spec.family not in ("A", "B", "C", "D"):
        raise ValueError("the analytic solver covers the classical families")
    n = spec.dim
    madj = spec.m_adj
    half_pi = math.pi / 2.0
    out: List[List[LogTerm]] = []
    for j in range(n):
        eq: List[LogTerm] = []
        if spec.family == "A":
            for k in range(n):
                if k == j:
                    continue
                eq.append(LogTerm(+1, ((j, +1), (k, -1)), -madj))
                eq.append(LogTerm(-1, ((j, +1), (k, -1)), +madj))
        else:
            if spec.family == "B":
                eq.append(LogTerm(+2, ((j, +1),), -madj))
                eq.append(LogTerm(-2, ((j, +1),), +madj))
                if not rational:
                    eq.append(LogTerm(+2, ((j, +1),), -madj + half_pi))
                    eq.append(LogTerm(-2, ((j, +1),), +madj + half_pi))
            elif spec.family == "C":
                eq.append(LogTerm(+1, ((j, +1),), -madj / 2.0))
                eq.append(LogTerm(-1, ((j, +1),), +madj / 2.0))
            for k in range(n):
                if k == j:
                    continue
                for e in (+1, -1):
                    eq.append(LogTerm(+1, ((j, +1), (k, e)), -madj))
                    eq.append(LogTerm(-1, ((j, -1), (k, e)), -madj))
        eq.extend(_vacuum_matter_terms(spec, j))
        out.append(eq)
    return out


_SIGMA_PERIOD = math.pi


def _weyl_orbit(family: str, sigma: Tuple[float, ...]):
    n = len(sigma)
    if family == "A":
        sign_patterns = [(1,) * n]
    elif family in ("B", "C"):
        sign_patterns = list(product((1, -1), repeat=n))
    else:  # D: even sign flips only
        sign_patterns = [p for p in product((1, -1), repeat=n) if p.count(-1) % 2 == 0]
    for perm in permutations(range(n)):
        base = tuple(sigma[p] for p in perm)
        for signs in sign_patterns:
            yield tuple(s * x for s, x in zip(signs, base))


def _canonical_sigma(family: str, sigma: Sequence[float], fold: bool = True) -> Tuple[float, ...]:
    best: Optional[Tuple[float, ...]] = None
    for image in _weyl_orbit(family, tuple(sigma)):
        if fold:
            image = tuple(x - _SIGMA_PERIOD * math.floor(x / _SIGMA_PERIOD) for x in image)
        cand = tuple(sorted(image))
        if best is None or tuple(round(x, 9) for x in cand) < tuple(round(x, 9) for x in best):
            best = cand
    return best


def solve_vacuum(spec: GaugeTheorySpec, branch: VacuumBranch, cfg: SolveConfig,
                 rational: bool = False) -> SolveResult:
    """Real vacuum solutions on the given branch, deduplicated by Weyl images."""
    n = spec.dim
    terms = _vacuum_terms(spec, rational)
    if all(not eq for eq in terms):
        # no interactions at all: every point is a vacuum on the + branch
        diag = {"underdetermined": True, "n_starts": 0}
        if branch.sign == +1:
            return SolveResult([np.zeros(n)], diag)
        return SolveResult([], diag)
    target = 0.0 if branch.sign == +1 else math.pi * 1j
    kind = "linear" if rational else "sin"
    extent = max([abs(spec.m_adj)] + [abs(m) for m in spec.masses]
                 + [abs(m) for m in (spec.masses_anti or ())])
    radius = 2.0 + math.pi + spec.dim * extent
    if rational:
        domain = lambda u: bool(np.all(np.abs(u) <= 10.0 * radius))  # noqa: E731
    else:
        domain = lambda u: bool(np.all(np.abs(u.imag) <= radius))  # noqa: E731
    system = _LogSystem(terms, kind, [target] * n, domain=domain)
    lhs_fn = vacuum_lhs_2d if rational else vacuum_lhs
    rng = np.random.default_rng(cfg.seed)
    span = 1.0 if rational else _SIGMA_PERIOD
    found: List[np.ndarray] = []
    canon: List[Tuple[float, ...]] = []
    n_converged = 0
    for _ in range(cfg.n_starts):
        s0 = None
        for _ in range(100):
            cand = span * rng.uniform(0.02, 0.98, size=n)
            if system.min_factor(cand.astype(complex)) > POLE_TOL:
                s0 = cand
                break
        if s0 is None:
            continue
        sol = _newton(system, s0.astype(complex), cfg)
        if sol is None or np.max(np.abs(sol.imag)) > 1e-9:
            continue
        n_converged += 1
        sig = sol.real
        try:
            worst = max(
                abs(lhs_fn(spec, sig, j, branch) - branch.sign) for j in range(n)
            )
        except SingularPointError:
            continue
        if worst > cfg.tol:
            continue
        key = _canonical_sigma(spec.family, sig, fold=not rational)
        if any(
            max(abs(a - b) for a, b in zip(key, prev)) < cfg.dedup_tol for prev in canon
        ):
            continue
        canon.append(key)
        found.append(np.array(key))
    return SolveResult(found, {"n_converged": n_converged, "n_starts": cfg.n_starts})


# ---------------------------------------------------------------------------
# end to end
# ---------------------------------------------------------------------------


def cross_check(spec: GaugeTheorySpec, preset, cfg: SolveConfig,
                map_tol: float = 1e-6):
    """Solve the chain side, transport roots back, grade the vacuum residual."""
    from .bridge import VerificationReport, map_gauge_to_chain

    cutoff = 20.0
    chain, pm = map_gauge_to_chain(preset, spec, cutoff=cutoff)
    sols = solve_bethe(chain, cfg)
    branch = preset.branch
    lhs_fn = vacuum_lhs if preset.regime == "3d" else vacuum_lhs_2d
    if not sols.solutions:
        return VerificationReport(
            preset_id=preset.id, samples=0, seed=cfg.seed, tol=map_tol,
            max_residual=math.inf, worst_point=None, passed=False,
            branch_used=branch.sign,
            notes={"diagnostics": "no Bethe root sets converged", **sols.diagnostics},
        )
    max_residual = 0.0
    worst = None
    for roots in sols:
        sigma = np.array(pm.u_to_sigma(roots.values))
        try:
            res = max(
                abs(lhs_fn(spec, sigma, j, branch) - branch.sign)
                for j in range(spec.dim)
            )
        except SingularPointError:
            res = math.inf
        if res > max_residual:
            max_residual = res
            worst = {"u": [repr(v) for v in roots.values]}
    return VerificationReport(
        preset_id=preset.id, samples=len(sols), seed=cfg.seed, tol=map_tol,
        max_residual=max_residual, worst_point=worst,
        passed=max_residual <= map_tol, branch_used=branch.sign,
        notes={"n_root_sets": len(sols), **sols.diagnostics},
    )
