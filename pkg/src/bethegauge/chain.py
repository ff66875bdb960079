"""Bethe equations of XXZ/XXX chains and an exact small-size transfer-matrix oracle.

Closed chains: product of site terms equals the magnon scattering product;
we return everything moved to one side, so the contract is LHS = 1.  Open
chains (diagonal boundaries) add two boundary factors and double every site
and magnon term.

The printed open-chain magnon factor orders the difference terms as
u_j - u_i; that ordering breaks both the reflection symmetry u_i -> -u_i
and every closed-form check downstream, so the difference factors here put
the i-th root first.  The sum factors are symmetric and unaffected.

The oracle builds dense transfer matrices from the spin-1/2 R-matrix:
closed t(u) = tr_0 T_0(u), open t(u) = Tr_0 K(u+eta/2, xi_+) U_-(u).  The
open trace argument follows the displayed A/D-tilde expansion (which fixes
the K_+ shift uniquely); eigenvector certification calibrates the residual
root-shift convention delta in {0, +eta/2, -eta/2} and reports the choice.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .specfun import BracketContext, SingularPointError, bracket

KINDS = ("closed-xxz", "open-xxz", "closed-xxx", "open-xxx")

#: reject any Bethe-factor denominator smaller than this
DENOM_TOL = 1e-10

#: root-shift candidates tried when certifying eigenvectors
SHIFT_CANDIDATES = (0.0, 0.5, -0.5)  # in units of eta


@dataclass(frozen=True)
class ChainSpec:
    """One spin chain: kind, length, magnon number and site/boundary data."""

    kind: str
    n_sites: int
    n_magnons: int
    eta: float
    spins: Tuple[float, ...]
    inhomogeneities: Tuple[float, ...]
    xi_plus: Optional[complex] = None
    xi_minus: Optional[complex] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", str(self.kind).lower())
        if self.kind not in KINDS:
            raise ValueError("kind must be one of %s" % (KINDS,))
        if self.n_sites < 1:
            raise ValueError("need at least one site")
        if self.n_magnons < 0:
            raise ValueError("magnon number must be >= 0")
        object.__setattr__(self, "spins", tuple(float(s) for s in self.spins))
        object.__setattr__(
            self, "inhomogeneities", tuple(float(t) for t in self.inhomogeneities)
        )
        if len(self.spins) != self.n_sites or len(self.inhomogeneities) != self.n_sites:
            raise ValueError("spins and inhomogeneities must have length %d" % self.n_sites)
        if self.is_trig:
            BracketContext(self.eta)  # validates sin(pi eta) != 0
        if self.is_open:
            if self.xi_plus is None or self.xi_minus is None:
                raise ValueError("open chains need both xi_plus and xi_minus")
            object.__setattr__(self, "xi_plus", complex(self.xi_plus))
            object.__setattr__(self, "xi_minus", complex(self.xi_minus))
        elif self.xi_plus is not None or self.xi_minus is not None:
            raise ValueError("closed chains take no boundary parameters")

    @property
    def is_open(self) -> bool:
        return self.kind.startswith("open")

    @property
    def is_trig(self) -> bool:
        return self.kind.endswith("xxz")


@dataclass(frozen=True)
class BetheRoots:
    values: Tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(complex(u) for u in self.values))
        vals = self.values
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                if abs(vals[i] - vals[j]) < 1e-8:
                    raise ValueError("Bethe roots %d and %d coincide" % (i, j))

    def __len__(self) -> int:
        return len(self.values)


def validate_roots(chain: ChainSpec, roots: BetheRoots) -> None:
    if len(roots) != chain.n_magnons:
        raise ValueError(
            "expected %d roots, got %d" % (chain.n_magnons, len(roots))
        )
    if chain.is_open:
        vals = roots.values
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                if abs(vals[i] + vals[j]) < 1e-8:
                    raise ValueError(
                        "roots %d and %d are reflection-degenerate (u_i + u_j = 0)"
                        % (i, j)
                    )


def _factor(chain: ChainSpec, x: complex) -> complex:
    # trig kinds use sin(pi x); the sin(pi eta) normalizations cancel in
    # every ratio, so the bracket denominator is dropped here
    return cmath.sin(cmath.pi * x) if chain.is_trig else complex(x)


def _ratio(chain: ChainSpec, num: complex, den: complex, what: str) -> complex:
    d = _factor(chain, den)
    if abs(d) < DENOM_TOL:
        raise SingularPointError("%s denominator vanishes at argument %r" % (what, den))
    return _factor(chain, num) / d


def bethe_lhs(chain: ChainSpec, roots: BetheRoots, i: int) -> complex:
    """The i-th Bethe equation arranged as one product; the contract is = 1."""
    validate_roots(chain, roots)
    if not 0 <= i < len(roots):
        raise ValueError("root index %d out of range" % i)
    u = roots.values
    ui = u[i]
    eta = chain.eta
    out = 1.0 + 0j

    for a in range(chain.n_sites):
        s, th = chain.spins[a], chain.inhomogeneities[a]
        if chain.is_open:
            out *= _ratio(
                chain, ui + eta / 2 + eta * s - th, -ui + eta / 2 + eta * s - th,
                "site %d" % a,
            )
            out *= _ratio(
                chain, -ui + eta / 2 - eta * s - th, ui + eta / 2 - eta * s - th,
                "site %d" % a,
            )
        else:
            out *= _ratio(
                chain, ui + eta / 2 + eta * s - th, ui + eta / 2 - eta * s - th,
                "site %d" % a,
            )

    if chain.is_open:
        for xi in (chain.xi_plus, chain.xi_minus):
            out *= _ratio(chain, ui - eta / 2 + xi, ui + eta / 2 - xi, "boundary")

    for j in range(len(u)):
        if j == i:
            continue
        if chain.is_open:
            out *= _ratio(chain, ui + u[j] - eta, ui + u[j] + eta, "magnon sum")
            out *= _ratio(chain, ui - u[j] - eta, ui - u[j] + eta, "magnon difference")
        else:
            out *= _ratio(chain, ui - u[j] - eta, ui - u[j] + eta, "magnon")
    return out


def bethe_residuals(chain: ChainSpec, roots: BetheRoots) -> np.ndarray:
    """|LHS_i - 1| for every magnon."""
    return np.array(
        [abs(bethe_lhs(chain, roots, i) - 1.0) for i in range(len(roots))]
    )


# ---------------------------------------------------------------------------
# R- and K-matrices
# ---------------------------------------------------------------------------


def r_matrix(u: complex, ctx: BracketContext) -> np.ndarray:
    """Six-vertex R-matrix with entries in the bracket normalization."""
    bu = bracket(u, ctx)
    bue = bracket(u + ctx.eta, ctx)
    be = bracket(ctx.eta, ctx)
    return np.array(
        [
            [bue, 0, 0, 0],
            [0, bu, be, 0],
            [0, be, bu, 0],
            [0, 0, 0, bue],
        ],
        dtype=complex,
    )


def k_matrix(u: complex, xi: complex, ctx: BracketContext) -> np.ndarray:
    """Diagonal boundary matrix diag([u+xi], -[u-xi])."""
    return np.array(
        [[bracket(u + xi, ctx), 0], [0, -bracket(u - xi, ctx)]], dtype=complex
    )


def yang_baxter_residual(u: complex, v: complex, ctx: BracketContext) -> float:
    """Max-norm defect of R12(u-v) R13(u) R23(v) = R23(v) R13(u) R12(u-v)."""
    r12 = np.kron(r_matrix(u - v, ctx), np.eye(2))
    r23 = np.kron(np.eye(2), r_matrix(v, ctx))
    r13 = _embed_13(r_matrix(u, ctx))
    lhs = r12 @ r13 @ r23
    rhs = r23 @ r13 @ r12
    return float(np.max(np.abs(lhs - rhs)))


def _embed_13(r4: np.ndarray) -> np.ndarray:
    t = r4.reshape(2, 2, 2, 2)  # <i k | R | j l>
    out = np.einsum("ikjl,mn->imkjnl", t, np.eye(2)).reshape(8, 8)
    return out


def reflection_residual(
    u: complex, v: complex, xi: complex, ctx: BracketContext
) -> float:
    """Max-norm defect of the boundary reflection equation for k_matrix."""
    perm = np.eye(4)[[0, 2, 1, 3]]
    r12 = r_matrix(u - v, ctx)
    r21 = perm @ r_matrix(u + v, ctx) @ perm
    k1 = np.kron(k_matrix(u, xi, ctx), np.eye(2))
    k2 = np.kron(np.eye(2), k_matrix(v, xi, ctx))
    lhs = r12 @ k1 @ r21 @ k2
    rhs = k2 @ r21 @ k1 @ r12
    return float(np.max(np.abs(lhs - rhs)))


# ---------------------------------------------------------------------------
# monodromy and transfer matrices (dense oracle, spin 1/2)
# ---------------------------------------------------------------------------

OpMatrix = List[List[np.ndarray]]


def _check_oracle(chain: ChainSpec) -> None:
    if chain.n_sites > 8:
        raise ValueError("oracle limited to L <= 8")
    if any(abs(s - 0.5) > 1e-12 for s in chain.spins):
        raise ValueError("oracle supports spin-1/2 only")


def _br(chain: ChainSpec, x: complex) -> complex:
    if chain.is_trig:
        return cmath.sin(cmath.pi * x) / cmath.sin(cmath.pi * chain.eta)
    return complex(x)


def _lift(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    left = 2**site
    right = 2 ** (n_sites - 1 - site)
    return np.kron(np.eye(left), np.kron(op, np.eye(right)))


def _op_mul(x: OpMatrix, y: OpMatrix) -> OpMatrix:
    return [
        [x[i][0] @ y[0][j] + x[i][1] @ y[1][j] for j in range(2)] for i in range(2)
    ]


def monodromy(chain: ChainSpec, u: complex) -> OpMatrix:
    """T_0(u) = R_0L(u - th_L) ... R_01(u - th_1) as a 2x2 matrix of operators."""
    _check_oracle(chain)
    L = chain.n_sites
    dim = 2**L
    acc: OpMatrix = [
        [np.eye(dim, dtype=complex), np.zeros((dim, dim), dtype=complex)],
        [np.zeros((dim, dim), dtype=complex), np.eye(dim, dtype=complex)],
    ]
    for a in reversed(range(L)):
        x = u - chain.inhomogeneities[a]
        bu, bue, be = _br(chain, x), _br(chain, x + chain.eta), _br(chain, chain.eta)
        blocks = [
            [np.array([[bue, 0], [0, bu]]), np.array([[0, 0], [be, 0]])],
            [np.array([[0, be], [0, 0]]), np.array([[bu, 0], [0, bue]])],
        ]
        site = [[_lift(blocks[i][j], a, L) for j in range(2)] for i in range(2)]
        acc = _op_mul(acc, site)
    return acc


def double_row_monodromy(chain: ChainSpec, u: complex) -> OpMatrix:
    """U_-(u) = T(u) K(u - eta/2, xi_-) sigma_y T^t(-u) sigma_y."""
    if not chain.is_open:
        raise ValueError("double-row monodromy is defined for open chains")
    t_pos = monodromy(chain, u)
    t_neg = monodromy(chain, -u)
    k1 = _br(chain, u - chain.eta / 2 + chain.xi_minus)
    k2 = -_br(chain, u - chain.eta / 2 - chain.xi_minus)
    tk: OpMatrix = [
        [k1 * t_pos[0][0], k2 * t_pos[0][1]],
        [k1 * t_pos[1][0], k2 * t_pos[1][1]],
    ]
    t_hat: OpMatrix = [
        [t_neg[1][1], -t_neg[0][1]],
        [-t_neg[1][0], t_neg[0][0]],
    ]
    return _op_mul(tk, t_hat)


def double_row_dtilde(chain: ChainSpec, u: complex) -> np.ndarray:
    """Diagnostic combination [2u] D(u) - [eta] A(u) of the double-row entries."""
    um = double_row_monodromy(chain, u)
    return _br(chain, 2 * u) * um[1][1] - _br(chain, chain.eta) * um[0][0]


def transfer_matrix(chain: ChainSpec, u: complex) -> np.ndarray:
    """Dense transfer matrix at spectral parameter u."""
    if chain.is_open:
        um = double_row_monodromy(chain, u)
        kp1 = _br(chain, u + chain.eta / 2 + chain.xi_plus)
        kp2 = -_br(chain, u + chain.eta / 2 - chain.xi_plus)
        return kp1 * um[0][0] + kp2 * um[1][1]
    t = monodromy(chain, u)
    return t[0][0] + t[1][1]


def open_transfer_expansion(chain: ChainSpec, u: complex) -> np.ndarray:
    """Second evaluation path for the open transfer matrix.

    Uses the displayed expansion
    t = [2u+eta][u-eta/2+xi_+]/[2u] * A - [u+eta/2-xi_+]/[2u] * D-tilde,
    which the traced K(u+eta/2, xi_+) reproduces identically.
    """
    if not chain.is_open:
        raise ValueError("expansion applies to open chains")
    um = double_row_monodromy(chain, u)
    b2u = _br(chain, 2 * u)
    if abs(b2u) < DENOM_TOL:
        raise SingularPointError("expansion singular at [2u] = 0")
    dt = _br(chain, 2 * u) * um[1][1] - _br(chain, chain.eta) * um[0][0]
    c_a = _br(chain, 2 * u + chain.eta) * _br(chain, u - chain.eta / 2 + chain.xi_plus)
    c_d = _br(chain, u + chain.eta / 2 - chain.xi_plus)
    return (c_a * um[0][0] - c_d * dt) / b2u


def rtt_residual(chain: ChainSpec, u: complex, v: complex) -> float:
    """Max-norm defect of R12(u-v) T1(u) T2(v) = T2(v) T1(u) R12(u-v)."""
    _check_oracle(chain)
    dim = 2**chain.n_sites
    tu = monodromy(chain, u)
    tv = monodromy(chain, v)
    t1u = _aux_embed(tu, dim, first=True)
    t2v = _aux_embed(tv, dim, first=False)
    if chain.is_trig:
        r = r_matrix(u - v, BracketContext(chain.eta))
    else:
        r = _rational_r(u - v, chain.eta)
    r12 = np.kron(r, np.eye(dim))
    lhs = r12 @ t1u @ t2v
    rhs = t2v @ t1u @ r12
    return float(np.max(np.abs(lhs - rhs)))


def _rational_r(u: complex, eta: float) -> np.ndarray:
    return np.array(
        [
            [u + eta, 0, 0, 0],
            [0, u, eta, 0],
            [0, eta, u, 0],
            [0, 0, 0, u + eta],
        ],
        dtype=complex,
    )


def _aux_embed(t: OpMatrix, dim: int, first: bool) -> np.ndarray:
    out = np.zeros((4 * dim, 4 * dim), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2))
            e[i, j] = 1.0
            aux = np.kron(e, np.eye(2)) if first else np.kron(np.eye(2), e)
            out += np.kron(aux, t[i][j])
    return out


def commutator_residual(chain: ChainSpec, u: complex, v: complex) -> float:
    """Max-norm of [t(u), t(v)]."""
    tu = transfer_matrix(chain, u)
    tv = transfer_matrix(chain, v)
    return float(np.max(np.abs(tu @ tv - tv @ tu)))


# ---------------------------------------------------------------------------
# Bethe states and eigenvector certification
# ---------------------------------------------------------------------------


def bethe_vector(chain: ChainSpec, roots: BetheRoots, shift: float = 0.0) -> np.ndarray:
    """Product of creation operators on the all-up reference state.

    Closed chains use B(u_i + shift) from the one-row monodromy, open chains
    the (1,2) entry of the double-row monodromy.
    """
    _check_oracle(chain)
    dim = 2**chain.n_sites
    vec = np.zeros(dim, dtype=complex)
    vec[0] = 1.0
    for ui in roots.values:
        if chain.is_open:
            b = double_row_monodromy(chain, ui + shift)[0][1]
        else:
            b = monodromy(chain, ui + shift)[0][1]
        vec = b @ vec
    return vec


@dataclass
class RootCertificate:
    """Collinearity report of t(u)*v against v for a candidate root set."""

    residual: float
    shift: float
    eigenvalue: complex
    residual_by_shift: Dict[float, float] = field(default_factory=dict)
    degenerate: bool = False


def certify_roots(
    chain: ChainSpec,
    roots: BetheRoots,
    probe_u: complex = 0.1731,
    shifts: Sequence[float] = None,
) -> RootCertificate:
    """Check that the Bethe state is an eigenvector of the transfer matrix.

    The root-shift convention between the Bethe equations and the B-operator
    arguments is calibrated over ``shifts`` (defaults to 0, +-eta/2); the
    best shift is frozen into the certificate.
    """
    validate_roots(chain, roots)
    t = transfer_matrix(chain, probe_u)
    if shifts is None:
        shifts = tuple(s * chain.eta for s in SHIFT_CANDIDATES)
    by_shift: Dict[float, float] = {}
    best = (float("inf"), 0.0, 0j, True)
    for delta in shifts:
        vec = bethe_vector(chain, roots, shift=delta)
        norm = float(np.linalg.norm(vec))
        if norm < 1e-12:
            by_shift[delta] = float("inf")
            continue
        tv = t @ vec
        lam = complex(np.vdot(vec, tv) / np.vdot(vec, vec))
        res = float(np.linalg.norm(tv - lam * vec) / (norm * (1.0 + abs(lam))))
        by_shift[delta] = res
        if res < best[0]:
            best = (res, delta, lam, False)
    return RootCertificate(
        residual=best[0],
        shift=best[1],
        eigenvalue=best[2],
        residual_by_shift=by_shift,
        degenerate=best[3],
    )
