"""Acceptance gate: one test per release criterion.

Each criterion is implemented here from the public API, independently of
the command line battery, so `pytest -v` reports one pass/fail line per
criterion.  Tolerances are part of the contract and must not be loosened.
"""

import json
import math
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from bethegauge.bridge import all_presets, duality_compare, preset_by_id, verify_identity
from bethegauge.chain import (
    BetheRoots,
    ChainSpec,
    bethe_lhs,
    certify_roots,
    commutator_residual,
    yang_baxter_residual,
)
from bethegauge.gauge import (
    BRANCH_PLUS,
    GaugeTheorySpec,
    superpotential_grad,
    superpotential_value,
    vacuum_from_gradient,
    vacuum_lhs,
    vacuum_lhs_2d,
    vacuum_lhs_squared,
)
from bethegauge.lie_roots import generate_roots, weight_factor
from bethegauge.solve import SolveConfig, solve_bethe
from bethegauge.specfun import BracketContext, SingularPointError, dilog, \
    dilog_factorization_residual, dilog_qpoch_link

SEED = 42


def test_criterion_1_root_counts_and_weight_factors():
    for n in range(1, 9):
        assert len(generate_roots("A", n)) == n * (n - 1)
        assert len(generate_roots("B", n)) == 2 * n * n
        assert len(generate_roots("C", n)) == 2 * n * n
        assert len(generate_roots("D", n)) == 2 * n * (n - 1)
    assert len(generate_roots("E", 6)) == 72
    assert len(generate_roots("E", 7)) == 126
    assert len(generate_roots("F", 4)) == 48

    e8 = generate_roots("E", 8)
    assert len(e8) == 240
    integer = [r for r in e8 if all(c.denominator == 1 for c in r)]
    half = [r for r in e8 if all(c.denominator == 2 for c in r)]
    assert len(integer) == 112 and len(half) == 128
    for r in half:
        assert sum(1 for c in r if c < 0) % 2 == 0

    def histogram(roots):
        out = {}
        for r in roots:
            w = weight_factor(r)
            out[w] = out.get(w, 0) + 1
        return out

    n = 3
    assert histogram(generate_roots("A", n)) == {Fraction(2): n * (n - 1)}
    assert histogram(generate_roots("D", n)) == {Fraction(2): 2 * n * (n - 1)}
    assert histogram(generate_roots("B", n)) == {
        Fraction(2): 2 * n * (n - 1), Fraction(4): 2 * n
    }
    assert histogram(generate_roots("C", n)) == {
        Fraction(2): 2 * n * (n - 1), Fraction(1): 2 * n
    }
    assert histogram(generate_roots("E", 8)) == {Fraction(2): 240}
    assert histogram(generate_roots("F", 4)) == {Fraction(2): 24, Fraction(4): 24}


def test_criterion_2_gradient_route_matches_products():
    rng = np.random.default_rng(SEED)
    worst_prod = 0.0
    worst_fd = 0.0
    h = 1e-6
    for family in ("A", "B", "C", "D"):
        accepted = 0
        attempts = 0
        while accepted < 20:
            attempts += 1
            assert attempts < 2000, "sampling failed to find admissible points"
            rank = 1 + accepted % 3
            eta = rng.uniform(0.09, 0.34)
            kwargs = {}
            if family == "A":
                kwargs["masses_anti"] = tuple(math.pi * rng.uniform(0.07, 0.43, size=2))
            spec = GaugeTheorySpec(
                family, rank, 2, tuple(math.pi * rng.uniform(0.07, 0.43, size=2)),
                math.pi * eta, **kwargs,
            )
            sigma = math.pi * rng.uniform(0.05, 0.95, size=spec.dim)
            try:
                prods = [vacuum_lhs_squared(spec, sigma, j) for j in range(spec.dim)]
                if any(not (1e-3 < abs(p) < 1e3) for p in prods):
                    continue
                route = vacuum_from_gradient(spec, sigma)
                grad = superpotential_grad(spec, sigma)
                for j in range(spec.dim):
                    up = sigma.copy()
                    dn = sigma.copy()
                    up[j] += h
                    dn[j] -= h
                    fd = (superpotential_value(spec, up) - superpotential_value(spec, dn)) / (2 * h)
                    worst_fd = max(worst_fd, abs(fd - grad[j]))
                worst_prod = max(
                    worst_prod, max(abs(route[j] - prods[j]) for j in range(spec.dim))
                )
            except SingularPointError:
                continue
            accepted += 1
    assert worst_prod <= 1e-8, "gradient route off by %g" % worst_prod
    assert worst_fd <= 1e-6, "finite differences off by %g" % worst_fd


def test_criterion_3_all_presets_certify():
    failures = []
    for preset in all_presets():
        tol = 1e-6 if preset.id == "D-3d" else 1e-10
        report = verify_identity(preset, dims=(2, 2), samples=200, tol=tol, seed=SEED)
        if not report.passed:
            failures.append((preset.id, report.max_residual))
    assert not failures, "presets out of tolerance: %s" % failures

    flipped = verify_identity(
        preset_by_id("B-3d-P5"), dims=(2, 2), samples=200, seed=SEED, branch=BRANCH_PLUS
    )
    assert flipped.max_residual >= 0.1, "branch flip must be detectable"


def test_criterion_4_transfer_oracle_certifies_solver_roots():
    cfg_base = dict(n_starts=48, tol=1e-10)
    for draw in range(5):
        rng = np.random.default_rng(SEED + draw)
        eta = float(rng.uniform(0.09, 0.34))
        u = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.4, 0.4))
        v = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.4, 0.4))
        assert yang_baxter_residual(u, v, BracketContext(eta)) <= 1e-12

        thetas = tuple(rng.uniform(-0.12, 0.12, size=3))
        closed = ChainSpec("closed-xxz", 3, 1, eta, (0.5,) * 3, thetas)
        assert commutator_residual(closed, u, v) <= 1e-10
        xi_p = float(rng.uniform(0.15, 0.45))
        xi_m = float(-rng.uniform(0.15, 0.45))
        open_chain = ChainSpec(
            "open-xxz", 2, 1, eta, (0.5,) * 2,
            tuple(rng.uniform(-0.12, 0.12, size=2)), xi_plus=xi_p, xi_minus=xi_m,
        )
        assert commutator_residual(open_chain, u, v) <= 1e-10

        systems = [
            closed,
            ChainSpec("closed-xxz", 3, 2, eta, (0.5,) * 3, thetas),
            open_chain,
        ]
        for chain in systems:
            result = solve_bethe(chain, SolveConfig(seed=SEED + draw, **cfg_base))
            assert len(result) >= 1, "no roots for %s at draw %d" % (chain.kind, draw)
            for roots in result:
                cert = certify_roots(chain, roots)
                assert cert.residual <= 1e-8, (
                    "certificate %g for %s" % (cert.residual, roots.values)
                )


def test_criterion_5_degeneration_slopes():
    eps = (0.1, 0.05, 0.025, 0.0125)

    for family in ("A", "B", "C", "D"):
        base = GaugeTheorySpec(family, 2, 2, (0.21, 0.34), 0.19)
        sigma = (0.41, 0.87)
        gaps = []
        for e in eps:
            scaled = GaugeTheorySpec(family, 2, 2, (0.21 * e, 0.34 * e), 0.19 * e)
            sig_e = tuple(e * s for s in sigma)
            gaps.append(
                max(
                    abs(vacuum_lhs(scaled, sig_e, j) - vacuum_lhs_2d(base, sigma, j))
                    for j in range(2)
                )
            )
        slope = float(np.polyfit(np.log(eps), np.log(gaps), 1)[0])
        assert abs(slope - 2.0) <= 0.2, "family %s slope %g" % (family, slope)

    xxx = ChainSpec("closed-xxx", 2, 1, 0.37, (0.5,) * 2, (0.05, -0.08))
    target = bethe_lhs(xxx, BetheRoots((0.155,)), 0)
    gaps = []
    for e in eps:
        chain = ChainSpec(
            "closed-xxz", 2, 1, 0.37 * e, (0.5,) * 2, (0.05 * e, -0.08 * e)
        )
        gaps.append(abs(bethe_lhs(chain, BetheRoots((0.155 * e,)), 0) - target))
    slope = float(np.polyfit(np.log(eps), np.log(gaps), 1)[0])
    assert abs(slope - 2.0) <= 0.2, "chain slope %g" % slope


def test_criterion_6_realization_duality():
    for family in ("B", "C"):
        for rank in (1, 2, 3):
            masses = (0.31, 0.52)
            spec_i = GaugeTheorySpec(family, rank, 2, masses, 0.41, realization="I")
            spec_ii = GaugeTheorySpec(family, rank, 2, masses, 0.41)
            report = duality_compare(spec_i, spec_ii, samples=50, seed=SEED, tol=1e-10)
            assert report.passed, (
                "duality %s rank %d residual %g" % (family, rank, report.max_residual)
            )


def test_criterion_7_dilog_identities():
    # frozen references (mpmath polylog at 30 digits)
    references = [
        ((0.5 + 0j), complex(0.58224052646501251, 0.0)),
        ((-0.5 + 0j), complex(-0.4484142069236462, 0.0)),
        ((0.3 + 0.4j), complex(0.26659686674274042, 0.46136289181910899)),
        ((-1.2 + 0.7j), complex(-0.99763925792564034, 0.4539290196093633)),
        (0.9j, complex(-0.1717794378658015, 0.83598828572550505)),
        ((2.5 - 1j), complex(1.3042589918770261, -2.9032643754077257)),
        ((-3 + 0j), complex(-1.939375420766709, 0.0)),
        ((-0.4947491825078604 + 0.8459451793158962j),
         complex(-0.54020974668689532, 0.6630814418860953)),
    ]
    for z, ref in references:
        assert abs(dilog(z) - ref) <= 1e-12
    # classical values on the boundary of the unit disc
    assert abs(dilog(1.0) - math.pi**2 / 6) <= 1e-12
    assert abs(dilog(-1.0) + math.pi**2 / 12) <= 1e-12

    rng = np.random.default_rng(SEED)
    worst = 0.0
    for r in (2, 3, 4):
        for _ in range(20):
            x = complex(rng.uniform(-2.5, math.log(0.9)), rng.uniform(-3.0, 3.0))
            worst = max(worst, dilog_factorization_residual(np.exp(x), r))
    assert worst <= 1e-10, "factorization residual %g" % worst

    rels = []
    for beta2 in (1e-1, 1e-2, 1e-3):
        _, _, rel = dilog_qpoch_link(np.exp(0.4j), beta2)
        rels.append(rel)
    assert rels[0] > rels[1] > rels[2], "link error must tighten with beta2"
    assert rels[-1] <= 5e-3, "link error %g at beta2 = 1e-3" % rels[-1]


def test_criterion_8_reproducible_battery():
    argv = [
        sys.executable, "-m", "bethegauge.cli",
        "report-all", "--seed", "42", "--json", "--no-timestamp",
    ]
    first = subprocess.run(argv, capture_output=True)
    second = subprocess.run(argv, capture_output=True)
    assert first.returncode == 0, first.stderr.decode()
    assert second.returncode == 0, second.stderr.decode()
    assert first.stdout == second.stdout, "battery output is not byte-stable"
    doc = json.loads(first.stdout)
    assert all(c["pass"] for c in doc["criteria"])
