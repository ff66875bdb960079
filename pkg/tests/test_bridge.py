"""Dictionary presets, parameter maps and identity certification."""

from fractions import Fraction

import pytest

from bethegauge.bridge import (
    DEFAULT_CUTOFFS,
    DictionaryPreset,
    FixedSite,
    XiExpr,
    all_presets,
    calibrate_preset,
    duality_compare,
    map_chain_to_gauge,
    map_gauge_to_chain,
    preset_by_id,
    presets,
    verify_identity,
)
from bethegauge.gauge import BRANCH_PLUS, GaugeTheorySpec

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# catalog structure
# ---------------------------------------------------------------------------


def test_catalog_counts():
    cat = all_presets()
    assert len(cat) == 13
    by = {}
    for p in cat:
        by.setdefault((p.family, p.regime), []).append(p.id)
    assert len(by[("A", "3d")]) == 1
    assert len(by[("B", "3d")]) == 5
    assert len(by[("C", "3d")]) == 2
    assert len(by[("D", "3d")]) == 1
    assert len(by[("B", "2d")]) == 1
    assert len(by[("C", "2d")]) == 2
    assert len(by[("D", "2d")]) == 1
    assert ("A", "2d") not in by
    assert presets("A", "2d") == []


def test_preset_lookup():
    p = preset_by_id("B-3d-P1")
    assert p.family == "B" and p.chain_kind == "open-xxz"
    assert len(p.fixed_sites) == 2
    with pytest.raises(ValueError):
        preset_by_id("B-3d-P9")
    with pytest.raises(ValueError):
        presets("E8", "3d")
    with pytest.raises(ValueError):
        presets("F4", "2d")
    with pytest.raises(ValueError):
        presets("B", "4d")


def test_branch_assignments():
    # exactly one cataloged dictionary lands on the -1 branch
    minus = [p.id for p in all_presets() if p.branch.sign == -1]
    assert minus == ["B-3d-P5"]


def test_chain_kinds_by_regime():
    for p in all_presets():
        if p.regime == "3d":
            assert p.chain_kind.endswith("xxz")
        else:
            assert p.chain_kind.endswith("xxx")
        if p.family == "A":
            assert not p.is_open
        else:
            assert p.is_open


def test_nf_relation_strings():
    assert preset_by_id("A-3d").nf_relation == "N_f = N_f' = L"
    assert preset_by_id("B-3d-P3").nf_relation == "N_f = 2*(L - 4)"
    assert preset_by_id("C-3d-P1").nf_relation == "N_f = 2*(L - 0)"


def test_xi_expressions():
    assert XiExpr(Fraction(0), HALF).value(0.3) == pytest.approx(0.15)
    assert XiExpr(HALF, -HALF).value(0.3) == pytest.approx(0.35)
    assert XiExpr(Fraction(0), HALF).label() == "1/2*eta"
    assert preset_by_id("B-3d-P1").xi_plus.label() == "-1/2*eta+1/2"
    dinf = preset_by_id("D-3d")
    assert dinf.xi_plus.label() == "+i*inf"
    assert dinf.xi_minus.label() == "-i*inf"
    assert dinf.xi_plus.value(0.3, cutoff=10.0) == 10j
    with pytest.raises(ValueError):
        dinf.xi_plus.value(0.3)


def test_fixed_site_contract():
    assert FixedSite(HALF).spin == Fraction(-1, 2)
    with pytest.raises(ValueError):
        FixedSite(Fraction(1, 4))


def test_preset_validation():
    with pytest.raises(ValueError):
        DictionaryPreset("x", "B", "4d", "open-xxz", None, None, (), BRANCH_PLUS)
    with pytest.raises(ValueError):
        DictionaryPreset(
            "x", "B", "3d", "open-xxz", None, None, (FixedSite(HALF),), BRANCH_PLUS
        )


# ---------------------------------------------------------------------------
# parameter maps
# ---------------------------------------------------------------------------


def test_open_map_site_counts():
    p = preset_by_id("B-3d-P3")
    spec = GaugeTheorySpec("B", 2, 4, (0.3, 0.7, 0.45, 0.6), 0.5)
    chain, pm = map_gauge_to_chain(p, spec)
    assert chain.n_sites == 2 + 4  # nf/2 free + fixed tail
    assert chain.n_magnons == 2
    assert pm.n_free == 2 and pm.n_fixed == 4
    # the fixed tail pins spin -1/2 with the preset's theta pattern
    assert chain.spins[2:] == (-0.5,) * 4
    assert chain.inhomogeneities[2:] == (0.0, 0.0, 0.5, 0.5)


def test_closed_map_site_counts():
    p = preset_by_id("A-3d")
    spec = GaugeTheorySpec("A", 2, 3, (0.3, 0.7, 0.5), 0.5, masses_anti=(0.45, 0.6, 0.35))
    chain, _ = map_gauge_to_chain(p, spec)
    assert chain.n_sites == 3
    assert chain.n_magnons == 2
    assert not chain.is_open


def test_round_trip_open():
    p = preset_by_id("B-3d-P2")
    spec = GaugeTheorySpec("B", 2, 4, (0.31, 0.72, 0.44, 0.63), 0.52)
    chain, _ = map_gauge_to_chain(p, spec)
    back = map_chain_to_gauge(p, chain)
    assert back.family == "B" and back.rank == 2
    assert max(abs(a - b) for a, b in zip(back.masses, sorted(spec.masses))) < 1e-12
    assert abs(back.m_adj - spec.m_adj) < 1e-12


def test_round_trip_closed_keeps_both_lists():
    p = preset_by_id("A-3d")
    spec = GaugeTheorySpec("A", 2, 2, (0.3, 0.7), 0.5, masses_anti=(0.45, 0.6))
    chain, _ = map_gauge_to_chain(p, spec)
    back = map_chain_to_gauge(p, chain)
    assert max(abs(a - b) for a, b in zip(back.masses, spec.masses)) < 1e-12
    assert max(abs(a - b) for a, b in zip(back.masses_anti, spec.masses_anti)) < 1e-12


def test_mass_order_is_immaterial():
    p = preset_by_id("C-3d-P1")
    a = GaugeTheorySpec("C", 2, 4, (0.31, 0.72, 0.44, 0.63), 0.52)
    b = GaugeTheorySpec("C", 2, 4, (0.72, 0.31, 0.63, 0.44), 0.52)
    assert map_gauge_to_chain(p, a)[0] == map_gauge_to_chain(p, b)[0]


def test_map_rejections():
    p = preset_by_id("B-3d-P1")
    with pytest.raises(ValueError):
        map_gauge_to_chain(p, GaugeTheorySpec("C", 2, 2, (0.3, 0.7), 0.5))
    with pytest.raises(ValueError):
        # open dictionaries pair the masses two by two
        map_gauge_to_chain(p, GaugeTheorySpec("B", 2, 1, (0.3,), 0.5))
    with pytest.raises(ValueError):
        map_gauge_to_chain(
            p, GaugeTheorySpec("B", 2, 2, (0.3, 0.7), 0.5, realization="I")
        )
    with pytest.raises(ValueError):
        map_gauge_to_chain(preset_by_id("D-3d"), GaugeTheorySpec("D", 2, 2, (0.3, 0.7), 0.5))


# ---------------------------------------------------------------------------
# identity verification
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("preset", all_presets(), ids=lambda p: p.id)
def test_preset_identities(preset):
    tol = 1e-6 if preset.id == "D-3d" else 1e-10
    report = verify_identity(preset, dims=(2, 2), samples=50, tol=tol, seed=11)
    assert report.passed, "%s residual %g" % (preset.id, report.max_residual)


def test_forced_branch_flip_fails():
    p = preset_by_id("B-3d-P5")
    ok = verify_identity(p, dims=(2, 2), samples=10, seed=3)
    assert ok.passed and ok.branch_used == -1
    flipped = verify_identity(p, dims=(2, 2), samples=10, seed=3, branch=BRANCH_PLUS)
    assert not flipped.passed
    assert flipped.max_residual >= 0.1
    assert flipped.branch_used == +1


def test_cutoff_extrapolation_notes():
    report = verify_identity(preset_by_id("D-3d"), dims=(2, 2), samples=20, tol=1e-6, seed=5)
    assert report.passed
    assert report.notes["cutoffs"] == list(DEFAULT_CUTOFFS)
    by_cutoff = report.notes["residual_by_cutoff"]
    assert set(by_cutoff) == {"5.0", "10.0", "20.0"}
    assert all(v >= 0 for v in by_cutoff.values())


def test_report_dict_uses_pass_key():
    report = verify_identity(preset_by_id("C-3d-P1"), dims=(1, 2), samples=5, seed=1)
    d = report.to_dict()
    assert "pass" in d and "passed" not in d
    assert d["preset_id"] == "C-3d-P1"


# ---------------------------------------------------------------------------
# calibration and duality
# ---------------------------------------------------------------------------


def test_calibration_recovers_c_dictionary():
    best = calibrate_preset("C", "3d", samples=15, seed=2, dims=(1, 2))
    assert best.family == "C"
    assert len(best.fixed_sites) == 0
    assert best.branch.sign == +1
    assert verify_identity(best, dims=(2, 2), samples=30, seed=9).passed


def test_calibration_recovers_b_theta_pattern():
    p1 = preset_by_id("B-3d-P1")
    best = calibrate_preset(
        "B", "3d",
        xi_candidates=[(p1.xi_plus, p1.xi_minus)],
        fixed_counts=(2,),
        samples=15,
        seed=2,
        dims=(1, 2),
    )
    assert [f.theta for f in best.fixed_sites] == [Fraction(0), Fraction(0)]
    assert best.branch.sign == +1


def test_duality_compare():
    masses = (0.31, 0.52)
    spec_i = GaugeTheorySpec("C", 2, 2, masses, 0.41, realization="I")
    spec_ii = GaugeTheorySpec("C", 2, 2, masses, 0.41)
    report = duality_compare(spec_i, spec_ii, samples=20, seed=4)
    assert report.passed
    assert report.max_residual <= 1e-10
    assert report.preset_id == "duality-C-2"


def test_duality_preconditions():
    masses = (0.31, 0.52)
    spec_i = GaugeTheorySpec("B", 2, 2, masses, 0.41, realization="I")
    spec_ii = GaugeTheorySpec("B", 2, 2, masses, 0.41)
    with pytest.raises(ValueError):
        duality_compare(spec_ii, spec_i)  # wrong order
    with pytest.raises(ValueError):
        duality_compare(spec_i, GaugeTheorySpec("C", 2, 2, masses, 0.41))
    with pytest.raises(ValueError):
        duality_compare(spec_i, GaugeTheorySpec("B", 2, 2, (0.31, 0.53), 0.41))
    with pytest.raises(ValueError):
        duality_compare(spec_i, GaugeTheorySpec("B", 2, 2, masses, 0.42))
    unequal = GaugeTheorySpec(
        "B", 2, 2, masses, 0.41, realization="I", masses_anti=(0.32, 0.51)
    )
    with pytest.raises(ValueError):
        duality_compare(unequal, spec_ii)
