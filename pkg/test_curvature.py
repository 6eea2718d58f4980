"""
Tests for sectional curvature, pinching, flat planes and Ricci on the preset spaces
"""
import json
import os
import sys
from fractions import Fraction

import numpy as np
import pytest

# Add the current directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from chevalley import weyl_structure_table
from compact import build_compact
from curvature import (MetricSpec, PinchConfig, Plane, PlaneObjective, basis_curvature_table, beta_roots, descend,
                       centralizer_in_m, expected_beta_support, find_flat_plane, m_split, pinch, ricci,
                       sec_numerator, sectional_curvature, verify_brc_support)
from errors import InvalidInputError
from rootsys import DynkinType, Root, build_root_system
from threesym import PRESET_EXAMPLES, Auto3Spec, build_auto3, build_space

HALF = MetricSpec(Fraction(1, 2))


def test_cpn_basis_extremes_are_exact():
    for m in (2, 3):
        table = basis_curvature_table(build_space(f"cp{2 * m - 1}-sp"), HALF)
        values = [e.k for e in table]
        assert max(values) == Fraction(2, m + 1)
        assert min(values) == Fraction(1, 8 * (m + 1))


def test_m1_plane_and_mixed_planes():
    m = 2
    space = build_space("cp3-sp")
    m1, m2 = m_split(space)
    assert len(m1) == 2 and len(m2) == 2 * (2 * m - 1) - 2
    eye = np.eye(space.dim_m)
    assert sectional_curvature(space, eye[m1[0]], eye[m1[1]], HALF) == pytest.approx(2 / (m + 1), abs=1e-12)
    for p in m2:
        for x in m1:
            assert sectional_curvature(space, eye[x], eye[p], HALF) == pytest.approx(1 / (8 * (m + 1)), abs=1e-12)


def test_basis_table_matches_floating_formula():
    for name in ("cp3-sp", "s6", "f6"):
        space = build_space(name)
        eye = np.eye(space.dim_m)
        for entry in basis_curvature_table(space, HALF):
            assert sectional_curvature(space, eye[entry.i], eye[entry.j], HALF) == pytest.approx(float(entry.k), abs=1e-12)


def test_s6_basis_table_is_constant():
    values = {e.k for e in basis_curvature_table(build_space("s6"), HALF)}
    assert len(values) == 1


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    h = 1e-6
    for name in PRESET_EXAMPLES:
        space = build_space(name)
        objective = PlaneObjective(space, HALF)
        n = space.dim_m
        for _ in range(100):
            u, v = rng.standard_normal(n), rng.standard_normal(n)
            _, gu, gv = objective.value_and_grad(u, v)
            numeric = np.zeros(2 * n)
            for k in range(n):
                step = np.zeros(n)
                step[k] = h
                numeric[k] = (objective.value(u + step, v) - objective.value(u - step, v)) / (2 * h)
                numeric[n + k] = (objective.value(u, v + step) - objective.value(u, v - step)) / (2 * h)
            analytic = np.concatenate([gu, gv])
            assert np.linalg.norm(analytic - numeric) <= 1e-5 * max(1.0, np.linalg.norm(analytic)), name


def test_curvature_scales_inversely_with_metric():
    rng = np.random.default_rng(11)
    space = build_space("cp3-sp")
    base = basis_curvature_table(space, HALF)
    u, v = rng.standard_normal(space.dim_m), rng.standard_normal(space.dim_m)
    k_half = sectional_curvature(space, u, v, HALF)
    for scale in (Fraction(1, 2), Fraction(1), Fraction(3)):
        metric = MetricSpec(scale)
        ratio = Fraction(1, 2) / scale
        assert [e.k for e in basis_curvature_table(space, metric)] == [e.k * ratio for e in base]
        assert sectional_curvature(space, u, v, metric) == pytest.approx(k_half * float(ratio), rel=1e-12)


def test_sectional_curvature_is_plane_invariant():
    rng = np.random.default_rng(5)
    space = build_space("cp5-sp")
    u, v = rng.standard_normal(space.dim_m), rng.standard_normal(space.dim_m)
    k = sectional_curvature(space, u, v, HALF)
    assert sectional_curvature(space, 2 * u + v, u - 3 * v, HALF) == pytest.approx(k, rel=1e-10)
    x, y = Plane.from_vectors(u, v, HALF).vectors()
    assert sec_numerator(space, x, y, HALF) == pytest.approx(k, rel=1e-10)
    assert sec_numerator(space, u, v, HALF, normalize=True) == pytest.approx(k, rel=1e-10)


def test_dependent_plane_is_rejected():
    space = build_space("cp3-sp")
    u = np.arange(1.0, space.dim_m + 1)
    with pytest.raises(InvalidInputError):
        sectional_curvature(space, u, 2 * u, HALF)
    with pytest.raises(InvalidInputError):
        Plane.from_vectors(u, -u)
    with pytest.raises(InvalidInputError):
        sectional_curvature(space, u[:3], u[:3], HALF)


def test_cp3_centralizer_of_generic_vector_is_a_line():
    rng = np.random.default_rng(17)
    space = build_space("cp3-sp")
    for _ in range(100):
        assert centralizer_in_m(space, rng.standard_normal(space.dim_m)).dimension == 1
    with pytest.raises(InvalidInputError):
        centralizer_in_m(space, np.zeros(space.dim_m))


def test_pinching_on_cp3_and_cp5():
    for m in (2, 3):
        report = pinch(build_space(f"cp{2 * m - 1}-sp"), PinchConfig(starts=64, seed=42, metric=HALF))
        assert report.kmin == pytest.approx(1 / (8 * (m + 1)), abs=1e-6)
        assert report.kmax == pytest.approx(2 / (m + 1), abs=1e-6)
        assert report.delta == pytest.approx(1 / 16, abs=1e-4)
        assert report.flat_witness is None
        assert report.failed_starts == 0


def test_descend_uses_one_stopping_rule():
    space = build_space("cp5-sp")
    objective = PlaneObjective(space, HALF)
    for index in range(50, 60):
        rng = np.random.default_rng([42, index, 1])
        u, v = rng.standard_normal(space.dim_m), rng.standard_normal(space.dim_m)
        for maximize, max_iter in ((True, 5000), (False, 5000), (True, 3)):
            run = descend(objective, u, v, maximize, max_iter, 1e-8)
            assert run.converged == (run.grad_norm <= 1e-8 * max(1.0, abs(run.value)))
            if max_iter == 5000:
                assert run.converged, (index, maximize, run.grad_norm)
                assert run.iterations < max_iter


def test_fubini_study_quarter_pinching():
    for name in ("cp2-su", "cp3-su"):
        report = pinch(build_space(name), PinchConfig(starts=16, seed=42, metric=HALF))
        assert report.delta == pytest.approx(0.25, abs=1e-4), name


def test_s6_has_constant_curvature():
    report = pinch(build_space("s6"), PinchConfig(starts=16, seed=42, metric=HALF))
    assert report.kmax / report.kmin - 1 <= 1e-6


def test_flag_manifold_has_a_flat_plane():
    space = build_space("f6")
    witness = find_flat_plane(space, metric=HALF)
    assert witness is not None
    x, y = witness.vectors()
    assert sec_numerator(space, x, y, HALF) <= 1e-10
    assert centralizer_in_m(space, x).dimension >= 2
    report = pinch(space, PinchConfig(starts=8, seed=42, metric=HALF))
    assert report.flat_witness is not None
    assert report.kmin >= -1e-12


def test_pinch_brackets_every_basis_pair():
    for name in PRESET_EXAMPLES:
        space = build_space(name)
        report = pinch(space, PinchConfig(starts=4, seed=42, metric=HALF))
        values = [float(e.k) for e in report.basis_table]
        assert report.kmin <= min(values) + 1e-12, name
        assert max(values) - 1e-12 <= report.kmax, name
        assert report.kmin >= -1e-12, name


def test_pinch_is_scale_covariant():
    space = build_space("cp3-sp")
    base = pinch(space, PinchConfig(starts=8, seed=42, metric=HALF))
    for scale in (Fraction(1, 2), Fraction(1), Fraction(3)):
        metric = MetricSpec(scale)
        report = pinch(space, PinchConfig(starts=8, seed=42, metric=metric))
        ratio = 0.5 / float(scale)
        assert report.delta == pytest.approx(base.delta, abs=1e-8)
        assert report.kmax == pytest.approx(base.kmax * ratio, abs=1e-8)
        assert report.kmin == pytest.approx(base.kmin * ratio, abs=1e-8)
        # extremal planes stay extremal: evaluate them in the reference metric
        assert sectional_curvature(space, *report.argmax.vectors(), HALF) == pytest.approx(base.kmax, abs=1e-8)
        assert sectional_curvature(space, *report.argmin.vectors(), HALF) == pytest.approx(base.kmin, abs=1e-8)


def test_flat_planes_are_commuting_planes():
    rng = np.random.default_rng(29)
    space = build_space("f6")
    objective = PlaneObjective(space, HALF)

    def flat(x, y):
        return sec_numerator(space, x, y, HALF, normalize=True) <= 1e-10

    def commuting(x, y):
        x, y = Plane.from_vectors(x, y, HALF).vectors()
        return float(np.linalg.norm(objective.bracket(x, y))) <= 1e-4

    witness = find_flat_plane(space, metric=HALF)
    x, y = witness.vectors()
    assert flat(x, y) and commuting(x, y)

    # commuting => flat: a second centralizer direction of x
    null = centralizer_in_m(space, x).basis
    residuals = null - np.outer(x / np.linalg.norm(x), (x / np.linalg.norm(x)) @ null)
    w = residuals[:, int(np.argmax(np.linalg.norm(residuals, axis=0)))]
    assert commuting(x, w) and flat(x, w)

    for name in ("f6", "cp3-sp"):
        space = build_space(name)
        objective = PlaneObjective(space, HALF)
        for _ in range(50):
            u, v = rng.standard_normal(space.dim_m), rng.standard_normal(space.dim_m)
            assert flat(u, v) == commuting(u, v), name
            assert not flat(u, v), name


def test_einstein_defects():
    assert ricci(build_space("cp3-sp"), HALF).einstein_defect <= 1e-10
    assert ricci(build_space("s6"), HALF).einstein_defect <= 1e-10
    assert ricci(build_space("cp5-sp"), HALF).einstein_defect >= 1e-3


def test_pinch_is_deterministic():
    space = build_space("cp3-sp")
    cfg = PinchConfig(starts=8, seed=42, metric=HALF)
    first = json.dumps(pinch(space, cfg).to_dict(), sort_keys=True)
    second = json.dumps(pinch(space, cfg).to_dict(), sort_keys=True)
    threaded = json.dumps(pinch(space, PinchConfig(starts=8, seed=42, workers=4, metric=HALF)).to_dict(),
                          sort_keys=True)
    assert first == second == threaded


def test_pinch_needs_four_dimensions():
    with pytest.raises(InvalidInputError):
        pinch(build_space("A1:A3I:1"), PinchConfig(starts=1))
    with pytest.raises(InvalidInputError):
        PinchConfig(starts=0)
    with pytest.raises(InvalidInputError):
        MetricSpec(Fraction(-1, 2))


def test_beta_roots():
    rs = build_root_system(DynkinType("C", 3))
    assert [b.coords for b in beta_roots(rs)] == [(1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 2, 1), (2, 2, 1)]
    assert beta_roots(rs)[-1] == rs.maximal_root
    with pytest.raises(InvalidInputError):
        beta_roots(build_root_system(DynkinType("A", 3)))


def test_expected_support_samples():
    # m = 2: beta = a1, a1+a2, 2a1+a2
    assert expected_beta_support(2, 1, 2) == {(2, 1), (0, 1)}
    assert expected_beta_support(2, 1, 3) == {(1, 1)}
    assert expected_beta_support(2, 2, 3) == {(1, 0)}


def test_bracket_support_table():
    for m in (2, 3, 4):
        report = verify_brc_support(build_space(f"cp{2 * m - 1}-sp"))
        assert report.ok, report.to_dict()
        assert report.pairs_checked == (2 * m - 1) * (2 * m - 2)


def test_sign_convention_does_not_change_curvature():
    rs = build_root_system(DynkinType("C", 2))
    flipped = build_compact(rs, weyl_structure_table(rs, extraspecial_signs={Root((1, 1)): -1}))
    space = build_auto3(flipped, Auto3Spec("A3III", (1,)))
    reference = build_space("cp3-sp")
    assert basis_curvature_table(space, HALF) == basis_curvature_table(reference, HALF)
    assert ricci(space, HALF).einstein_defect == pytest.approx(ricci(reference, HALF).einstein_defect, abs=1e-12)
    report = pinch(space, PinchConfig(starts=8, seed=42, metric=HALF))
    assert report.delta == pytest.approx(1 / 16, abs=1e-4)


def main():
    """Run every test in this file without pytest"""
    print("🧪 Curvature tests")
    print("=" * 30)
    tests = [fn for name, fn in sorted(globals().items()) if name.startswith("test_") and callable(fn)]
    failed = []
    for test in tests:
        try:
            test()
            print(f"✅ {test.__name__}")
        except Exception as e:
            failed.append(test.__name__)
            print(f"❌ {test.__name__}: {e}")
    print(f"\n{len(tests) - len(failed)}/{len(tests)} passed")
    return not failed


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
