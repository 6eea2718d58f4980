"""
Tests for the Chevalley and Weyl-basis structure constants
"""
import os
import sys
from fractions import Fraction

import pytest

# Add the current directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from chevalley import (chevalley_constants, chevalley_signs, magnitude_squared, verify_jacobi,
                       weyl_structure_table)
from errors import InvalidInputError
from rootsys import DynkinType, Root, build_root_system, root_string

TYPES = ("A2", "C2", "C3", "G2", "F4")


def test_a2_simple_pair_magnitude():
    rs = build_root_system(DynkinType("A", 2))
    table = weyl_structure_table(rs)
    assert table.n(Root((1, 0)), Root((0, 1))).sq == Fraction(1, 6)


def test_g2_simple_pair_magnitude():
    rs = build_root_system(DynkinType("G", 2))
    assert root_string(rs, (1, 0), (0, 1)) == (0, 3)
    assert magnitude_squared(rs, Root((1, 0)), Root((0, 1))) == Fraction(1, 8)


def test_magnitude_law_on_every_pair():
    for name in TYPES:
        rs = build_root_system(DynkinType.parse(name))
        table = weyl_structure_table(rs)
        for alpha in rs.roots:
            for beta in rs.roots:
                total = alpha.vector_add(beta)
                if not any(total) or not rs.is_root(total):
                    assert table.n(alpha, beta).is_zero()
                    continue
                p, q = root_string(rs, alpha, beta)
                assert table.n(alpha, beta).sq == Fraction(q * (1 - p), 2) * rs.inner(alpha, alpha), name


def test_integer_constants_are_string_lengths():
    rs = build_root_system(DynkinType("G", 2))
    constants = chevalley_constants(rs)
    for (alpha, beta), n in constants.items():
        p, _ = root_string(rs, alpha, beta)
        assert abs(n) == 1 - p
        assert constants[(beta, alpha)] == -n
        assert constants[(-alpha, -beta)] == -n
    assert sorted({abs(n) for n in constants.values()}) == [1, 2, 3]


def test_jacobi_and_symmetries_hold_exactly():
    for name in TYPES:
        rs = build_root_system(DynkinType.parse(name))
        report = verify_jacobi(weyl_structure_table(rs), rs)
        assert report.ok, report.to_dict()
        assert report.triples_checked > 0


def test_chevalley_signs_pass_integer_jacobi():
    for name in ("A3", "B3", "G2"):
        rs = build_root_system(DynkinType.parse(name))
        signs = chevalley_signs(rs)
        assert set(signs.values()) <= {1, -1}


def test_flipped_extraspecial_sign_stays_consistent():
    rs = build_root_system(DynkinType("C", 2))
    default = weyl_structure_table(rs)
    flipped = weyl_structure_table(rs, extraspecial_signs={Root((1, 1)): -1})
    assert verify_jacobi(flipped, rs).ok
    a1, a2 = Root((1, 0)), Root((0, 1))
    assert flipped.n(a1, a2) == -default.n(a1, a2)
    assert all(flipped.entries[key].sq == value.sq for key, value in default.entries.items())


def test_extraspecial_override_validation():
    rs = build_root_system(DynkinType("A", 2))
    with pytest.raises(InvalidInputError):
        chevalley_constants(rs, extraspecial_signs={(1, 1): 2})
    with pytest.raises(InvalidInputError):
        chevalley_constants(rs, extraspecial_signs={(2, 1): -1})


def test_table_serialization():
    rs = build_root_system(DynkinType("A", 2))
    payload = weyl_structure_table(rs).to_dict()
    assert payload["type"] == "A2"
    assert len(payload["entries"]) == 12
    first = payload["entries"][0]
    assert first["a"] == [1, 0] and first["b"] == [0, 1]
    assert first["nsq"] == "1/6"


def main():
    """Run every test in this file without pytest"""
    print("🧪 Structure constant tests")
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
