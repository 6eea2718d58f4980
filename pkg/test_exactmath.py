"""
Tests for the exact scalar domain and the rational solver
"""
import os
import sys
from fractions import Fraction

import pytest

# Add the current directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from errors import ExactnessError, LieCurvError
from exactmath import Surd, frac_str, is_positive_definite, parse_fraction, rational_sqrt, solve_rational


def test_fraction_text():
    assert frac_str(Fraction(-3, 6)) == "-1/2"
    assert frac_str(2) == "2/1"
    assert parse_fraction(" 3/9 ") == Fraction(1, 3)
    assert parse_fraction("0.25") == Fraction(1, 4)
    for bad in ("x", "1/0", ""):
        with pytest.raises(ValueError):
            parse_fraction(bad)


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(1, 2)) is None
    assert rational_sqrt(Fraction(-1)) is None


def test_surd_products_and_sums():
    half = Surd.root(1, Fraction(1, 2))
    assert half * half == Surd.rational(Fraction(1, 2))
    assert (half + half).sq == 2
    assert (Surd.root(1, 8) - Surd.root(1, 2)) == Surd.root(1, 2)
    assert (Surd.root(1, 3) + Surd.root(-1, 3)).is_zero()
    assert float(Surd.root(-1, 2)) == pytest.approx(-(2 ** 0.5))
    assert str(Surd.root(-1, 2)) == "-sqrt(2)"
    assert str(Surd.rational(Fraction(-3, 2))) == "-3/2"


def test_incommensurable_sum_is_an_exactness_error():
    with pytest.raises(ExactnessError, match="floating"):
        Surd.root(1, 2) + Surd.rational(1)
    with pytest.raises(ExactnessError):
        Surd.root(1, 3).to_rational()
    assert issubclass(ExactnessError, LieCurvError)


def test_invalid_surds():
    with pytest.raises(ValueError):
        Surd(2, Fraction(1))
    with pytest.raises(ValueError):
        Surd(1, Fraction(0))


def test_solve_rational():
    assert solve_rational([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    assert solve_rational([[1, 0], [0, 1], [1, 1]], [1, 2, 4]) is None
    assert solve_rational([[1, 0], [0, 1], [1, 1]], [1, 2, 3]) == [1, 2]
    with pytest.raises(ValueError):
        solve_rational([[1, 1]], [2])


def test_positive_definite():
    assert is_positive_definite([[Fraction(1, 6), Fraction(-1, 6)], [Fraction(-1, 6), Fraction(1, 3)]])
    assert not is_positive_definite([[1, 2], [2, 1]])


def main():
    """Run every test in this file without pytest"""
    print("🧪 Exact arithmetic tests")
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
