"""Smoke test for the compiled module.

Build with `cargo build -p sofree-py --features extension-module --release`,
copy `target/release/libpysofree.so` next to this file as `pysofree.so`
(or install with maturin), then run `python smoke_test.py`.
"""

from fractions import Fraction
from math import comb

import pysofree as sf


def test_counts():
    assert len(sf.enumerate_nc(4)) == 14
    assert [len(sf.enumerate_snc(m, n)) for m, n in [(1, 1), (1, 2), (2, 2), (1, 3)]] == [1, 4, 18, 15]
    assert len(sf.enumerate_ps_nc(1, 1)) == 2


def test_permutations():
    p = sf.Permutation("(1,5)(2,6)(3,4,7,8)", 8)
    assert str(p) == "(1,5)(2,6)(3,4,7,8)"
    assert p.is_annular_nc(5, 3)
    assert p.length() == 8 - 3
    assert p * p.inverse() == sf.Permutation("()", 8)
    assert sf.Permutation.from_images(p.images()) == p
    assert not sf.Permutation("(1,2)(3,4)", 4).is_annular_nc(2, 2)


def test_models():
    h = sf.Model("haar_unitary")
    assert h.letters() == ["u", "u*"]
    assert h.phi2("u.u", "u*.u*") == Fraction(2)
    s = sf.Model("semicircular")
    assert s.phi("s.s.s.s") == Fraction(2)
    assert s.kappa("s.s") == 1 and s.kappa("s.s.s.s") == 0
    again = sf.Model.from_json(s.to_json())
    assert again.phi("s.s.s.s.s.s") == 5


def test_squares():
    sq = sf.square_cumulants(sf.Model("semicircular"), "s", 4)
    for (p, q), v in sq["second"].items():
        assert v == p * comb(p + q - 1, p), (p, q, v)
    circ = sf.square_cumulants(sf.Model("circular"), "c", 4)
    assert all(v == 0 for v in circ["second"].values())
    assert sf.is_r_diagonal(sf.Model("circular"), "c")
    assert sf.is_even(sf.Model("semicircular"), "s")


def test_errors():
    try:
        sf.enumerate_snc(9, 9)
    except sf.CapExceededError:
        pass
    else:
        raise AssertionError("cap not enforced")
    try:
        sf.Model("gaussian")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown model accepted")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print("ok", name)
