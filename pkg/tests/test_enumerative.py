from fractions import Fraction as F
from math import comb

import pytest

from polytope_forge.enumerative import (
    EnumerativeError,
    FVector,
    GcVector,
    RatPolynomial,
    T,
    c_connected_sum_f,
    check_dehn_sommerville,
    connected_sum_f,
    cube_f,
    cubical_h,
    cubical_h_closed_form_numerator,
    density_schedule,
    f_from_gc,
    gc_of_c_connected_sum,
    gc_of_f,
    pairing_index,
    short_cubical_h,
    squared_cosine,
    tower_f,
)

ONE_PLUS_T = RatPolynomial((1, 1))


def test_cube3_short_h():
    assert short_cubical_h(cube_f(3)).padded(3) == (8, 8, 8)


def test_cube3_h():
    assert cubical_h(cube_f(3)).padded(4) == (4, 4, 4, 4)


@pytest.mark.parametrize("d", range(2, 7))
def test_cube_h_is_constant(d):
    assert cubical_h(cube_f(d)).padded(d + 1) == (2 ** (d - 1),) * (d + 1)
    assert short_cubical_h(cube_f(d)).padded(d) == (2 ** d,) * d


def test_exponent_d_reading_differs_by_one_minus_t():
    # with exponent d the same substitution picks up one more factor (1 - t)
    for d in (3, 4):
        f = cube_f(d)
        alt = RatPolynomial(())
        for i, fi in enumerate(f.entries):
            alt = alt + fi * (2 * T) ** i * RatPolynomial((1, -1)) ** (d - i)
        assert alt == RatPolynomial((1, -1)) * short_cubical_h(f)


def test_closed_form_odd_d_remainder():
    _, r = cubical_h_closed_form_numerator(cube_f(3)).divmod(ONE_PLUS_T)
    assert r == RatPolynomial((-8,))
    _, r = cubical_h_closed_form_numerator(cube_f(5)).divmod(ONE_PLUS_T)
    assert r.coefficients


def test_closed_form_even_d_agrees():
    for d in (2, 4, 6):
        f = tower_f(d, 3)
        q, r = cubical_h_closed_form_numerator(f).divmod(ONE_PLUS_T)
        assert not r.coefficients and q == cubical_h(f)


def test_tower_f_two_cubes():
    assert tower_f(3, 2).entries == (12, 20, 10)


def test_tower_f_twelve():
    f = tower_f(3, 12)
    assert f[0] == 52
    assert f.entries == (52, 100, 50)


def test_connected_sum_semigroup():
    d = 4
    for a in range(1, 5):
        for b in range(1, 5):
            assert connected_sum_f(tower_f(d, a), tower_f(d, b), d) == tower_f(d, a + b)


@pytest.mark.parametrize("d", range(2, 7))
def test_dehn_sommerville_towers(d):
    for m in range(1, 4 * d + 1):
        f = tower_f(d, m)
        assert f.euler_holds()
        h = cubical_h(f)
        assert check_dehn_sommerville(h, d)
        assert all(x >= 0 for x in gc_of_f(f).entries)


def test_gc_of_cube_and_tower():
    assert gc_of_f(cube_f(3)).entries == (4, 0)
    assert gc_of_f(tower_f(3, 12)).entries == (4, 44)


def test_c_connected_sum_gc():
    for d, expected in ((3, 52), (4, 136)):
        g = gc_of_f(cube_f(d))
        out = gc_of_c_connected_sum(g, g, d)
        assert out[1] == expected
        f = c_connected_sum_f(cube_f(d), cube_f(d), d, 4 * d)
        assert gc_of_f(f) == out


def test_f_from_gc_round_trip():
    for d in (3, 4, 5):
        for m in (1, 2, 7):
            f = tower_f(d, m)
            assert f_from_gc(gc_of_f(f)) == f


def test_bad_inputs():
    with pytest.raises(EnumerativeError):
        FVector(3, (8, 12))
    with pytest.raises(EnumerativeError):
        GcVector(4, (8, 1))
    with pytest.raises(EnumerativeError):
        gc_of_f(FVector(3, (4, 6, 4)))


def test_cube_f_counts():
    assert cube_f(4).entries == tuple(2 ** (4 - i) * comb(4, i) for i in range(4))


def test_pairing_index_exact():
    # ceil(log2(1 * 4 * 2^4)) = 6
    assert pairing_index(1, 4) == 6
    assert pairing_index(F(3, 2), 4) == 7


def test_squared_cosine_sign():
    assert squared_cosine((1, 0), (1, 1)) == F(1, 2)
    assert squared_cosine((1, 0), (-1, 1)) == F(-1, 2)


@pytest.mark.parametrize("d,target", [(4, (1, 2)), (5, (3, 1)), (4, (5, 1))])
def test_schedule_converges(d, target):
    steps = density_schedule(target, d)
    cos = [s.cos2 for s in steps]
    assert len(cos) == 10
    assert all(b >= a for a, b in zip(cos, cos[1:]))
    assert 1 - cos[-1] < 1 - cos[0] or cos[0] == 1
