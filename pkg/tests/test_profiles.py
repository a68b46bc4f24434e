import math
import random
from fractions import Fraction

import pytest

from hnvol import (
    HNProfile,
    make_profile,
    profile_stats,
    slope_vector,
    sym_profile,
    tensor_profile,
    tensor_profile_bruteforce,
    trivial_profile,
    twist_profile,
)

F = Fraction


def random_profile(rng, max_rank=8, max_pieces=None):
    """Random profile with slope numerators in [-10, 10], denominators in [1, 4]."""
    total = rng.randint(1, max_rank)
    pieces = []
    left = total
    while left > 0:
        r = rng.randint(1, left)
        left -= r
        pieces.append((F(rng.randint(-10, 10), rng.randint(1, 4)), r))
        if max_pieces is not None and len(pieces) == max_pieces:
            pieces[-1] = (pieces[-1][0], pieces[-1][1] + left)
            break
    return make_profile(pieces)


def test_make_profile_canonical():
    p = make_profile([(0, 1), (1, 1)])
    assert p.pieces == ((F(0), 1), (F(1), 1))


def test_make_profile_merges_equal_slopes():
    p = make_profile([(1, 2), (1, 3)])
    assert p.pieces == ((F(1), 5),)


def test_make_profile_sorts():
    p = make_profile([(3, 1), (0, 2)])
    assert p.pieces == ((F(0), 2), (F(3), 1))


def test_make_profile_accepts_strings_and_fractions():
    p = make_profile([("1/2", 1), (F(-3, 2), 2)])
    assert p.pieces == ((F(-3, 2), 2), (F(1, 2), 1))


def test_make_profile_rejects_empty():
    with pytest.raises(ValueError):
        make_profile([])


def test_make_profile_rejects_bad_rank():
    with pytest.raises(ValueError):
        make_profile([(0, 0)])
    with pytest.raises(ValueError):
        make_profile([(0, -2)])
    with pytest.raises(ValueError):
        make_profile([(0, F(1, 2))])


def test_make_profile_rejects_float_slope():
    with pytest.raises(ValueError):
        make_profile([(0.5, 1)])


def test_profile_stats_two_pieces():
    assert profile_stats(make_profile([(0, 1), (1, 1)])) == (2, F(1), F(1, 2), F(0), F(1))


def test_profile_stats_semistable():
    assert profile_stats(make_profile([(5, 3)])) == (3, F(15), F(5), F(5), F(5))


def test_profile_stats_mixed_signs():
    st = profile_stats(make_profile([(-1, 2), (F(3, 2), 2)]))
    assert st == (4, F(1), F(1, 4), F(-1), F(3, 2))


def test_trivial_profile():
    t = trivial_profile()
    assert t.pieces == ((F(0), 1),)
    assert t.is_semistable


def test_slope_vector_basic():
    assert slope_vector(make_profile([(0, 1), (1, 1)])) == (F(0), F(1))
    assert slope_vector(make_profile([(2, 3)])) == (F(2), F(2), F(2))


def test_slope_vector_multiplicity():
    v = slope_vector(make_profile([(-1, 1), (0, 2), (F(1, 2), 1)]))
    assert v == (F(-1), F(0), F(0), F(1, 2))


def test_tensor_semistable_times_semistable():
    out = tensor_profile(make_profile([(2, 3)]), make_profile([(5, 4)]))
    assert out.pieces == ((F(7), 12),)


def test_tensor_two_step():
    p = make_profile([(0, 1), (1, 1)])
    out = tensor_profile(p, p)
    assert out.pieces == ((F(0), 1), (F(1), 2), (F(2), 1))


def test_tensor_generic():
    out = tensor_profile(make_profile([(0, 1), (3, 2)]), make_profile([(1, 1), (2, 1)]))
    assert out.pieces == ((F(1), 1), (F(2), 1), (F(4), 2), (F(5), 2))


def test_tensor_bruteforce_matches_examples():
    cases = [
        ([(2, 3)], [(5, 4)]),
        ([(0, 1), (1, 1)], [(0, 1), (1, 1)]),
        ([(0, 1), (3, 2)], [(1, 1), (2, 1)]),
    ]
    for a, b in cases:
        p, q = make_profile(a), make_profile(b)
        assert tensor_profile_bruteforce(p, q) == tensor_profile(p, q)


def test_tensor_rank_and_degree():
    rng = random.Random(7)
    for _ in range(50):
        p, q = random_profile(rng), random_profile(rng)
        out = tensor_profile(p, q)
        assert out.rank == p.rank * q.rank
        assert out.degree == p.degree * q.rank + p.rank * q.degree
        assert out.slope == p.slope + q.slope


def test_tensor_commutes():
    rng = random.Random(11)
    for _ in range(50):
        p, q = random_profile(rng), random_profile(rng)
        assert tensor_profile(p, q) == tensor_profile(q, p)


def test_tensor_agrees_with_bruteforce_randomized():
    rng = random.Random(13)
    for _ in range(100):
        p = random_profile(rng, max_rank=5)
        q = random_profile(rng, max_rank=5)
        assert tensor_profile(p, q) == tensor_profile_bruteforce(p, q)


def test_twist_examples():
    assert twist_profile(make_profile([(0, 1), (1, 1)]), 2).pieces == ((F(2), 1), (F(3), 1))
    p = make_profile([(5, 3)])
    assert twist_profile(p, 0) == p
    out = twist_profile(make_profile([(-1, 2), (F(3, 2), 2)]), F(-3, 2))
    assert out.pieces == ((F(-5, 2), 2), (F(0), 2))


def test_twist_commutes_with_tensor():
    rng = random.Random(17)
    for _ in range(30):
        p, q = random_profile(rng, 5), random_profile(rng, 5)
        a = F(rng.randint(-10, 10), rng.randint(1, 4))
        assert tensor_profile(twist_profile(p, a), q) == twist_profile(tensor_profile(p, q), a)


def test_sym_semistable():
    # one piece: a single composition class survives
    p = make_profile([(F(2, 3), 3)])
    out = sym_profile(p, 4)
    assert out.pieces == ((F(8, 3), math.comb(4 + 3 - 1, 3 - 1)),)


def test_sym_two_pieces():
    out = sym_profile(make_profile([(0, 1), (1, 1)]), 2)
    assert out.pieces == ((F(0), 1), (F(1), 1), (F(2), 1))


def test_sym_with_rank_two_piece():
    out = sym_profile(make_profile([(0, 1), (F(1, 2), 2)]), 2)
    assert out.pieces == ((F(0), 1), (F(1, 2), 2), (F(1), 3))
    assert out.rank == math.comb(2 + 3 - 1, 3 - 1)


def test_sym_zero_is_trivial():
    p = make_profile([(3, 2), (4, 1)])
    assert sym_profile(p, 0) == trivial_profile()


def test_sym_rejects_negative():
    with pytest.raises(ValueError):
        sym_profile(trivial_profile(), -1)


def test_sym_strategies_agree():
    rng = random.Random(19)
    for _ in range(40):
        p = random_profile(rng, max_rank=4, max_pieces=3)
        n = rng.randint(0, 8)
        assert sym_profile(p, n, strategy="enumerate") == sym_profile(p, n, strategy="dp")


def test_sym_totals():
    rng = random.Random(23)
    for _ in range(40):
        p = random_profile(rng, max_rank=4, max_pieces=3)
        n = rng.randint(1, 8)
        out = sym_profile(p, n)
        assert out.rank == math.comb(n + p.rank - 1, p.rank - 1)
        assert out.slope == n * p.slope


def test_sym_unknown_strategy():
    with pytest.raises(ValueError):
        sym_profile(trivial_profile(), 2, strategy="magic")


def test_all_operations_keep_slopes_increasing():
    rng = random.Random(29)
    for _ in range(40):
        p, q = random_profile(rng, 5), random_profile(rng, 5)
        for out in (
            tensor_profile(p, q),
            sym_profile(p, rng.randint(0, 6)),
            twist_profile(p, F(rng.randint(-8, 8), rng.randint(1, 3))),
        ):
            slopes = [s for s, _ in out.pieces]
            assert all(x < y for x, y in zip(slopes, slopes[1:]))
            assert all(r >= 1 for _, r in out.pieces)


def test_profile_is_immutable():
    p = make_profile([(0, 1)])
    with pytest.raises(AttributeError):
        p.pieces = ()


def test_hnprofile_direct_construction_validates():
    with pytest.raises(ValueError):
        HNProfile(((F(1), 1), (F(0), 1)))  # decreasing slopes
    with pytest.raises(ValueError):
        HNProfile(((F(0), 1), (F(0), 1)))  # duplicate slopes
