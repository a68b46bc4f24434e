"""Harder-Narasimhan slope profiles and the tensor/symmetric-power calculus.

A profile records, for a vector bundle on a smooth projective curve, the
slopes and ranks of the semistable quotients of its HN filtration:
pieces ((mu_1, r_1), ..., (mu_d, r_d)) with mu_1 < ... < mu_d, r_i >= 1.
Over a curve in characteristic zero, tensor products and symmetric powers
of semistable bundles stay semistable, so the profile of E (x) F and of
Sym^N E is determined by the profiles of E and F.  This module implements
that calculus exactly, over Fraction slopes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, NamedTuple, Sequence

from .rationals import rat

SlopeVector = tuple[Fraction, ...]


@dataclass(frozen=True)
class HNProfile:
    """Canonical slope profile: strictly increasing slopes, ranks >= 1."""

    pieces: tuple[tuple[Fraction, int], ...]

    def __post_init__(self) -> None:
        if not self.pieces:
            raise ValueError("profile needs at least one (slope, rank) piece")
        for mu, r in self.pieces:
            if not isinstance(mu, Fraction):
                raise ValueError(f"slope {mu!r} is not a Fraction")
            if not isinstance(r, int) or isinstance(r, bool) or r < 1:
                raise ValueError(f"rank {r!r} is not a positive integer")
        slopes = [mu for mu, _ in self.pieces]
        if any(a >= b for a, b in zip(slopes, slopes[1:])):
            raise ValueError("slopes must be strictly increasing; use make_profile")

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.pieces)

    @property
    def degree(self) -> Fraction:
        return sum((mu * r for mu, r in self.pieces), Fraction(0))

    @property
    def slope(self) -> Fraction:
        return self.degree / self.rank

    @property
    def mu_min(self) -> Fraction:
        return self.pieces[0][0]

    @property
    def mu_max(self) -> Fraction:
        return self.pieces[-1][0]

    @property
    def is_semistable(self) -> bool:
        return len(self.pieces) == 1


class ProfileStats(NamedTuple):
    rank: int
    degree: Fraction
    slope: Fraction
    mu_min: Fraction
    mu_max: Fraction


def make_profile(pairs: Iterable[tuple[object, int]]) -> HNProfile:
    """Build a profile from (slope, rank) pairs in any order.

    Pairs with equal slope are merged (ranks added); slopes are coerced
    with `rat`, so ints and "p/q" strings are accepted.
    """
    merged: dict[Fraction, int] = {}
    for entry in pairs:
        try:
            slope_in, rank_in = entry
        except (TypeError, ValueError) as exc:
            raise ValueError(f"profile piece {entry!r} is not a (slope, rank) pair") from exc
        mu = rat(slope_in)
        if not isinstance(rank_in, int) or isinstance(rank_in, bool) or rank_in < 1:
            raise ValueError(f"rank {rank_in!r} is not a positive integer")
        merged[mu] = merged.get(mu, 0) + rank_in
    if not merged:
        raise ValueError("profile needs at least one (slope, rank) piece")
    return HNProfile(tuple(sorted(merged.items())))


def trivial_profile() -> HNProfile:
    """Profile of a trivial line bundle: one piece, slope 0, rank 1."""
    return HNProfile(((Fraction(0), 1),))


def profile_stats(profile: HNProfile) -> ProfileStats:
    """(rank, degree, slope, mu_min, mu_max) of a profile."""
    return ProfileStats(
        profile.rank, profile.degree, profile.slope, profile.mu_min, profile.mu_max
    )


def slope_vector(profile: HNProfile) -> SlopeVector:
    """Non-decreasing slope multiset, one entry per rank unit.

    Length equals the rank; piece (mu, r) contributes mu exactly r times.
    """
    out: list[Fraction] = []
    for mu, r in profile.pieces:
        out.extend([mu] * r)
    return tuple(out)


def twist_profile(profile: HNProfile, a: object) -> HNProfile:
    """Profile after twisting by a (possibly formal) degree-a line bundle:
    every slope shifts by a, ranks unchanged."""
    shift = rat(a)
    return HNProfile(tuple((mu + shift, r) for mu, r in profile.pieces))


def tensor_profile(p: HNProfile, q: HNProfile) -> HNProfile:
    """Profile of the tensor product: slopes add pairwise, ranks multiply,
    then pieces with equal slope merge."""
    merged: dict[Fraction, int] = {}
    for (mu1, r1), (mu2, r2) in product(p.pieces, q.pieces):
        key = mu1 + mu2
        merged[key] = merged.get(key, 0) + r1 * r2
    return HNProfile(tuple(sorted(merged.items())))


def tensor_profile_bruteforce(p: HNProfile, q: HNProfile) -> HNProfile:
    """Independent tensor computation through the filtration lattice.

    Models the image filtration directly: index set Theta = J1 x J2 with the
    componentwise partial order, sub-bundle images Im_(a,b) = E_a (x) F_b
    (E_a = span of quotients with index >= a), and for each candidate slope
    v the saturated set A_v = {alpha : mu(alpha) >= v}.  The rank of the
    graded piece at v is rk Im_{A_v} - rk Im_{A_>v}, where the rank of a
    saturated union is the sum of the quotient-rank products it covers.
    Quadratic-ish and naive on purpose: it is the oracle the grouped-sum
    implementation is checked against.
    """
    d, h = len(p.pieces), len(q.pieces)
    theta = [(a, b) for a in range(d) for b in range(h)]
    mu = {(a, b): p.pieces[a][0] + q.pieces[b][0] for a, b in theta}

    def upward_closure(cell: tuple[int, int]) -> Iterator[tuple[int, int]]:
        a0, b0 = cell
        return ((a, b) for a in range(a0, d) for b in range(b0, h))

    def im_rank(cells: set[tuple[int, int]]) -> int:
        covered: set[tuple[int, int]] = set()
        for cell in cells:
            covered.update(upward_closure(cell))
        return sum(p.pieces[a][1] * q.pieces[b][1] for a, b in covered)

    values = sorted(set(mu.values()))
    pieces: list[tuple[Fraction, int]] = []
    for j, v in enumerate(values):
        sat = {cell for cell in theta if mu[cell] >= v}
        for cell in sat:
            assert all(other in sat for other in upward_closure(cell)), "A_v not saturated"
        above = {cell for cell in theta if mu[cell] > v}
        r = im_rank(sat) - im_rank(above)
        if r > 0:
            pieces.append((v, r))
    return HNProfile(tuple(pieces))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` nonnegative ints summing to `total`, streamed."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def _sym_enumerate(profile: HNProfile, n: int) -> dict[Fraction, int]:
    slopes = [mu for mu, _ in profile.pieces]
    ranks = [r for _, r in profile.pieces]
    out: dict[Fraction, int] = {}
    for combo in _compositions(n, len(slopes)):
        sl = sum((Fraction(a) * mu for a, mu in zip(combo, slopes)), Fraction(0))
        rk = math.prod(math.comb(a + r - 1, r - 1) for a, r in zip(combo, ranks))
        out[sl] = out.get(sl, 0) + rk
    return out


def _sym_dp(profile: HNProfile, n: int) -> dict[Fraction, int]:
    # Rescale slopes to integers so DP states key on (used total, int slope).
    denom = math.lcm(*(mu.denominator for mu, _ in profile.pieces))
    keys = [int(mu * denom) for mu, _ in profile.pieces]
    ranks = [r for _, r in profile.pieces]

    # Convolve the first d-1 pieces; the last piece's exponent is forced to
    # n - t, which keeps the d = 2 case linear in n instead of quadratic.
    states: dict[tuple[int, int], int] = {(0, 0): 1}
    for k, r in zip(keys[:-1], ranks[:-1]):
        nxt: dict[tuple[int, int], int] = {}
        for (t, s), count in states.items():
            for a in range(n - t + 1):
                st = (t + a, s + a * k)
                nxt[st] = nxt.get(st, 0) + count * math.comb(a + r - 1, r - 1)
        states = nxt

    k_last, r_last = keys[-1], ranks[-1]
    out: dict[Fraction, int] = {}
    for (t, s), count in states.items():
        a = n - t
        sl = Fraction(s + a * k_last, denom)
        rk = count * math.comb(a + r_last - 1, r_last - 1)
        out[sl] = out.get(sl, 0) + rk
    return out


def sym_profile(profile: HNProfile, n: int, strategy: str = "dp") -> HNProfile:
    """Profile of the N-th symmetric power.

    Each composition (a_1, ..., a_d) of n contributes slope sum(a_i mu_i)
    with rank prod(C(a_i + r_i - 1, r_i - 1)); equal slopes merge.  Total
    rank is C(n + rank - 1, rank - 1).

    strategy="enumerate" streams the compositions directly (the reference
    path); strategy="dp" convolves one piece at a time keyed on integer
    slope numerators, which is what makes large n affordable.  Sym^0 is the
    trivial profile for either strategy.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"symmetric power must be a nonnegative integer, got {n!r}")
    if n == 0:
        return trivial_profile()
    if strategy == "enumerate":
        table = _sym_enumerate(profile, n)
    elif strategy == "dp":
        table = _sym_dp(profile, n)
    else:
        raise ValueError(f"unknown strategy {strategy!r} (want 'dp' or 'enumerate')")
    return HNProfile(tuple(sorted(table.items())))


def profile_from_pairs(pairs: Sequence[Sequence[object]]) -> HNProfile:
    """Wire-format helper: [["p/q", r], ...] -> HNProfile."""
    return make_profile((slope, r) for slope, r in ((e[0], e[1]) for e in pairs))
