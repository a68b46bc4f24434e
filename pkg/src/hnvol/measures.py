"""Spectral measures: atoms plus piecewise-polynomial densities, exact.

A SpectralMeasure is a finite nonnegative measure on the line written as a
finite list of point masses plus polynomial density pieces on half-open
intervals [lo, hi).  All data are Fractions; two measures are equal iff
their canonical forms are componentwise equal, and the constructor is the
canonicalizer (merge atoms at one point, split/merge density pieces on a
common refinement, drop zeros).

The measures that show up downstream are slope distributions of bundle
profiles, their B-spline limits, and images under dilation, translation
and convolution.  Everything here is exact except `w1_distance`, which is
the one sanctioned grid approximation (and says so in its error bound).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .poly import Poly
from .profiles import HNProfile
from .rationals import rat

Atom = tuple[Fraction, Fraction]
Piece = tuple[Fraction, Fraction, Poly]


def _spot_check_nonneg(lo: Fraction, hi: Fraction, p: Poly) -> None:
    mid = (lo + hi) / 2
    for x in (lo, mid, hi):
        if p(x) < 0:
            raise ValueError(
                f"density piece on [{lo}, {hi}) is negative at x={x} (value {p(x)})"
            )


@dataclass(frozen=True)
class SpectralMeasure:
    atoms: tuple[Atom, ...]
    pieces: tuple[Piece, ...]

    @property
    def total_mass(self) -> Fraction:
        return self.moment(0)

    @property
    def mean(self) -> Fraction:
        return self.moment(1)

    @property
    def is_probability(self) -> bool:
        return self.total_mass == 1

    def moment(self, k: int) -> Fraction:
        """Exact k-th raw moment, integral of x^k against the measure."""
        if not isinstance(k, int) or isinstance(k, bool) or k < 0:
            raise ValueError(f"moment order must be a nonnegative integer, got {k!r}")
        xk = Poly.of([0] * k + [1])
        acc = sum((w * p**k for p, w in self.atoms), Fraction(0))
        for lo, hi, poly in self.pieces:
            acc += (xk * poly).integral(lo, hi)
        return acc

    @property
    def support(self) -> tuple[Fraction, Fraction] | None:
        """Hull [lo, hi] of the support, or None for the zero measure."""
        points = [p for p, _ in self.atoms]
        points += [lo for lo, _, _ in self.pieces] + [hi for _, hi, _ in self.pieces]
        if not points:
            return None
        return (min(points), max(points))


def make_measure(
    atoms: Iterable[tuple[object, object]] = (),
    pieces: Iterable[tuple[object, object, Poly]] = (),
) -> SpectralMeasure:
    """Canonicalize and validate raw atom/piece data into a measure.

    Atoms at the same point merge; pieces are re-cut on the common
    refinement of all endpoints, summed, merged where adjacent pieces share
    one polynomial, and dropped where zero.  Negative atom masses and
    densities that are negative at a piece endpoint or midpoint are
    rejected (a cheap tripwire, not a full nonnegativity proof).
    """
    atom_map: dict[Fraction, Fraction] = {}
    for point_in, mass_in in atoms:
        point, mass = rat(point_in), rat(mass_in)
        atom_map[point] = atom_map.get(point, Fraction(0)) + mass
    for point, mass in atom_map.items():
        if mass < 0:
            raise ValueError(f"negative atom mass {mass} at {point}")
    atom_out = tuple(sorted((p, w) for p, w in atom_map.items() if w != 0))

    raw: list[Piece] = []
    for lo_in, hi_in, poly in pieces:
        lo, hi = rat(lo_in), rat(hi_in)
        if lo > hi:
            raise ValueError(f"piece interval [{lo}, {hi}) is reversed")
        if lo == hi or poly.is_zero:
            continue
        raw.append((lo, hi, poly))

    piece_out: list[Piece] = []
    if raw:
        cuts = sorted({x for lo, hi, _ in raw for x in (lo, hi)})
        for left, right in zip(cuts, cuts[1:]):
            total = Poly.zero()
            for lo, hi, poly in raw:
                if lo <= left and right <= hi:
                    total = total + poly
            if total.is_zero:
                continue
            if piece_out and piece_out[-1][1] == left and piece_out[-1][2] == total:
                prev = piece_out.pop()
                piece_out.append((prev[0], right, total))
            else:
                piece_out.append((left, right, total))
        for lo, hi, poly in piece_out:
            _spot_check_nonneg(lo, hi, poly)

    return SpectralMeasure(atom_out, tuple(piece_out))


def dirac(point: object, mass: object = 1) -> SpectralMeasure:
    return make_measure(atoms=[(point, mass)])


def slope_measure(profile: HNProfile) -> SpectralMeasure:
    """Slope distribution of a profile: an atom at each slope, weighted by
    the rank fraction of its piece.  Always a probability measure."""
    r = profile.rank
    return make_measure(atoms=[(mu, Fraction(rk, r)) for mu, rk in profile.pieces])


def dilate(eps: object, m: SpectralMeasure) -> SpectralMeasure:
    """Pushforward under x -> eps*x (eps > 0): atoms move, densities get
    the usual 1/eps Jacobian."""
    e = rat(eps)
    if e <= 0:
        raise ValueError(f"dilation factor must be positive, got {e}")
    atoms = [(e * p, w) for p, w in m.atoms]
    inv = 1 / e
    pieces = [
        (e * lo, e * hi, poly.compose_affine(0, inv).scale(inv)) for lo, hi, poly in m.pieces
    ]
    return make_measure(atoms, pieces)


def translate(a: object, m: SpectralMeasure) -> SpectralMeasure:
    """Pushforward under x -> x + a."""
    shift = rat(a)
    atoms = [(p + shift, w) for p, w in m.atoms]
    pieces = [(lo + shift, hi + shift, poly.shift(shift)) for lo, hi, poly in m.pieces]
    return make_measure(atoms, pieces)


def _truncated_power(t: Fraction, q: int, factor: Fraction) -> Poly:
    """factor * (t - x)^q as a Poly in x."""
    coeffs = [
        factor * math.comb(q, k) * t ** (q - k) * (-1) ** k if k <= q else Fraction(0)
        for k in range(q + 1)
    ]
    return Poly.of(coeffs)


def bspline_measure(knots: Sequence[object]) -> SpectralMeasure:
    """Distribution of <s, X> for X uniform on the standard simplex,
    s the knot vector: the classical B-spline density on the knots.

    Built from confluent divided differences of t |-> (t - x)_+^(e-2)
    (e = number of knots), evaluated segment by segment between distinct
    knots, then scaled by (e - 1).  Repeated knots take derivative entries
    of order (run length - 1) <= e - 2, so the scheme stays well defined;
    all knots equal degenerates to a point mass.
    """
    ks = sorted(rat(k) for k in knots)
    if not ks:
        raise ValueError("need at least one knot")
    e = len(ks)
    if ks[0] == ks[-1]:
        return dirac(ks[0])

    p = e - 2
    distinct = sorted(set(ks))
    segments = list(zip(distinct, distinct[1:]))

    def base(t: Fraction, order: int) -> list[Poly]:
        # order-th t-derivative of (t - x)_+^p, restricted to each segment.
        q = p - order
        factor = Fraction(math.perm(p, order))
        out = []
        for _, seg_hi in segments:
            out.append(_truncated_power(t, q, factor) if t >= seg_hi else Poly.zero())
        return out

    # Divided-difference table over the full (multi)set of knots.
    table: dict[tuple[int, int], list[Poly]] = {}
    for i in range(e):
        table[(i, i)] = base(ks[i], 0)
    for span in range(1, e):
        for i in range(e - span):
            j = i + span
            if ks[i] == ks[j]:
                entry = [q.scale(Fraction(1, math.factorial(span))) for q in base(ks[i], span)]
            else:
                inv = 1 / (ks[j] - ks[i])
                hi_e, lo_e = table[(i + 1, j)], table[(i, j - 1)]
                entry = [(a - b).scale(inv) for a, b in zip(hi_e, lo_e)]
            table[(i, j)] = entry

    top = table[(0, e - 1)]
    pieces = [
        (lo, hi, poly.scale(e - 1)) for (lo, hi), poly in zip(segments, top) if not poly.is_zero
    ]
    return make_measure((), pieces)


def _piece_convolution(p1: Piece, p2: Piece) -> list[Piece]:
    """Exact convolution of two density pieces.

    (f*g)(x) = int f(t) g(x - t) dt over t in [max(a1, x-b2), min(b1, x-a2)].
    The monomials of f(t) g(x-t) are integrated in t symbolically; on each
    of the at most three x-regions the limits are affine in x, so the
    result is a polynomial per region.
    """
    a1, b1, f = p1
    a2, b2, g = p2

    integ: dict[tuple[int, int], Fraction] = {}
    for i, ci in enumerate(f.coeffs):
        if ci == 0:
            continue
        for j, dj in enumerate(g.coeffs):
            if dj == 0:
                continue
            for k in range(j + 1):
                te = i + j - k
                coeff = ci * dj * math.comb(j, k) * (-1) ** (j - k)
                key = (k, te + 1)
                integ[key] = integ.get(key, Fraction(0)) + coeff / (te + 1)

    def antider_at(c0: Fraction, c1: Fraction) -> Poly:
        # substitute t = c0 + c1*x into sum coeff * x^a * t^b
        affine = Poly.of([c0, c1])
        cache: dict[int, Poly] = {0: Poly.const(1)}
        acc = Poly.zero()
        for (a, b), cf in sorted(integ.items()):
            if b not in cache:
                cache[b] = affine.pow(b)
            acc = acc + (Poly.of([0] * a + [1]) * cache[b]).scale(cf)
        return acc

    breaks = sorted({a1 + a2, a1 + b2, b1 + a2, b1 + b2})
    out: list[Piece] = []
    for lo, hi in zip(breaks, breaks[1:]):
        if lo == hi:
            continue
        mid = (lo + hi) / 2
        lower = (a1, Fraction(0)) if mid < a1 + b2 else (-b2, Fraction(1))
        upper = (-a2, Fraction(1)) if mid < b1 + a2 else (b1, Fraction(0))
        poly = antider_at(*upper) - antider_at(*lower)
        if not poly.is_zero:
            out.append((lo, hi, poly))
    return out


def convolve(m1: SpectralMeasure, m2: SpectralMeasure) -> SpectralMeasure:
    """Additive convolution m1 * m2 (distribution of a sum of independent
    draws).  dirac(0) is the identity."""
    atoms: list[tuple[Fraction, Fraction]] = []
    pieces: list[Piece] = []
    for p, w in m1.atoms:
        for q, v in m2.atoms:
            atoms.append((p + q, w * v))
    for p, w in m1.atoms:
        for lo, hi, poly in m2.pieces:
            pieces.append((lo + p, hi + p, poly.shift(p).scale(w)))
    for p, w in m2.atoms:
        for lo, hi, poly in m1.pieces:
            pieces.append((lo + p, hi + p, poly.shift(p).scale(w)))
    for piece1 in m1.pieces:
        for piece2 in m2.pieces:
            pieces.extend(_piece_convolution(piece1, piece2))
    return make_measure(atoms, pieces)


def limit_measure(
    slopes_e: Sequence[object],
    slopes_f: Sequence[object] = (),
    m_scale: object = 1,
    l_scale: object = 1,
) -> SpectralMeasure:
    """Limit slope distribution of Sym^(mn) E (x) Sym^(ln) F under T_{1/n}:
    the convolution of the B-splines on knots m*(slopes of E) and
    l*(slopes of F).  Scale 0 collapses a factor to a point mass (the
    degenerate limit); negative scales are rejected.
    """
    se = [rat(s) for s in slopes_e]
    if not se:
        raise ValueError("slopes_e must be nonempty")
    if sorted(se) != se:
        raise ValueError("slopes_e must be non-decreasing")
    ms = rat(m_scale)
    if ms < 0:
        raise ValueError(f"m_scale must be nonnegative, got {ms}")
    out = bspline_measure([ms * s for s in se])

    sf = [rat(s) for s in slopes_f]
    if sf:
        if sorted(sf) != sf:
            raise ValueError("slopes_f must be non-decreasing")
        ls = rat(l_scale)
        if ls < 0:
            raise ValueError(f"l_scale must be nonnegative, got {ls}")
        out = convolve(out, bspline_measure([ls * s for s in sf]))
    return out


def integrate_plus(m: SpectralMeasure, a: object = 0) -> Fraction:
    """Exact integral of max(x + a, 0) against the measure."""
    shift = rat(a)
    cut = -shift
    acc = sum((w * (p + shift) for p, w in m.atoms if p + shift > 0), Fraction(0))
    linear = Poly.of([shift, 1])
    for lo, hi, poly in m.pieces:
        if hi <= cut:
            continue
        acc += (linear * poly).integral(max(lo, cut), hi)
    return acc


class W1Estimate(NamedTuple):
    value: float
    error_bound: float
    grid_size: int


@dataclass(frozen=True)
class PiecewiseCDF:
    """Right-continuous distribution function of a SpectralMeasure.

    breaks are the jump/kink locations; polys[i] gives F on
    [breaks[i], breaks[i+1]), F = 0 left of breaks[0] and F = total from
    breaks[-1] on.
    """

    breaks: tuple[Fraction, ...]
    polys: tuple[Poly, ...]
    total: Fraction

    def __call__(self, x: object) -> Fraction:
        v = rat(x)
        if not self.breaks or v < self.breaks[0]:
            return Fraction(0)
        if v >= self.breaks[-1]:
            return self.total
        idx = bisect_right(self.breaks, v) - 1
        return self.polys[idx](v)

    def values_float(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        out = np.full(xs.shape, float(self.total))
        if not self.breaks:
            return np.zeros(xs.shape)
        bf = np.array([float(b) for b in self.breaks])
        out[xs < bf[0]] = 0.0
        idx = np.searchsorted(bf, xs, side="right") - 1
        for i, poly in enumerate(self.polys):
            mask = idx == i
            if not mask.any():
                continue
            acc = np.zeros(mask.sum())
            for c in reversed(poly.coeffs or (Fraction(0),)):
                acc = acc * xs[mask] + float(c)
            out[mask] = acc
        return out


def cdf(m: SpectralMeasure) -> PiecewiseCDF:
    points = sorted(
        {p for p, _ in m.atoms}
        | {lo for lo, _, _ in m.pieces}
        | {hi for _, hi, _ in m.pieces}
    )
    if not points:
        return PiecewiseCDF((), (), Fraction(0))
    atom_at = dict(m.atoms)
    polys: list[Poly] = []
    acc = Fraction(0)
    for left, right in zip(points, points[1:]):
        acc += atom_at.get(left, Fraction(0))
        density = Poly.zero()
        for lo, hi, poly in m.pieces:
            if lo <= left and right <= hi:
                density = poly
                break
        if density.is_zero:
            polys.append(Poly.const(acc))
        else:
            anti = density.antiderivative()
            polys.append(anti + Poly.const(acc - anti(left)))
            acc += density.integral(left, right)
    acc += atom_at.get(points[-1], Fraction(0))
    return PiecewiseCDF(tuple(points), tuple(polys), acc)


def w1_distance(
    m1: SpectralMeasure, m2: SpectralMeasure, grid_size: int = 100_000
) -> W1Estimate:
    """Kantorovich W1 distance between two probability measures, estimated
    as the midpoint-grid integral of |F1 - F2| over the joint support hull.

    This is the package's one sanctioned approximation.  The reported
    error_bound is (support length) * (total variation of F1 - F2) /
    grid_size <= 2 * support / grid_size: each grid cell's midpoint value
    differs from the cell average by at most the variation inside the cell,
    and those variations sum to at most TV(F1) + TV(F2) = 2.
    """
    if not isinstance(grid_size, int) or isinstance(grid_size, bool) or grid_size < 1:
        raise ValueError(f"grid_size must be a positive integer, got {grid_size!r}")
    for name, m in (("m1", m1), ("m2", m2)):
        if m.total_mass != 1:
            raise ValueError(f"w1_distance expects probability measures; {name} has mass {m.total_mass}")
    f1, f2 = cdf(m1), cdf(m2)
    lo = min(f1.breaks[0], f2.breaks[0])
    hi = max(f1.breaks[-1], f2.breaks[-1])
    if lo == hi:
        return W1Estimate(0.0, 0.0, grid_size)
    width = hi - lo
    step = float(width) / grid_size
    xs = float(lo) + (np.arange(grid_size) + 0.5) * step
    diff = np.abs(f1.values_float(xs) - f2.values_float(xs))
    bound = float(width * (m1.total_mass + m2.total_mass) / grid_size)
    return W1Estimate(float(diff.sum() * step), bound, grid_size)


def sample_table(m: SpectralMeasure, count: int = 200) -> list[tuple[float, float, float]]:
    """(x, density, cdf) float rows for plotting; atoms show up as jumps in
    the cdf column only."""
    if not isinstance(count, int) or isinstance(count, bool) or count < 2:
        raise ValueError(f"sample count must be an integer >= 2, got {count!r}")
    hull = m.support
    if hull is None:
        return []
    lo, hi = hull
    if lo == hi:
        f = cdf(m)
        return [(float(lo), 0.0, float(f(lo)))]
    f = cdf(m)
    rows = []
    for i in range(count):
        x = lo + (hi - lo) * Fraction(i, count - 1)
        density = Fraction(0)
        for plo, phi, poly in m.pieces:
            if plo <= x < phi:
                density = poly(x)
                break
        rows.append((float(x), float(density), float(f(x))))
    return rows
