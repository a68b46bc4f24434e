"""Intersection forms and effective/nef cone constructors for 3-fold
projectivized bundles.

Classes live in a small rational Neron-Severi-type vector space with named
basis labels; the first label is always "xi", the tautological divisor
class of the projectivization, followed by pullback classes from the base.
The TriForm type carries the full top-intersection 3-tensor obtained from
the Grothendieck relation for a rank-2 bundle over a surface, which is all
the cone statements here need.  Cones are simplicial, stored by their
generator matrices; membership is decided exactly with a certificate
either way.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .rationals import rat


@dataclass(frozen=True)
class ClassVector:
    basis: tuple[str, ...]
    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(set(self.basis)) != len(self.basis):
            raise ValueError(f"basis labels must be unique, got {self.basis}")
        if len(self.coords) != len(self.basis):
            raise ValueError(
                f"coords length {len(self.coords)} != basis length {len(self.basis)}"
            )

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def add(self, other: "ClassVector") -> "ClassVector":
        _same_basis(self, other)
        return ClassVector(self.basis, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def sub(self, other: "ClassVector") -> "ClassVector":
        _same_basis(self, other)
        return ClassVector(self.basis, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, c: object) -> "ClassVector":
        k = rat(c)
        return ClassVector(self.basis, tuple(k * a for a in self.coords))


def class_vector(basis: Sequence[str], coords: Sequence[object]) -> ClassVector:
    return ClassVector(tuple(basis), tuple(rat(c) for c in coords))


def _same_basis(a, b) -> None:
    if a.basis != b.basis:
        raise ValueError(f"basis mismatch: {a.basis} vs {b.basis}")


@dataclass(frozen=True)
class TriForm:
    """Symmetric trilinear intersection form over a named basis."""

    basis: tuple[str, ...]
    entries: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self) -> None:
        n = len(self.basis)
        if len(self.entries) != n or any(
            len(plane) != n or any(len(row) != n for row in plane) for plane in self.entries
        ):
            raise ValueError("entries must form an n x n x n cube over the basis")
        for i, j, k in combinations_with_replacement(range(n), 3):
            vals = {
                self.entries[a][b][c]
                for a, b, c in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}
            }
            if len(vals) != 1:
                raise ValueError(f"entries are not symmetric at indices {(i, j, k)}")

    def value(self, u: ClassVector, v: ClassVector, w: ClassVector) -> Fraction:
        for vec in (u, v, w):
            if vec.basis != self.basis:
                raise ValueError(f"basis mismatch: form {self.basis} vs vector {vec.basis}")
        acc = Fraction(0)
        for i, a in enumerate(u.coords):
            if a == 0:
                continue
            for j, b in enumerate(v.coords):
                if b == 0:
                    continue
                for k, c in enumerate(w.coords):
                    if c != 0:
                        acc += a * b * c * self.entries[i][j][k]
        return acc


@dataclass(frozen=True)
class PolyCone:
    basis: tuple[str, ...]
    generators: tuple[ClassVector, ...]

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("cone needs at least one generator")
        for g in self.generators:
            if g.basis != self.basis:
                raise ValueError(f"generator basis {g.basis} != cone basis {self.basis}")
            if g.is_zero:
                raise ValueError("cone generators must be nonzero")


@dataclass(frozen=True)
class ConeMembership:
    inside: bool
    coords: tuple[Fraction, ...] | None
    separator: ClassVector | None


def discriminant_end(r: int, c1_sq: object, c2: object) -> Fraction:
    """c2 of End(E) for a rank-r bundle: 2r*c2(E) - (r-1)*c1(E)^2.

    Its vanishing is the flatness criterion behind the semistable cone
    description; callers test it, this function only evaluates it.
    """
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        raise ValueError(f"rank must be a positive integer, got {r!r}")
    return 2 * r * rat(c2) - (r - 1) * rat(c1_sq)


def triform_pe_over_surface(
    c1_e: ClassVector, c2_e: object, base_form: Sequence[Sequence[object]]
) -> TriForm:
    """Top intersection form of P(E) for rank-2 E over a surface.

    c1_e lives in the surface basis, c2_e is the degree of c2(E), and
    base_form is the intersection matrix of the surface basis.  Reduction
    rules from the Grothendieck relation: xi^3 = c1^2 - c2,
    xi^2 . pi*D = c1 . D, xi . pi*D1 . pi*D2 = D1 . D2, and any product of
    three pullbacks vanishes.
    """
    labels = c1_e.basis
    k = len(labels)
    rows = [[rat(x) for x in row] for row in base_form]
    if len(rows) != k or any(len(r) != k for r in rows):
        raise ValueError(f"base_form must be {k} x {k} to match basis {labels}")
    for i in range(k):
        for j in range(k):
            if rows[i][j] != rows[j][i]:
                raise ValueError("base_form must be symmetric")
    c2 = rat(c2_e)

    def base_dot(coords: Sequence[Fraction], i: int) -> Fraction:
        return sum((c * rows[j][i] for j, c in enumerate(coords)), Fraction(0))

    c1_sq = sum((c * base_dot(c1_e.coords, j) for j, c in enumerate(c1_e.coords)), Fraction(0))

    n = k + 1
    cube = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    cube[0][0][0] = c1_sq - c2
    for i in range(k):
        v = base_dot(c1_e.coords, i)
        cube[0][0][i + 1] = cube[0][i + 1][0] = cube[i + 1][0][0] = v
    for i in range(k):
        for j in range(k):
            cube[0][i + 1][j + 1] = rows[i][j]
            cube[i + 1][0][j + 1] = rows[i][j]
            cube[i + 1][j + 1][0] = rows[i][j]
    entries = tuple(tuple(tuple(row) for row in plane) for plane in cube)
    return TriForm(("xi",) + labels, entries)


def grothendieck_residuals(form: TriForm, c1_e: ClassVector, c2_e: object) -> tuple[Fraction, ...]:
    """Evaluate the defining relation xi^2 - pi*c1(E).xi + c2(E).[fiber]
    against each basis divisor; all residuals are zero iff the form's
    reduction rules are self-consistent with (c1, c2)."""
    if ("xi",) + c1_e.basis != form.basis:
        raise ValueError(f"c1 basis {c1_e.basis} does not extend to form basis {form.basis}")
    c2 = rat(c2_e)
    n = len(form.basis)
    xi = ClassVector(form.basis, (Fraction(1),) + (Fraction(0),) * (n - 1))
    c1_amb = ClassVector(form.basis, (Fraction(0),) + c1_e.coords)
    out = []
    for idx in range(n):
        z = ClassVector(
            form.basis, tuple(Fraction(1 if t == idx else 0) for t in range(n))
        )
        fiber_dot = Fraction(1 if idx == 0 else 0)
        out.append(form.value(xi, xi, z) - form.value(c1_amb, xi, z) + c2 * fiber_dot)
    return tuple(out)


def _solve_square(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan solve; None when the matrix is singular."""
    n = len(a)
    m = [row[:] + [bv] for row, bv in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [row[n] for row in m]


def cone_membership(cone: PolyCone, v: ClassVector) -> ConeMembership:
    """Exact membership in a simplicial cone.

    Inside: certificate coordinates x >= 0 with v = sum x_i g_i.  Outside:
    a separating functional w (as a ClassVector in the same basis, paired
    by the coordinate dot product) with w . g_i >= 0 for all generators
    and w . v < 0.
    """
    _same_basis(cone, v)
    gens = cone.generators
    n, k = len(cone.basis), len(gens)
    gt_g = [
        [
            sum((gens[i].coords[t] * gens[j].coords[t] for t in range(n)), Fraction(0))
            for j in range(k)
        ]
        for i in range(k)
    ]
    gt_v = [
        sum((gens[i].coords[t] * v.coords[t] for t in range(n)), Fraction(0)) for i in range(k)
    ]
    x_hat = _solve_square(gt_g, gt_v)
    if x_hat is None:
        raise ValueError("cone is not simplicial (generators are linearly dependent)")

    residual = [
        v.coords[t] - sum((x_hat[i] * gens[i].coords[t] for i in range(k)), Fraction(0))
        for t in range(n)
    ]
    if any(r != 0 for r in residual):
        # v is off the span of the generators; the negated residual
        # annihilates every generator and pairs negatively with v.
        w = ClassVector(cone.basis, tuple(-r for r in residual))
        return ConeMembership(False, None, w)
    if all(x >= 0 for x in x_hat):
        return ConeMembership(True, tuple(x_hat), None)
    j = next(i for i, x in enumerate(x_hat) if x < 0)
    unit = [Fraction(1 if i == j else 0) for i in range(k)]
    y = _solve_square(gt_g, unit)
    assert y is not None
    w_coords = tuple(
        sum((y[i] * gens[i].coords[t] for i in range(k)), Fraction(0)) for t in range(n)
    )
    return ConeMembership(False, None, ClassVector(cone.basis, w_coords))


def duality_check(eff: PolyCone, nef: PolyCone, form: TriForm) -> bool:
    """Necessary positivity test for a claimed (eff, nef) pair: every eff
    generator must meet every product of two nef generators nonnegatively."""
    if eff.basis != nef.basis or eff.basis != form.basis:
        raise ValueError(
            f"basis mismatch: eff {eff.basis}, nef {nef.basis}, form {form.basis}"
        )
    for g_e in eff.generators:
        for i, g_1 in enumerate(nef.generators):
            for g_2 in nef.generators[i:]:
                if form.value(g_e, g_1, g_2) < 0:
                    return False
    return True


def eff_cone_semistable(
    eff_gens_base: Sequence[ClassVector], c1_over_rank: ClassVector
) -> PolyCone:
    """Pseudoeffective cone of P(E) for E semistable with vanishing
    End-discriminant over any base: generated by xi - pi*(c1(E)/rank) and
    the pullbacks of the base effective generators."""
    gens_base = list(eff_gens_base)
    if not gens_base:
        raise ValueError("need at least one base effective generator")
    for g in gens_base:
        _same_basis(g, c1_over_rank)
    basis = ("xi",) + c1_over_rank.basis
    lead = ClassVector(basis, (Fraction(1),) + tuple(-c for c in c1_over_rank.coords))
    pulled = [ClassVector(basis, (Fraction(0),) + g.coords) for g in gens_base]
    return PolyCone(basis, (lead, *pulled))


def cones_split_rank2_picard1(n: int) -> tuple[PolyCone, PolyCone]:
    """Eff and nef cones of P(O + L) over a Picard-rank-1 surface with
    ample generator H and c1(L) = n H, n >= 1: eff = {xi - n H, H},
    nef = {xi, H} in basis (xi, H)."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"twist degree n must be a positive integer, got {n!r}")
    basis = ("xi", "H")
    eff = PolyCone(basis, (class_vector(basis, (1, -n)), class_vector(basis, (0, 1))))
    nef = PolyCone(basis, (class_vector(basis, (1, 0)), class_vector(basis, (0, 1))))
    return eff, nef


def eff_cone_split_rank3_picard1(m: int, n: int) -> PolyCone:
    """Pseudoeffective cone of P(O + L + M) over a Picard-rank-1 surface,
    c1(L) = m H, c1(M) = n H, m >= n >= 1.

    Computed the way the geometry does it, not by formula: the cone of the
    rank-2 quotient side P(L + M) is found by twisting with M^(-1) (so the
    bundle becomes O + (L - M), split with twist m - n, or semistable when
    m = n), untwisting shifts the tautological class back, and the blow-up
    transport to P(O + L + M) is the identity on (xi, H) coordinates.
    """
    for name, v in (("m", m), ("n", n)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError(f"{name} must be an integer, got {v!r}")
    if n < 1 or m < n:
        raise ValueError(f"need m >= n >= 1, got m={m}, n={n}")
    if m > n:
        twisted_eff, _ = cones_split_rank2_picard1(m - n)
    else:
        base_basis = ("H",)
        twisted_eff = eff_cone_semistable(
            [class_vector(base_basis, (1,))], class_vector(base_basis, (0,))
        )
    # Untwist xi' = xi_1 - n H, then transport (a, b) identically to P(E).
    basis = ("xi", "H")
    gens = []
    for g in twisted_eff.generators:
        a, b = g.coords
        gens.append(class_vector(basis, (a, b - a * n)))
    return PolyCone(basis, tuple(gens))


def cones_split_rank2_ruled(
    a: object, b: object, mu_min_w: object, deg_w: object
) -> tuple[PolyCone, PolyCone]:
    """Eff and nef cones of P(O + L) over the ruled surface P(W) -> curve,
    basis (xi, section, fiber) with section^2 = deg W, section.fiber = 1;
    c1(L) = a*section + b*fiber must be nef on the base.

    eff = {xi - a*section - b*fiber, section, fiber}; nef = {xi} plus the
    pullback of the base nef cone {section - mu_min(W)*fiber, fiber}.
    mu_min and deg W are independent inputs, checked only for rank-2
    consistency (2*mu_min <= deg W).
    """
    av, bv, mu, deg = rat(a), rat(b), rat(mu_min_w), rat(deg_w)
    if 2 * mu > deg:
        raise ValueError(
            f"mu_min={mu} and deg={deg} are impossible for a rank-2 bundle (need 2*mu_min <= deg)"
        )
    base_basis = ("section", "fiber")
    base_nef = PolyCone(
        base_basis,
        (class_vector(base_basis, (1, -mu)), class_vector(base_basis, (0, 1))),
    )
    verdict = cone_membership(base_nef, class_vector(base_basis, (av, bv)))
    if not verdict.inside:
        raise ValueError(
            f"(a, b) = ({av}, {bv}) is not nef on the base (nef cone needs "
            f"a >= 0 and b + a*mu_min >= 0)"
        )
    basis = ("xi", "section", "fiber")
    eff = PolyCone(
        basis,
        (
            class_vector(basis, (1, -av, -bv)),
            class_vector(basis, (0, 1, 0)),
            class_vector(basis, (0, 0, 1)),
        ),
    )
    nef = PolyCone(
        basis,
        (
            class_vector(basis, (1, 0, 0)),
            class_vector(basis, (0, 1, -mu)),
            class_vector(basis, (0, 0, 1)),
        ),
    )
    return eff, nef
