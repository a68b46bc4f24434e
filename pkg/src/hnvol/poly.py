"""Dense univariate polynomials over Fraction, ascending coefficients.

Small and exact; degrees in this package stay below ~15 so nothing here
tries to be clever.  The zero polynomial is the empty coefficient tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class Poly:
    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(values: Iterable[object]) -> "Poly":
        return Poly(_trim([Fraction(v) for v in values]))

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def const(c: object) -> "Poly":
        return Poly.of([c])

    @staticmethod
    def x() -> "Poly":
        return Poly.of([0, 1])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(_trim(out))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(_trim(out))

    def scale(self, c: object) -> "Poly":
        k = Fraction(c)
        if k == 0:
            return Poly(())
        return Poly(tuple(k * a for a in self.coeffs))

    def __call__(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def pow(self, n: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def compose_affine(self, c0: object, c1: object) -> "Poly":
        """p(c0 + c1*x) by Horner over the affine argument."""
        arg = Poly.of([c0, c1])
        acc = Poly.zero()
        for c in reversed(self.coeffs):
            acc = acc * arg + Poly.const(c)
        return acc

    def shift(self, a: object) -> "Poly":
        """p(x - a): the polynomial translated right by a."""
        return self.compose_affine(-Fraction(a), 1)

    def derivative(self) -> "Poly":
        return Poly(_trim([i * c for i, c in enumerate(self.coeffs)][1:]))

    def antiderivative(self) -> "Poly":
        if self.is_zero:
            return Poly(())
        return Poly((Fraction(0),) + tuple(c / (i + 1) for i, c in enumerate(self.coeffs)))

    def integral(self, lo: Fraction, hi: Fraction) -> Fraction:
        f = self.antiderivative()
        return f(hi) - f(lo)

    def __repr__(self) -> str:
        if self.is_zero:
            return "Poly(0)"
        terms = [f"{c}*x^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c != 0]
        return "Poly(" + " + ".join(terms) + ")"
