"""Symbolic spectrum values.

A SpectrumSet is a description of a spectrum precise enough to compare:
all of C, the real line, a finite point set, or the set of squares of
another SpectrumSet (kept symbolic when it cannot be evaluated).

Comparison is three-valued: spectrum_equal returns True, False, or None
when the descriptions cannot settle it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import Scalar, format_scalar


class SpectrumSet:
    __slots__ = ()


@dataclass(frozen=True)
class AllComplex(SpectrumSet):
    def __str__(self):
        return "C"


@dataclass(frozen=True)
class RealLine(SpectrumSet):
    def __str__(self):
        return "R"


@dataclass(frozen=True)
class PointSet(SpectrumSet):
    points: frozenset

    def __str__(self):
        inner = ", ".join(sorted(format_scalar(p) for p in self.points))
        return "{" + inner + "}"


@dataclass(frozen=True)
class SquaredSet(SpectrumSet):
    base: SpectrumSet

    def __str__(self):
        return f"squares({self.base})"


ALL_C = AllComplex()
REALS = RealLine()


def point_set(*values) -> PointSet:
    return PointSet(frozenset(Scalar.of(v) for v in values))


POINT0 = point_set(0)
POINT1 = point_set(1)


def squared(s: SpectrumSet) -> SpectrumSet:
    """Image of s under z -> z^2 (spectral mapping for squares)."""
    if isinstance(s, PointSet):
        return PointSet(frozenset(p * p for p in s.points))
    if isinstance(s, AllComplex):
        return ALL_C  # every w is z^2 for some z
    if isinstance(s, SquaredSet):
        return SquaredSet(s)
    return SquaredSet(s)


def spectrum_equal(a: SpectrumSet, b: SpectrumSet):
    """True / False / None comparison of two spectrum descriptions."""
    if a == b:
        return True
    kinds = {type(a), type(b)}
    if kinds == {PointSet}:
        return a.points == b.points
    if SquaredSet in kinds:
        return None  # unevaluated image; nothing to compare against
    # AllComplex, RealLine, PointSet are pairwise distinct as sets
    if type(a) is not type(b):
        return False
    return None


def sset_text(s: SpectrumSet) -> str:
    return str(s)
