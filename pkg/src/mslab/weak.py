"""Landmark seminorms: finite approximants of the distance-weak uniformity.

A finite landmark set F induces the pseudometric
rho_F(x, y) = max over z in F of |d(x,z) - d(y,z)|, the finite-scale
stand-in for the uniformity generated by all distance functions to
points. Proximity tests and greedy landmark nets below are one-sided
evidence only: a pass at one (F, eps) scale never certifies proximity in
the full uniformity, which quantifies over all finite landmark sets and
all positive eps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import EmptySubsetError, IndexClashError, PreconditionError
from .metric import KatetovFn, MetricSpace, elementary_katetov
from .rationals import RationalLike, as_fraction
from .report import WitnessReport

PROXIMITY_CAVEAT = (
    "one-sided evidence: a pass at this (F, eps) certifies only non-separation "
    "at this scale; proximity proper quantifies over all finite landmark sets "
    "and all eps > 0"
)


@dataclass(frozen=True)
class LandmarkSet:
    space: MetricSpace
    F: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "F", tuple(int(i) for i in self.F))
        if not self.F:
            raise EmptySubsetError("landmark set must be non-empty")
        if len(set(self.F)) != len(self.F):
            raise IndexClashError("duplicate landmark indices")
        for z in self.F:
            if not 0 <= z < self.space.n_points:
                raise PreconditionError(f"landmark index {z} out of range")


@dataclass(frozen=True)
class WeakSeminorm:
    """The landmark pseudometric matrix rho_F; always symmetric, zero on
    the diagonal, triangle-valid, and dominated by d entrywise."""

    landmarks: LandmarkSet
    matrix: tuple[tuple[Fraction, ...], ...]


def landmark_gap(space: MetricSpace, a: int, b: int, F: Sequence[int]) -> Fraction:
    return max(abs(space.d[a][z] - space.d[b][z]) for z in F)


def weak_seminorm(landmarks: LandmarkSet) -> WeakSeminorm:
    space = landmarks.space
    n = space.n_points
    matrix = tuple(
        tuple(
            Fraction(0) if i == j else landmark_gap(space, i, j, landmarks.F)
            for j in range(n)
        )
        for i in range(n)
    )
    return WeakSeminorm(landmarks, matrix)


def proximity_test(
    A: Sequence[int], B: Sequence[int], landmarks: LandmarkSet, eps: RationalLike
) -> WitnessReport:
    """Do the index sets come eps-close in every landmark coordinate?

    Passes iff some pair (a, b) has |d(a,z) - d(b,z)| < eps for every
    landmark z (strict, matching the quantifier it approximates); the
    witness pair is reported on a pass, first in lexicographic order.
    """
    eps = as_fraction(eps)
    if not A or not B:
        raise EmptySubsetError("A and B must be non-empty")
    if eps <= 0:
        raise PreconditionError(f"eps must be positive, got {eps}")
    space = landmarks.space
    checked = 0
    for a in sorted(set(A)):
        for b in sorted(set(B)):
            checked += 1
            if landmark_gap(space, a, b, landmarks.F) < eps:
                return WitnessReport(
                    check="proximity",
                    params={"eps": eps, "landmarks": list(landmarks.F)},
                    verdict="pass",
                    witness={"a": a, "b": b},
                    counts={"pairs_checked": checked},
                    caveat=PROXIMITY_CAVEAT,
                )
    return WitnessReport(
        check="proximity",
        params={"eps": eps, "landmarks": list(landmarks.F)},
        verdict="fail",
        witness={"note": "no pair within eps in all landmark coordinates"},
        counts={"pairs_checked": checked},
        caveat=PROXIMITY_CAVEAT,
    )


def gromov_net_indices(space: MetricSpace, landmarks: LandmarkSet, eps: RationalLike) -> list[int]:
    """Greedy (index-ordered) maximal eps-separated set of points under the
    landmark seminorm; every point lies within eps of some representative."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise PreconditionError(f"eps must be positive, got {eps}")
    reps: list[int] = []
    for z in range(space.n_points):
        if all(landmark_gap(space, z, r, landmarks.F) >= eps for r in reps):
            reps.append(z)
    return reps


def gromov_approximant(
    space: MetricSpace, landmarks: LandmarkSet, eps: RationalLike
) -> list[KatetovFn]:
    """Finite stand-in for the closure of the elementary functions: the
    elementary Katetov functions of a greedy landmark eps-net."""
    return [elementary_katetov(space, z) for z in gromov_net_indices(space, landmarks, eps)]


def restrict_katetov(fn: KatetovFn, subset: Sequence[int]) -> KatetovFn:
    """Restriction to a subspace; Katetov-ness is inherited and the sup
    distance between any two functions can only shrink."""
    idx = sorted(set(int(i) for i in subset))
    if not idx:
        raise EmptySubsetError("cannot restrict to the empty subset")
    for i in idx:
        if not 0 <= i < fn.space.n_points:
            raise PreconditionError(f"subset index {i} out of range")
    sub = fn.space.restrict(idx)
    return KatetovFn(sub, tuple(fn.values[i] for i in idx))
