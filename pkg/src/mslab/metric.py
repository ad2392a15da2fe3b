"""Exact-rational finite metric spaces and the Katetov function calculus.

A finite metric space is a tuple of labels, a square matrix of exact
rational distances and a declared diameter bound (the bound travels with
the data; it is not recomputed). A Katetov function over a space X is a
vector xi with

    |xi(x) - xi(y)| <= d(x,y) <= xi(x) + xi(y)    for all x, y,

bounded by the diameter bound: exactly the distance profiles of one-point
metric extensions of X.

`validate_metric` is the package's universal safety net: a brute-force
O(n^3) scan over ordered triples. The scan is the contract; the vectorized
integer path below is an implementation of the same scan, cross-checked in
the test suite against the naive Fraction loop.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DenominatorMismatchError,
    DuplicatePointError,
    EmptyGlueError,
    KatetovViolationError,
    LambdaOutOfRangeError,
    LengthMismatchError,
    MetricFailureError,
    NonSquareError,
    PreconditionError,
    SpaceMismatchError,
)
from .rationals import RationalLike, as_fraction, common_denominator

# Matrices at least this large take the vectorized integer path.
_NUMPY_MIN_POINTS = 48
# Scaled entries must stay comfortably inside int64 under one addition.
_INT64_SAFE = 2**61


@dataclass(frozen=True)
class MetricVerdict:
    """Outcome of a metric validation scan.

    `reason` is one of: not-square, not-symmetric, nonzero-diagonal,
    nonpositive-off-diagonal, exceeds-diameter, triangle; `witness` holds
    the first violating index pair/triple in lexicographic order. A
    triangle witness (i, j, k) means d(i,j) > d(i,k) + d(k,j).
    """

    ok: bool
    reason: str | None = None
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class KatetovVerdict:
    ok: bool
    reason: str | None = None  # range | lipschitz | sum
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _coerce_matrix(d: Sequence[Sequence[RationalLike]]) -> tuple[tuple[Fraction, ...], ...]:
    rows = tuple(tuple(as_fraction(v) for v in row) for row in d)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise NonSquareError(f"matrix is not square: {len(rows)} rows, row lengths {[len(r) for r in rows]}")
    return rows


def _scaled_ints(rows, bound):
    """Common-denominator integer image of the matrix, or None if unsafe."""
    scale = common_denominator(itertools.chain((bound,), itertools.chain.from_iterable(rows)))
    entries = [[int(v * scale) for v in row] for row in rows]
    top = max((abs(e) for row in entries for e in row), default=0)
    if max(top, abs(int(bound * scale))) >= _INT64_SAFE:
        return None
    return entries, int(bound * scale)


def _triangle_scan_int(e: list[list[int]]) -> tuple[int, int, int] | None:
    n = len(e)
    for i in range(n):
        ei = e[i]
        for j in range(n):
            if j == i:
                continue
            dij = ei[j]
            for k in range(n):
                if k == i or k == j:
                    continue
                if dij > ei[k] + e[k][j]:
                    return (i, j, k)
    return None


def _triangle_scan_numpy(e: list[list[int]]) -> tuple[int, int, int] | None:
    d = np.array(e, dtype=np.int64)
    n = d.shape[0]
    idx = np.arange(n)
    for i in range(n):
        # sums[k, j] = d[i,k] + d[k,j]; violation when d[i,j] > min over k
        sums = d[i][:, None] + d
        viol = d[i][None, :] > sums  # viol[k, j]
        viol[i, :] = False
        viol[:, i] = False
        viol[idx, idx] = False
        if viol.any():
            # first (j, k) in lex order
            ks, js = np.nonzero(viol)
            order = np.lexsort((ks, js))
            j, k = int(js[order[0]]), int(ks[order[0]])
            return (i, j, k)
    return None


def validate_metric(d: Sequence[Sequence[RationalLike]], diam_bound: RationalLike) -> MetricVerdict:
    """Brute-force check of all MetricSpace invariants.

    Checks, in order: symmetry, zero diagonal, strictly positive
    off-diagonal, entries <= diam_bound, triangle inequality over all
    ordered triples. The first violation in lexicographic index order is
    returned as the witness.
    """
    rows = _coerce_matrix(d)
    bound = as_fraction(diam_bound)
    n = len(rows)

    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                return MetricVerdict(False, "not-symmetric", (i, j))
    for i in range(n):
        if rows[i][i] != 0:
            return MetricVerdict(False, "nonzero-diagonal", (i,))
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] <= 0:
                return MetricVerdict(False, "nonpositive-off-diagonal", (i, j))
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] > bound:
                return MetricVerdict(False, "exceeds-diameter", (i, j))

    scaled = _scaled_ints(rows, bound)
    if scaled is not None:
        entries, _ = scaled
        scan = _triangle_scan_numpy if n >= _NUMPY_MIN_POINTS else _triangle_scan_int
        hit = scan(entries)
    else:
        hit = _triangle_scan_int([list(row) for row in rows])  # Fractions compare fine
    if hit is not None:
        return MetricVerdict(False, "triangle", hit)
    return MetricVerdict(True)


def validate_pseudometric(d: Sequence[Sequence[RationalLike]]) -> MetricVerdict:
    """Like validate_metric but zero off-diagonal entries are allowed
    and there is no diameter bound."""
    rows = _coerce_matrix(d)
    n = len(rows)
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                return MetricVerdict(False, "not-symmetric", (i, j))
    for i in range(n):
        if rows[i][i] != 0:
            return MetricVerdict(False, "nonzero-diagonal", (i,))
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] < 0:
                return MetricVerdict(False, "nonpositive-off-diagonal", (i, j))
    hit = _triangle_scan_int([list(row) for row in rows])
    if hit is not None:
        return MetricVerdict(False, "triangle", hit)
    return MetricVerdict(True)


@dataclass(frozen=True)
class MetricSpace:
    """Finite point set with an exact symmetric distance matrix and a
    declared diameter bound."""

    labels: tuple[str, ...]
    d: tuple[tuple[Fraction, ...], ...]
    diam_bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        object.__setattr__(self, "d", _coerce_matrix(self.d))
        object.__setattr__(self, "diam_bound", as_fraction(self.diam_bound))
        if len(self.labels) != len(self.d):
            raise NonSquareError(f"{len(self.labels)} labels for a {len(self.d)}-point matrix")

    @classmethod
    def from_matrix(
        cls,
        labels: Sequence[str],
        d: Sequence[Sequence[RationalLike]],
        diam_bound: RationalLike,
    ) -> "MetricSpace":
        """Build and validate; raises MetricFailureError on any violation."""
        space = cls(tuple(labels), d, diam_bound)  # type: ignore[arg-type]
        verdict = validate_metric(space.d, space.diam_bound)
        if not verdict:
            raise MetricFailureError(
                f"invalid metric: {verdict.reason} at {verdict.witness}", verdict
            )
        return space

    @property
    def n_points(self) -> int:
        return len(self.labels)

    def dist(self, i: int, j: int) -> Fraction:
        return self.d[i][j]

    def restrict(self, indices: Sequence[int]) -> "MetricSpace":
        """Subspace on the given indices, in the given order."""
        idx = list(indices)
        return MetricSpace(
            tuple(self.labels[i] for i in idx),
            tuple(tuple(self.d[i][j] for j in idx) for i in idx),
            self.diam_bound,
        )

    def fresh_label(self, base: str) -> str:
        label = base
        used = set(self.labels)
        while label in used:
            label += "'"
        return label

    def with_point(self, label: str, profile: Sequence[RationalLike]) -> "MetricSpace":
        """Append one point at the given distances (no validation here)."""
        prof = tuple(as_fraction(v) for v in profile)
        if len(prof) != self.n_points:
            raise LengthMismatchError(f"profile has {len(prof)} entries for {self.n_points} points")
        rows = [row + (prof[i],) for i, row in enumerate(self.d)]
        rows.append(prof + (Fraction(0),))
        return MetricSpace(self.labels + (self.fresh_label(label),), tuple(rows), self.diam_bound)


def cap_metric(space: MetricSpace, c: RationalLike) -> MetricSpace:
    """Truncate all distances at c; the result is again a metric with
    diameter bound c."""
    cap = as_fraction(c)
    if cap <= 0:
        raise PreconditionError(f"cap must be positive, got {cap}")
    rows = tuple(tuple(min(v, cap) for v in row) for row in space.d)
    out = MetricSpace(space.labels, rows, cap)
    verdict = validate_metric(out.d, out.diam_bound)
    if not verdict:
        raise MetricFailureError(f"capped matrix invalid: {verdict.reason} at {verdict.witness}", verdict)
    return out


@dataclass(frozen=True)
class PartialIsometry:
    """A distance-preserving map between index sets of two spaces."""

    domain: tuple[int, ...]
    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(int(i) for i in self.domain))
        object.__setattr__(self, "image", tuple(int(i) for i in self.image))
        if len(self.domain) != len(self.image):
            raise LengthMismatchError("domain and image have different lengths")
        if len(set(self.domain)) != len(self.domain):
            raise PreconditionError("duplicate indices in domain")
        if len(set(self.image)) != len(self.image):
            raise PreconditionError("duplicate indices in image")

    def check(self, source: MetricSpace, target: MetricSpace) -> MetricVerdict:
        """Exact distance match on all pairs; witness is the offending pair
        of positions."""
        for a in range(len(self.domain)):
            for b in range(a + 1, len(self.domain)):
                if source.d[self.domain[a]][self.domain[b]] != target.d[self.image[a]][self.image[b]]:
                    return MetricVerdict(False, "not-isometric", (a, b))
        return MetricVerdict(True)


def amalgamate(
    x_space: MetricSpace,
    y_space: MetricSpace,
    glue: PartialIsometry,
    diam_bound: RationalLike | None = None,
) -> MetricSpace:
    """Free amalgam of two spaces over a glued common part.

    The result contains X at its original indices and the non-glued points
    of Y appended in Y order. Cross distances are the shortest two-leg sums
    through the glued set, capped at the bound. With an empty glue the
    bound itself is the cross distance, so it must be given explicitly.
    """
    if diam_bound is None:
        if not glue.domain:
            raise EmptyGlueError("empty glue needs an explicit diam_bound")
        bound = max(x_space.diam_bound, y_space.diam_bound)
    else:
        bound = as_fraction(diam_bound)
    if x_space.diam_bound > bound or y_space.diam_bound > bound:
        raise PreconditionError("both factors must have diameter bound <= the amalgam bound")
    ok = glue.check(x_space, y_space)
    if not ok:
        raise PreconditionError(f"glue is not a partial isometry: positions {ok.witness}")

    glued_in_y = dict(zip(glue.image, glue.domain))  # y index -> x index
    new_y = [j for j in range(y_space.n_points) if j not in glued_in_y]

    labels = list(x_space.labels)
    used = set(labels)
    for j in new_y:
        label = y_space.labels[j]
        while label in used:
            label += "'"
        used.add(label)
        labels.append(label)

    n_x = x_space.n_points
    n = n_x + len(new_y)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n_x):
        for j in range(n_x):
            rows[i][j] = x_space.d[i][j]
    for a, ja in enumerate(new_y):
        for b, jb in enumerate(new_y):
            rows[n_x + a][n_x + b] = y_space.d[ja][jb]
    for i in range(n_x):
        for a, ja in enumerate(new_y):
            cross = bound
            for dom, img in zip(glue.domain, glue.image):
                leg = x_space.d[i][dom] + y_space.d[img][ja]
                if leg < cross:
                    cross = leg
            rows[i][n_x + a] = cross
            rows[n_x + a][i] = cross

    out = MetricSpace(tuple(labels), tuple(tuple(r) for r in rows), bound)
    verdict = validate_metric(out.d, out.diam_bound)
    if not verdict:
        raise MetricFailureError(f"amalgam invalid: {verdict.reason} at {verdict.witness}", verdict)
    return out


@dataclass(frozen=True)
class KatetovFn:
    """Exact-rational vector over a MetricSpace satisfying the two-sided
    Katetov inequalities (a one-point extension profile)."""

    space: MetricSpace
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))

    @classmethod
    def over(cls, space: MetricSpace, values: Sequence[RationalLike]) -> "KatetovFn":
        """Build and validate; raises KatetovViolationError on failure."""
        fn = cls(space, tuple(as_fraction(v) for v in values))
        verdict = is_katetov(fn.values, space)
        if not verdict:
            raise KatetovViolationError(f"not Katetov: {verdict.reason} at {verdict.witness}")
        return fn

    def __call__(self, i: int) -> Fraction:
        return self.values[i]


def is_katetov(values: Sequence[RationalLike], space: MetricSpace) -> KatetovVerdict:
    """Check the two-sided inequalities and the 0..diam_bound range.

    The witness is the first violating index (range) or pair (both sides),
    in lexicographic order.
    """
    vals = [as_fraction(v) for v in values]
    n = space.n_points
    if len(vals) != n:
        raise LengthMismatchError(f"{len(vals)} values over a {n}-point space")
    for i in range(n):
        if vals[i] < 0 or vals[i] > space.diam_bound:
            return KatetovVerdict(False, "range", (i,))
    for i in range(n):
        for j in range(i + 1, n):
            dij = space.d[i][j]
            if abs(vals[i] - vals[j]) > dij:
                return KatetovVerdict(False, "lipschitz", (i, j))
            if vals[i] + vals[j] < dij:
                return KatetovVerdict(False, "sum", (i, j))
    return KatetovVerdict(True)


def elementary_katetov(space: MetricSpace, z: int) -> KatetovFn:
    """The distance profile of an existing point: f_z(x) = d(x, z)."""
    if not 0 <= z < space.n_points:
        raise PreconditionError(f"point index {z} out of range")
    return KatetovFn(space, space.d[z])


def extend_by_katetov(space: MetricSpace, fn: KatetovFn) -> tuple[MetricSpace, int]:
    """Realize a Katetov function as a genuinely new point.

    Rejects profiles that vanish somewhere (the new point would duplicate
    an existing one, breaking strict positivity).
    """
    if fn.space != space:
        raise SpaceMismatchError("function lives over a different space")
    verdict = is_katetov(fn.values, space)
    if not verdict:
        raise KatetovViolationError(f"not Katetov: {verdict.reason} at {verdict.witness}")
    for i, v in enumerate(fn.values):
        if v == 0:
            raise DuplicatePointError(f"profile vanishes at point {i}; realization would duplicate it")
    out = space.with_point(f"x{space.n_points}", fn.values)
    check = validate_metric(out.d, out.diam_bound)
    if not check:
        raise MetricFailureError(f"extension invalid: {check.reason} at {check.witness}", check)
    return out, out.n_points - 1


def sup_distance(f: KatetovFn, g: KatetovFn) -> Fraction:
    """Sup metric on K(X): max over points of |f - g|."""
    if f.space != g.space:
        raise SpaceMismatchError("sup_distance needs both functions over one space")
    return max(abs(a - b) for a, b in zip(f.values, g.values))


def kuratowski_embed(space: MetricSpace) -> list[KatetovFn]:
    """All elementary functions; an exact isometric copy of the space
    inside (K(X), sup)."""
    return [elementary_katetov(space, z) for z in range(space.n_points)]


def truncate_katetov(fn: KatetovFn, lam: RationalLike, mode: str) -> tuple[Fraction, ...]:
    """Pointwise max (resp. min) with a level 0 < lam < diam_bound.

    The max image is always Katetov again; the min image is returned as a
    bare vector since it generally leaves K(X).
    """
    level = as_fraction(lam)
    if not 0 < level < fn.space.diam_bound:
        raise LambdaOutOfRangeError(f"lambda {level} outside (0, {fn.space.diam_bound})")
    if mode == "max":
        return tuple(max(level, v) for v in fn.values)
    if mode == "min":
        return tuple(min(level, v) for v in fn.values)
    raise PreconditionError(f"mode must be 'max' or 'min', got {mode!r}")


def _grid_profiles(d_scaled: list[list[int]], bound_scaled: int) -> Iterator[tuple[int, ...]]:
    """DFS over grid vectors satisfying the Katetov constraints, in
    lexicographic order; all values are integers on the common grid."""
    n = len(d_scaled)
    values: list[int] = []

    def rec(k: int) -> Iterator[tuple[int, ...]]:
        if k == n:
            yield tuple(values)
            return
        lo, hi = 0, bound_scaled
        for i in range(k):
            dik = d_scaled[i][k]
            gap = abs(values[i] - dik)
            if gap > lo:
                lo = gap
            top = values[i] + dik
            if top < hi:
                hi = top
        for v in range(lo, hi + 1):
            values.append(v)
            yield from rec(k + 1)
            values.pop()

    return rec(0)


def enumerate_katetov(space: MetricSpace, denom: int) -> Iterator[KatetovFn]:
    """All Katetov functions with values on the 1/denom grid, in
    lexicographic order, exhaustively and without duplicates.

    Requires every matrix entry and the diameter bound to live on that
    grid already.
    """
    if denom < 1:
        raise PreconditionError(f"denom must be >= 1, got {denom}")
    scale = common_denominator(
        itertools.chain((space.diam_bound,), itertools.chain.from_iterable(space.d))
    )
    if denom % scale != 0:
        raise DenominatorMismatchError(
            f"grid denominator {denom} not divisible by the space's denominator {scale}"
        )
    d_scaled = [[int(v * denom) for v in row] for row in space.d]
    bound_scaled = int(space.diam_bound * denom)
    for profile in _grid_profiles(d_scaled, bound_scaled):
        yield KatetovFn(space, tuple(Fraction(v, denom) for v in profile))
