"""Finite Urysohn-sphere approximants and explicit one-point extensions.

The Approximant grows a finite rational metric space until every grid
Katetov function over every small subset of the previous generation is
realized by an actual point (the finite-scale one-point extension
property). Distances are kept internally as integers on a common 1/denom
grid, so saturation rounds stay fast; the exact Fraction view is
materialized on demand.

The explicit extension operations (ma_extension, uwmt_extension,
prop53_extension, nonproper_witness, injectivity_chain) each build a small
one- or k-point metric extension from a prescribed distance recipe and
re-validate the result; they certify recipes, they never repair them.

For the two k-point recipes the prescribed cross distances are completed
to the shortest-path values through all available legs. The naive
single-leg cross formula d(z_i, z'_j) = min(d(z_i, z_j) + d(x, y), bound)
admits triangle violations on valid inputs (see the regression tests for
a concrete 4-point instance); the path completion agrees with the naive
value whenever that value is consistent, preserves the copied distances
exactly, and keeps the displacement d(z_i, z'_i) = d(x, y).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Sequence

from .errors import (
    BudgetExceededError,
    DenominatorMismatchError,
    DiameterExceededError,
    EmptyStateError,
    IndexClashError,
    LambdaOutOfRangeError,
    MetricFailureError,
    PreconditionAError,
    PreconditionBError,
    PreconditionError,
    UnsaturatedError,
)
from .metric import MetricSpace, _grid_profiles, cap_metric, validate_metric
from .rationals import RationalLike, as_fraction, common_denominator
from .report import WitnessReport

DEFAULT_BUDGET = 5000


@dataclass(frozen=True)
class RealizationRecord:
    """One realized (subset, profile) pair: the point `point` was added in
    round `round` to realize the scaled values over `subset`."""

    round: int
    subset: tuple[int, ...]
    values: tuple[int, ...]  # scaled by denom
    point: int


@dataclass
class Approximant:
    """A growing finite metric space on the 1/denom grid.

    `rows` is the symmetric scaled-integer distance matrix; `round_sizes`
    records the point count after each completed saturation round (entry 0
    is the seed size), so older generations are index prefixes.
    """

    labels: list[str]
    rows: list[list[int]]
    denom: int
    bound_scaled: int
    subset_bound: int
    rounds: int = 0
    round_sizes: list[int] = field(default_factory=list)
    log: list[RealizationRecord] = field(default_factory=list)

    @classmethod
    def from_space(cls, space: MetricSpace, denom: int, subset_bound: int) -> "Approximant":
        scale = common_denominator(
            itertools.chain((space.diam_bound,), itertools.chain.from_iterable(space.d))
        )
        if denom % scale != 0:
            raise DenominatorMismatchError(
                f"approximant denominator {denom} not divisible by the seed's denominator {scale}"
            )
        rows = [[int(v * denom) for v in row] for row in space.d]
        return cls(
            labels=list(space.labels),
            rows=rows,
            denom=denom,
            bound_scaled=int(space.diam_bound * denom),
            subset_bound=subset_bound,
            round_sizes=[space.n_points],
        )

    @property
    def n_points(self) -> int:
        return len(self.rows)

    @property
    def diam_bound(self) -> Fraction:
        return Fraction(self.bound_scaled, self.denom)

    def dist(self, i: int, j: int) -> Fraction:
        return Fraction(self.rows[i][j], self.denom)

    def snapshot(self, round_index: int) -> range:
        """Point indices present after the given completed round."""
        return range(self.round_sizes[round_index])

    def as_metric_space(self) -> MetricSpace:
        return MetricSpace(
            tuple(self.labels),
            tuple(tuple(Fraction(v, self.denom) for v in row) for row in self.rows),
            self.diam_bound,
        )

    @property
    def space(self) -> MetricSpace:
        return self.as_metric_space()

    def restrict_space(self, indices: Sequence[int]) -> MetricSpace:
        idx = list(indices)
        return MetricSpace(
            tuple(self.labels[i] for i in idx),
            tuple(tuple(Fraction(self.rows[i][j], self.denom) for j in idx) for i in idx),
            self.diam_bound,
        )

    def copy(self) -> "Approximant":
        return Approximant(
            labels=list(self.labels),
            rows=[row[:] for row in self.rows],
            denom=self.denom,
            bound_scaled=self.bound_scaled,
            subset_bound=self.subset_bound,
            rounds=self.rounds,
            round_sizes=list(self.round_sizes),
            log=list(self.log),
        )


def _subsets_lex(points: Sequence[int], max_size: int):
    """All non-empty subsets of the given points up to max_size, as sorted
    tuples in plain lexicographic order."""
    pts = sorted(points)
    subs: list[tuple[int, ...]] = []
    for size in range(1, max_size + 1):
        subs.extend(itertools.combinations(pts, size))
    subs.sort()
    return subs


def fraisse_step(a: Approximant, budget: int = DEFAULT_BUDGET) -> Approximant:
    """One saturation round.

    Every grid Katetov function over every subset (size <= subset_bound)
    of the step-start point set that is not yet realized exactly gets a
    realizing point, integrated by the one-point free-amalgam formula
    g(w) = min(bound, min over s in S of xi(s) + d(s, w)). Records are
    processed in lexicographic (subset, profile) order, so the output is
    reproducible bit for bit.
    """
    out = a.copy()
    n0 = out.n_points
    rows = out.rows
    bound = out.bound_scaled
    label_set = set(out.labels)

    # value -> points index, one dict per step-start anchor
    index: list[dict[int, set[int]]] = []
    for s in range(n0):
        per: dict[int, set[int]] = {}
        for p in range(out.n_points):
            per.setdefault(rows[s][p], set()).add(p)
        index.append(per)

    round_no = out.rounds + 1
    for subset in _subsets_lex(range(n0), out.subset_bound):
        sub_matrix = [[rows[i][j] for j in subset] for i in subset]
        for values in _grid_profiles(sub_matrix, bound):
            candidates: set[int] | None = None
            realizable = True
            for s, v in zip(subset, values):
                bucket = index[s].get(v)
                if not bucket:
                    realizable = False
                    break
                candidates = bucket if candidates is None else candidates & bucket
                if not candidates:
                    realizable = False
                    break
            if realizable and candidates:
                continue
            if out.n_points + 1 > budget:
                raise BudgetExceededError(
                    f"saturation would exceed the {budget}-point budget at round {round_no}"
                )
            profile = [
                min(bound, min(v + rows[s][w] for s, v in zip(subset, values)))
                for w in range(out.n_points)
            ]
            new_index = out.n_points
            for w, dv in enumerate(profile):
                rows[w].append(dv)
            rows.append(profile + [0])
            base = f"x{new_index}"
            while base in label_set:
                base += "'"
            label_set.add(base)
            out.labels.append(base)
            for s in range(n0):
                index[s].setdefault(profile[s], set()).add(new_index)
            out.log.append(RealizationRecord(round_no, subset, tuple(values), new_index))

    out.rounds = round_no
    out.round_sizes.append(out.n_points)
    return out


def finite_injectivity_check(
    a: Approximant, over: Sequence[int], k: int, denom: int
) -> WitnessReport:
    """Is every 1/denom-grid Katetov function over every <=k subset of the
    snapshot realized exactly by some current point?

    The fail witness is the first unrealized (subset, profile) pair in
    lexicographic order.
    """
    if denom % a.denom != 0:
        raise DenominatorMismatchError(
            f"check denominator {denom} not divisible by the approximant's {a.denom}"
        )
    factor = denom // a.denom
    rows = a.rows
    bound = a.bound_scaled * factor

    over = sorted(set(over))
    for s in over:
        if not 0 <= s < a.n_points:
            raise PreconditionError(f"snapshot index {s} out of range")

    index: dict[int, dict[int, set[int]]] = {}
    for s in over:
        per: dict[int, set[int]] = {}
        for p in range(a.n_points):
            per.setdefault(rows[s][p] * factor, set()).add(p)
        index[s] = per

    n_subsets = 0
    n_functions = 0
    for subset in _subsets_lex(over, k):
        n_subsets += 1
        sub_matrix = [[rows[i][j] * factor for j in subset] for i in subset]
        for values in _grid_profiles(sub_matrix, bound):
            n_functions += 1
            candidates: set[int] | None = None
            found = True
            for s, v in zip(subset, values):
                bucket = index[s].get(v)
                if not bucket:
                    found = False
                    break
                candidates = bucket if candidates is None else candidates & bucket
                if not candidates:
                    found = False
                    break
            if not (found and candidates):
                return WitnessReport(
                    check="finite-injectivity",
                    params={"k": k, "denom": denom, "snapshot_size": len(over)},
                    verdict="fail",
                    witness={
                        "subset": list(subset),
                        "values": [Fraction(v, denom) for v in values],
                    },
                    counts={"subsets": n_subsets, "functions": n_functions, "points": a.n_points},
                )
    return WitnessReport(
        check="finite-injectivity",
        params={"k": k, "denom": denom, "snapshot_size": len(over)},
        verdict="pass",
        counts={"subsets": n_subsets, "functions": n_functions, "points": a.n_points},
    )


# -- explicit one-point extensions ------------------------------------------


@dataclass(frozen=True)
class MARequest:
    """Inputs for the almost-matching one-point extension: move y to a new
    point y' at prescribed distance delta from x while keeping its
    distances to the finite set F."""

    space: MetricSpace
    F: tuple[int, ...]
    x: int
    y: int
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "F", tuple(int(i) for i in self.F))
        object.__setattr__(self, "delta", as_fraction(self.delta))


def ma_extension(req: MARequest) -> tuple[MetricSpace, int]:
    """Realize the prescribed point y': d(y', x) = delta and
    d(y', z) = d(y, z) for z in F, over the restriction to F and x.

    Preconditions (checked, with the violating landmark carried):
      (a)  |d(x,z) - d(y,z)| < delta  for all z in F
      (b)  delta <= d(x,z) + d(y,z)   for all z in F
    plus 0 < delta < diam_bound.
    """
    space, F, x, y, delta = req.space, req.F, req.x, req.y, req.delta
    if x in F or y in F:
        raise IndexClashError("x and y must not belong to F")
    if len(set(F)) != len(F):
        raise IndexClashError("duplicate indices in F")
    if delta <= 0:
        raise PreconditionError(f"delta must be positive, got {delta}")
    if delta >= space.diam_bound:
        raise DiameterExceededError(f"delta {delta} not below the diameter bound {space.diam_bound}")
    for z in F:
        if abs(space.d[x][z] - space.d[y][z]) >= delta:
            raise PreconditionAError(f"|d(x,z)-d(y,z)| >= delta at z={z}", z=z)
    for z in F:
        if delta > space.d[x][z] + space.d[y][z]:
            raise PreconditionBError(f"delta > d(x,z)+d(y,z) at z={z}", z=z)

    keep = sorted(set(F) | {x})
    pos = {orig: i for i, orig in enumerate(keep)}
    base = space.restrict(keep)
    profile = [Fraction(0)] * len(keep)
    profile[pos[x]] = delta
    for z in F:
        profile[pos[z]] = space.d[y][z]
    out = base.with_point(space.labels[y] + "'", profile)
    verdict = validate_metric(out.d, out.diam_bound)
    if not verdict:
        raise MetricFailureError(f"ma extension invalid: {verdict.reason} at {verdict.witness}", verdict)
    return out, out.n_points - 1


def uwmt_extension(
    space: MetricSpace, x: int, y: int, Z: Sequence[int]
) -> tuple[MetricSpace, list[int]]:
    """Mirror the finite set {x} u Z across the displacement from x to y.

    Writing z_0 = x and z'_0 = y, the new points z'_1..z'_k satisfy
    d(z'_i, z'_j) = d(z_i, z_j) exactly (so the map z_i -> z'_i is a
    partial isometry) and d(z_i, z'_i) = d(x, y). Cross distances are the
    shortest-path completion of the one-leg recipe
    d(z_i, z_j) + d(x, y), capped at the diameter bound. The output is the
    restriction to {x, y} u Z plus the k new points, re-validated.
    """
    Z = list(Z)
    members = [x, y, *Z]
    if len(set(members)) != len(members):
        raise IndexClashError("x, y and Z must be pairwise distinct indices")
    keep = sorted(members)
    pos = {orig: i for i, orig in enumerate(keep)}
    base = space.restrict(keep)
    m = len(keep)
    k = len(Z)
    zs = [x, *Z]  # z_0 = x
    e = space.d[x][y]
    bound = space.diam_bound

    def cross(i: int, j: int) -> Fraction:
        """d(z_i, z'_j): through the matched legs and through y itself."""
        best = bound
        through_y = space.d[zs[i]][y] + space.d[x][zs[j]]
        if through_y < best:
            best = through_y
        for l in range(k + 1):
            leg = space.d[zs[i]][zs[l]] + e + space.d[zs[l]][zs[j]]
            if leg < best:
                best = leg
        return best

    n = m + k
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            rows[i][j] = base.d[i][j]
    for a in range(1, k + 1):
        for b in range(1, k + 1):
            rows[m + a - 1][m + b - 1] = space.d[zs[a]][zs[b]]
    for w in keep:
        for b in range(1, k + 1):
            if w == y:
                val = space.d[x][zs[b]]
            else:
                val = cross(zs.index(w), b)
            rows[pos[w]][m + b - 1] = val
            rows[m + b - 1][pos[w]] = val

    labels = list(base.labels)
    used = set(labels)
    for b in range(1, k + 1):
        lab = space.labels[zs[b]] + "'"
        while lab in used:
            lab += "'"
        used.add(lab)
        labels.append(lab)

    out = MetricSpace(tuple(labels), tuple(tuple(r) for r in rows), bound)
    verdict = validate_metric(out.d, out.diam_bound)
    if not verdict:
        raise MetricFailureError(
            f"uwmt extension invalid: {verdict.reason} at {verdict.witness}", verdict
        )
    return out, list(range(m, n))


@dataclass(frozen=True)
class BFState:
    """A partial isometry presented as matched pairs inside an approximant,
    with every pair at distance <= eps."""

    space: Approximant
    pairs: tuple[tuple[int, int], ...]
    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(a), int(b)) for a, b in self.pairs))
        object.__setattr__(self, "eps", as_fraction(self.eps))

    @classmethod
    def create(
        cls, space: Approximant, pairs: Sequence[tuple[int, int]], eps: RationalLike
    ) -> "BFState":
        st = cls(space, tuple(pairs), as_fraction(eps))
        if st.eps <= 0:
            raise PreconditionError(f"eps must be positive, got {st.eps}")
        dom = [p for p, _ in st.pairs]
        if len(set(dom)) != len(dom):
            raise IndexClashError("duplicate domain indices in pairs")
        rows = space.rows
        for i, (a, b) in enumerate(st.pairs):
            if Fraction(rows[a][b], space.denom) > st.eps:
                raise PreconditionError(f"pair {i} is {space.dist(a, b)} apart, above eps {st.eps}")
            for j in range(i + 1, len(st.pairs)):
                c, d2 = st.pairs[j]
                if rows[a][c] != rows[b][d2]:
                    raise PreconditionError(f"pairs {i} and {j} break the isometry condition")
        return st

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.pairs)

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.pairs)


def _prop53_profile(st: BFState, z: int) -> tuple[list[int], dict[int, Fraction], Fraction]:
    """Prescribed distances for the transported point z'.

    Returns (kept original indices, profile over them, d(z', z)). The
    profile is the Katetov completion of the recipe: exact a_i = d(z, x_i)
    on the images y_i, per-pair min(bound, a_i + d(x_i, y_i)) on the x_i,
    and min(eps, min_i(a_i + d(y_i, z))) on z itself, all closed under
    one-leg paths so the result is always a one-point metric extension.
    """
    if not st.pairs:
        raise EmptyStateError("back-and-forth state has no pairs")
    if z in st.domain:
        raise IndexClashError(f"probe point {z} already in the domain")
    ap = st.space
    dist = ap.dist
    bound = ap.diam_bound
    a = {i: dist(z, xi) for i, (xi, _) in enumerate(st.pairs)}
    b = {i: dist(z, yi) for i, (_, yi) in enumerate(st.pairs)}
    e = {i: dist(xi, yi) for i, (xi, yi) in enumerate(st.pairs)}
    # a distance can never exceed the bound, so the bound joins the min
    t0 = min(st.eps, bound, min(a[i] + b[i] for i in a))
    c = {i: min(bound, a[i] + e[i]) for i in a}

    keep = sorted(set(st.domain) | set(st.image) | {z})
    profile: dict[int, Fraction] = {}
    for w in keep:
        best = bound
        for i, (xi, yi) in enumerate(st.pairs):
            leg_y = a[i] + dist(yi, w)
            if leg_y < best:
                best = leg_y
            leg_x = c[i] + dist(xi, w)
            if leg_x < best:
                best = leg_x
        leg_z = t0 + dist(z, w)
        if leg_z < best:
            best = leg_z
        profile[w] = best
    return keep, profile, t0


def prop53_extension(st: BFState, z: int) -> tuple[MetricSpace, int]:
    """Add the transported point z' with d(z', y_i) = d(z, x_i) exactly and
    d(z', z) <= eps, over the restriction to the pairs and z."""
    keep, profile, t0 = _prop53_profile(st, z)
    base = st.space.restrict_space(keep)
    out = base.with_point(st.space.labels[z] + "'", [profile[w] for w in keep])
    verdict = validate_metric(out.d, out.diam_bound)
    if not verdict:
        raise MetricFailureError(
            f"transport extension invalid: {verdict.reason} at {verdict.witness}", verdict
        )
    assert profile[z] == t0 and t0 <= st.eps
    return out, out.n_points - 1


def back_and_forth_extend(st: BFState, z: int) -> BFState:
    """Extend the partial isometry through z by searching the approximant
    for a point realizing the transported profile exactly.

    Raises Unsaturated when no point matches; the caller should run
    fraisse_step and retry.
    """
    keep, profile, _ = _prop53_profile(st, z)
    ap = st.space
    targets: list[tuple[int, int]] = []
    for w in keep:
        scaled = profile[w] * ap.denom
        if scaled.denominator != 1:
            raise UnsaturatedError(
                f"profile value {profile[w]} at point {w} is off the 1/{ap.denom} grid"
            )
        targets.append((w, int(scaled)))
    rows = ap.rows
    found = -1
    for p in range(ap.n_points):
        row = rows[p]
        if all(row[w] == v for w, v in targets):
            found = p
            break
    if found < 0:
        raise UnsaturatedError("no existing point realizes the transported profile")
    return BFState.create(ap, st.pairs + ((z, found),), st.eps)


def injectivity_chain(
    r: RationalLike, s: RationalLike, diam_bound: RationalLike
) -> MetricSpace:
    """A cycle x_0..x_n with n consecutive steps of length exactly r and a
    closing distance of exactly s, capped at the diameter bound.

    The matrix is the shortest-path metric of the (n+1)-cycle with n edges
    of length r and one closing edge of length s. For s >= r the step
    count is ceil(s/r); for s < r two steps are needed, since a single
    edge cannot carry both exact lengths.
    """
    r, s, bound = as_fraction(r), as_fraction(s), as_fraction(diam_bound)
    if not 0 < r <= bound:
        raise PreconditionError(f"need 0 < r <= diam_bound, got r={r}")
    if not 0 < s <= bound:
        raise PreconditionError(f"need 0 < s <= diam_bound, got s={s}")
    if s == r:
        n = 1
    else:
        n = max(2, ceil(s / r))
    rows = [
        [min(r * abs(i - j), (n - abs(i - j)) * r + s) for j in range(n + 1)]
        for i in range(n + 1)
    ]
    labels = [f"x{i}" for i in range(n + 1)]
    chain = MetricSpace(tuple(labels), tuple(tuple(row) for row in rows), max(bound, r * n + s))
    return cap_metric(chain, bound)


def nonproper_witness(
    space: MetricSpace, x: int, Z: Sequence[int], lam: RationalLike
) -> tuple[MetricSpace, int]:
    """Add a level-lambda companion of x: d(y, x) = lambda and
    d(y, z_i) = max(lambda, d(x, z_i)), over the restriction to x and Z."""
    level = as_fraction(lam)
    Z = list(Z)
    if x in Z:
        raise IndexClashError("Z must not contain x")
    if len(set(Z)) != len(Z):
        raise IndexClashError("duplicate indices in Z")
    if not 0 < level < space.diam_bound:
        raise LambdaOutOfRangeError(f"lambda {level} outside (0, {space.diam_bound})")
    keep = sorted({x, *Z})
    pos = {orig: i for i, orig in enumerate(keep)}
    base = space.restrict(keep)
    profile = [Fraction(0)] * len(keep)
    profile[pos[x]] = level
    for z in Z:
        profile[pos[z]] = max(level, space.d[x][z])
    out = base.with_point("y", profile)
    verdict = validate_metric(out.d, out.diam_bound)
    if not verdict:
        raise MetricFailureError(
            f"level companion invalid: {verdict.reason} at {verdict.witness}", verdict
        )
    return out, out.n_points - 1
