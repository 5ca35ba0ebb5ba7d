"""Certified GH bound producers.

Every producer returns a BoundRecord: a value tagged lower/upper/exact,
a human-readable source naming the rule and its parameters, and, for
upper bounds, a certificate whose replayed evaluation proves the value.
Negative formula values are clamped to 0 and flagged "vacuous" rather
than silently dropped.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .correspondences import Correspondence, distortion
from .errors import (
    CExceedsDiameter,
    InconsistentBounds,
    NotRound,
    StaleCertificate,
    ToolkitError,
)
from .nonlinearity import (
    LipschitzWitness,
    NotLipschitz,
    line_image,
    nonlinearity_degree_upper,
    validate_antipodal_involution,
    witness_objective,
)
from .spaces import (
    FiniteMetricSpace,
    diameter,
    is_homogeneous,
    is_round,
    min_eccentricity,
)

CONSISTENCY_TOL = 1e-9


@dataclass(frozen=True)
class BoundRecord:
    kind: str  # "lower" | "upper" | "exact"
    value: float
    source: str
    certificate: object = None
    flags: tuple[str, ...] = ()
    slack: float = 0.0

    def __post_init__(self):
        if self.kind not in ("lower", "upper", "exact"):
            raise ToolkitError(f"unknown bound kind {self.kind!r}")
        if self.value < 0:
            raise ToolkitError(f"bound value must be nonnegative, got {self.value}")
        if self.kind == "upper" and self.certificate is None:
            raise ToolkitError("upper bounds must carry a replayable certificate")

    def effective_lower(self) -> float:
        return self.value - self.slack


def _clamped(kind: str, raw: float, source: str, certificate=None,
             flags: tuple[str, ...] = ()) -> BoundRecord:
    if raw < 0:
        return BoundRecord(kind, 0.0, source, certificate, flags + ("vacuous",))
    return BoundRecord(kind, raw, source, certificate, flags)


def full_product(x: FiniteMetricSpace, y: FiniteMetricSpace) -> Correspondence:
    pairs = {(i, j) for i in range(x.n) for j in range(y.n)}
    return Correspondence(x, y, pairs)


def single_point_exact(y: FiniteMetricSpace) -> BoundRecord:
    """Distance from the one-point space: exactly half the diameter."""
    return BoundRecord("exact", diameter(y) / 2, "single-point")


def diam_diff_lower(x: FiniteMetricSpace, y: FiniteMetricSpace) -> BoundRecord:
    return BoundRecord(
        "lower",
        abs(diameter(x) - diameter(y)) / 2,
        "diameter-difference",
    )


def max_diam_upper(x: FiniteMetricSpace, y: FiniteMetricSpace) -> BoundRecord:
    """Half the larger diameter; certified by the full product relation."""
    cert = full_product(x, y)
    return BoundRecord(
        "upper",
        max(diameter(x), diameter(y)) / 2,
        "max-diameter",
        certificate=cert,
    )


def _separation_level(space: FiniteMetricSpace, n: int) -> float:
    """Largest b such that every point sits in some b-separated n-subset.

    0 when no positive b works (in particular when the space has fewer
    than n points).  Feasibility is monotone in b and changes only at
    pairwise distance values, so a bisection over the sorted distinct
    distances finds the threshold.
    """
    if space.n < n:
        return 0.0
    if n == 2:
        return min_eccentricity(space)
    values = np.unique(space.dist)
    values = [float(v) for v in values if v > 0]
    if not values or not is_homogeneous(space, values[0], n):
        return 0.0
    lo, hi = 0, len(values) - 1  # values[lo] feasible
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if is_homogeneous(space, values[mid], n):
            lo = mid
        else:
            hi = mid - 1
    return values[lo]


def homogeneity_lower(x: FiniteMetricSpace, y: FiniteMetricSpace,
                      n: int = 2) -> BoundRecord:
    """Lower bound (b - a)/2 from separation levels.

    If every point of x lies in a b-separated n-subset while some point of
    y lies in no a-separated one, the distance is at least (b - a)/2.  The
    supremum over valid pairs is half the gap between the two spaces'
    separation levels.
    """
    b = _separation_level(x, n)
    a = _separation_level(y, n)
    return _clamped(
        "lower",
        (b - a) / 2,
        f"homogeneity(n={n}, b={b:.12g}, a={a:.12g})",
    )


def round_lower(x: FiniteMetricSpace, y: FiniteMetricSpace) -> BoundRecord:
    """(diam x - min eccentricity of y)/2; requires every point of x diametral."""
    if not is_round(x):
        raise NotRound("first argument must be a round space")
    a = min_eccentricity(y)
    return _clamped(
        "lower",
        (diameter(x) - a) / 2,
        f"round(a={a:.12g})",
    )


def involution_lower(x: FiniteMetricSpace, involution,
                     y: FiniteMetricSpace, c_value: float,
                     witness: LipschitzWitness,
                     tol: float = 1e-9) -> BoundRecord:
    """(diam x - c)/3 where c bounds y's nonlinearity degree from above.

    The involution on x must be diametral; the claimed c must be backed by
    a verifiable witness on y, otherwise the record would rest on a stale
    certificate and is refused.  The underlying argument assumes a
    connected x, so the record carries a "continuous-hypothesis" flag and
    consumers on discretized spaces must add their own resolution slack.
    """
    validate_antipodal_involution(x, involution)
    if c_value < 0:
        raise ToolkitError(f"c upper bound must be nonnegative, got {c_value}")
    # witness verification comes before the vacuity check: a witness that
    # does not check out poisons the route regardless of the claimed value
    try:
        achieved = witness_objective(y, witness.values)
    except NotLipschitz as exc:
        raise StaleCertificate(f"witness is not 1-Lipschitz: {exc}") from exc
    if achieved > c_value + tol:
        raise StaleCertificate(
            f"witness achieves {achieved}, claimed bound is {c_value}"
        )
    diam_x = diameter(x)
    if c_value >= diam_x:
        raise CExceedsDiameter(
            f"c bound {c_value} is not below the diameter {diam_x}"
        )
    return BoundRecord(
        "lower",
        (diam_x - c_value) / 3,
        f"diametral-involution(c={c_value:.12g})",
        certificate=witness,
        flags=("continuous-hypothesis",),
    )


def line_image_upper(x: FiniteMetricSpace,
                     witness: Optional[LipschitzWitness] = None,
                     restarts: int = 32, seed: int = 0) -> BoundRecord:
    """Upper bound on the distance between x and its best line image.

    Not a bound between two arbitrary spaces: the certificate relates x to
    the one-dimensional space realizing the witness values.  Half the
    witness objective, certified by the graph correspondence.
    """
    if witness is None:
        _, witness = nonlinearity_degree_upper(x, restarts=restarts, seed=seed)
    image, graph = line_image(x, witness)
    return BoundRecord(
        "upper",
        distortion(graph) / 2,
        f"line-image(c={witness.objective:.12g})",
        certificate=(image, graph),
    )


@dataclass(frozen=True)
class BoundOptions:
    """Knobs for best_bounds.

    homogeneity_orders: subset sizes n to try for the separation bound.
    involution / c_value / c_witness: enable the involution route; the
    involution acts on whichever of the two spaces is round and even
    works only when all three are supplied (x side first, then y side).
    """

    homogeneity_orders: tuple[int, ...] = (2,)
    involution: object = None
    c_value: Optional[float] = None
    c_witness: Optional[LipschitzWitness] = None
    tol: float = CONSISTENCY_TOL


_KIND_RANK = {"lower": 0, "exact": 1, "upper": 2}


def best_bounds(x: FiniteMetricSpace, y: FiniteMetricSpace,
                options: Optional[BoundOptions] = None) -> list[BoundRecord]:
    """Run every applicable producer and cross-check the results.

    Returns records sorted by kind (lower, exact, upper) then value.
    Raises InconsistentBounds when some lower exceeds some upper beyond
    slack and tolerance; that signals a bug in a producer, not bad input.
    """
    opts = options or BoundOptions()
    records: list[BoundRecord] = []
    if x.n == 1:
        records.append(single_point_exact(y))
    if y.n == 1 and x.n > 1:
        records.append(single_point_exact(x))
    records.append(diam_diff_lower(x, y))
    records.append(max_diam_upper(x, y))
    for n in opts.homogeneity_orders:
        fwd = homogeneity_lower(x, y, n)
        rev = homogeneity_lower(y, x, n)
        records.append(fwd if fwd.value >= rev.value else rev)
    if x.n >= 2 and is_round(x):
        records.append(round_lower(x, y))
    if y.n >= 2 and is_round(y) and x.n >= 2:
        records.append(round_lower(y, x))
    if opts.involution is not None and opts.c_witness is not None:
        c_val = opts.c_witness.objective if opts.c_value is None else opts.c_value
        stale = None
        for left, right in ((x, y), (y, x)):
            try:
                records.append(
                    involution_lower(left, opts.involution, right, c_val,
                                     opts.c_witness, opts.tol)
                )
                stale = None
                break
            except StaleCertificate as exc:
                # the involution fit this orientation but the witness did
                # not check out; report that rather than dropping the route
                stale = exc
            except ToolkitError:
                continue
        if stale is not None:
            raise stale

    lowers = [r for r in records if r.kind == "lower"]
    uppers = [r for r in records if r.kind == "upper"]
    exacts = [r for r in records if r.kind == "exact"]
    hi = min((r.value for r in uppers), default=np.inf)
    for r in exacts:
        hi = min(hi, r.value)
    for r in lowers + exacts:
        if r.effective_lower() > hi + opts.tol:
            raise InconsistentBounds(
                f"{r.source} gives lower {r.value} above upper {hi}"
            )
    records.sort(key=lambda r: (_KIND_RANK[r.kind], r.value, r.source))
    return records


def find_diametral_involution(space: FiniteMetricSpace,
                              tol: float = 1e-9) -> Optional[list[int]]:
    """Search for a fixed-point-free diametral involution, None if absent.

    Greedy pairing on the diametral-partner graph; enough for the model
    spaces (even circles, two-point spaces) without a full matching solver.
    """
    n = space.n
    if n % 2 == 1:
        return None
    diam = diameter(space)
    partners = [
        [j for j in range(n) if j != i and abs(space.dist[i, j] - diam) <= tol]
        for i in range(n)
    ]
    alpha = [-1] * n
    order = sorted(range(n), key=lambda i: len(partners[i]))
    for i in order:
        if alpha[i] >= 0:
            continue
        pick = next((j for j in partners[i] if alpha[j] < 0), None)
        if pick is None:
            return None
        alpha[i] = pick
        alpha[pick] = i
    try:
        validate_antipodal_involution(space, alpha, tol)
    except ToolkitError:
        return None
    return alpha
