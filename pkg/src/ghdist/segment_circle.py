"""Closed-form GH distance between a length-lam segment and the unit circle.

The distance follows three branches: pi/2 - lam/4 while the segment is
short, a constant pi/3 plateau for 2*pi/3 <= lam <= 5*pi/3, and
(lam - pi)/2 once the segment dominates.  Every sampled lam is certified
from both sides: an upper bound comes from an explicit correspondence
whose distortion is measured (never trusted), and a lower bound comes
from one of three routes (roundness, diametral involution, diameter gap).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

import numpy as np

from .bounds import BoundRecord, diam_diff_lower, involution_lower, round_lower
from .correspondences import (
    Correspondence,
    PLCorrespondence,
    distortion,
    nearest_point_correspondence,
    pl_distortion,
    wrap_once,
    wrap_triple,
)
from .errors import CertificateFailed, NegativeLambda, ToolkitError
from .models import (
    antipodal_map,
    circle_space,
    segment_positions,
    segment_space,
    whisker_graph,
)
from .nonlinearity import normalized_witness
from .spaces import PointSubset, hausdorff_distance

TWO_THIRDS_PI = 2.0 * math.pi / 3.0
SEVEN_SIXTHS_PI = 7.0 * math.pi / 6.0
FIVE_THIRDS_PI = 5.0 * math.pi / 3.0
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GridParams:
    """Discretization parameters shared by certificates and lower bounds."""

    n_circle: int = 720
    m_grid: int = 720
    pl_step: float = math.pi / 720

    def slack(self, lam: float) -> float:
        """Documented per-lam error budget of the discretized pipeline."""
        return 4 * self.pl_step + 4 * math.pi / self.n_circle + 2 * lam / self.m_grid


DEFAULT_GRIDS = GridParams()

_circle = lru_cache(maxsize=8)(circle_space)


def gh_formula(lam: float) -> float:
    """The three-branch closed form; constant pi/3 on the plateau."""
    if lam < 0:
        raise NegativeLambda(f"segment length must be nonnegative, got {lam}")
    if TWO_THIRDS_PI <= lam <= FIVE_THIRDS_PI:
        return math.pi / 3
    if lam < TWO_THIRDS_PI:
        return math.pi / 2 - lam / 4
    return (lam - math.pi) / 2


def regime(lam: float) -> str:
    """Regime label; interval upper ends inclusive."""
    if lam < 0:
        raise NegativeLambda(f"segment length must be nonnegative, got {lam}")
    if lam <= TWO_THIRDS_PI:
        return "A"
    if lam <= SEVEN_SIXTHS_PI:
        return "B1"
    if lam <= FIVE_THIRDS_PI:
        return "B2"
    if lam <= TWO_PI:
        return "C1"
    return "C2"


def _anchored_segments(lam: float, cyan_to_center: bool = False) -> list:
    """Piecewise-linear relation for the long-segment regimes.

    Anchor points (half of them; the rest are origin reflections):
      A = (lam/2 - pi/2, pi)      top entry of the anti-diagonal
      B = (pi/2, pi/2)            on the main diagonal
      C = ((lam+pi)/4, (lam+pi)/4) crossing of the two diagonals
      D = (lam/2, pi/2)           right end of the anti-diagonal
    Segments: anti-diagonal A-C-D (on t + phi = lam/2 + pi/2), its mirror,
    the main diagonal C'-C, and two connectors A-B, A'-B' (attached at C
    instead of B when cyan_to_center is set).
    """
    a_pt = (lam / 2 - math.pi / 2, math.pi)
    b_pt = (math.pi / 2, math.pi / 2)
    c_pt = ((lam + math.pi) / 4, (lam + math.pi) / 4)
    d_pt = (lam / 2, math.pi / 2)

    def neg(p):
        return (-p[0], -p[1])

    attach = c_pt if cyan_to_center else b_pt
    return [
        (a_pt, d_pt),                # anti-diagonal through C
        (neg(a_pt), neg(d_pt)),      # mirrored anti-diagonal
        (neg(c_pt), c_pt),           # main diagonal through the origin
        (a_pt, attach),              # connector
        (neg(a_pt), neg(attach)),    # mirrored connector
    ]


def _clip_segments(segments, t_max: float) -> list:
    """Restrict each segment to |t| <= t_max, dropping empty leftovers."""
    out = []
    for (t0, p0), (t1, p1) in segments:
        if t0 > t1:
            t0, p0, t1, p1 = t1, p1, t0, p0
        lo, hi = max(t0, -t_max), min(t1, t_max)
        if lo > hi:
            continue
        if t1 == t0:
            out.append(((t0, p0), (t1, p1)))
            continue

        def at(t):
            w = (t - t0) / (t1 - t0)
            return (t, p0 + w * (p1 - p0))

        out.append((at(lo), at(hi)))
    return out


@dataclass(frozen=True)
class CertificateResult:
    lam: float
    regime: str
    kind: str       # full-product | wind-once | wind-triple | piecewise-linear | whisker
    relation: object
    measured: float  # distortion of the relation, as measured
    path: str = "direct"

    @property
    def half(self) -> float:
        return self.measured / 2


def _pl_certificate(lam: float, grids: GridParams) -> tuple[PLCorrespondence, float, str]:
    # the plateau certificates are clippings of the construction at 5*pi/3;
    # clipping cannot increase distortion, so the parent's target applies
    source = FIVE_THIRDS_PI if lam <= FIVE_THIRDS_PI else lam
    target = (source - math.pi) + 4 * grids.pl_step
    best = None
    for path in ("anchored", "connector-at-center"):
        segs = _anchored_segments(source, cyan_to_center=(path != "anchored"))
        if lam < source:
            segs = _clip_segments(segs, lam / 2)
        pl = PLCorrespondence(lam, segs)
        measured = pl_distortion(pl, grids.pl_step)
        if measured <= target:
            return pl, measured, path
        if best is None or measured < best[1]:
            best = (pl, measured, path)
    return best


def certificate(lam: float, grids: Optional[GridParams] = None) -> CertificateResult:
    """Build and measure the upper-bound correspondence for one lam.

    The construction depends on the regime; the returned distortion is
    always measured on the discretized relation.  CertificateFailed means
    the measurement landed above 2*formula + slack, which would indicate
    a broken construction, not bad input.
    """
    grids = grids or DEFAULT_GRIDS
    if lam < 0:
        raise NegativeLambda(f"segment length must be nonnegative, got {lam}")
    reg = regime(lam)
    path = "direct"
    if lam == 0.0:
        circ = _circle(grids.n_circle)
        relation = Correspondence(
            segment_space(0.0, 1), circ, {(0, j) for j in range(circ.n)}
        )
        measured = distortion(relation)
        kind = "full-product"
    elif reg == "A":
        relation = wrap_once(lam, grids.m_grid, grids.n_circle)
        measured = distortion(relation)
        kind = "wind-once"
    elif reg == "B1":
        m_eff = max(grids.m_grid, 2 * grids.n_circle)
        relation = wrap_triple(lam, m_eff, grids.n_circle)
        measured = distortion(relation)
        kind = "wind-triple"
    elif reg in ("B2", "C1"):
        relation, measured, path = _pl_certificate(lam, grids)
        kind = "piecewise-linear"
    else:
        complex_ = whisker_graph(lam, grids.n_circle)
        circle_part = PointSubset(complex_.space, complex_.circle_points)
        segment_part = PointSubset(complex_.space, complex_.segment_points)
        relation = nearest_point_correspondence(
            complex_.space, circle_part, segment_part
        )
        measured = distortion(relation)
        kind = "whisker"

    target = 2 * gh_formula(lam) + grids.slack(lam)
    if measured > target:
        raise CertificateFailed(
            f"lam={lam}: measured distortion {measured} exceeds {target}"
        )
    return CertificateResult(lam, reg, kind, relation, measured, path)


def _odd(m: int) -> int:
    return m if m % 2 == 1 else m + 1


def lower_bound(lam: float, grids: Optional[GridParams] = None) -> BoundRecord:
    """Best certified lower bound at one lam; route chosen by effective value.

    Routes: roundness of the circle (exact on even grids, wins while the
    segment is short), diametral involution with the segment's zero
    nonlinearity witness (the plateau), and the diameter gap (long
    segments).  The involution route carries the documented resolution
    slack 2*pi/n_circle.
    """
    grids = grids or DEFAULT_GRIDS
    if lam < 0:
        raise NegativeLambda(f"segment length must be nonnegative, got {lam}")
    circ = _circle(grids.n_circle)
    seg = segment_space(lam, _odd(grids.m_grid) if lam > 0 else 1)

    routes = [round_lower(circ, seg), diam_diff_lower(circ, seg)]
    witness = normalized_witness(seg, segment_positions(lam, seg.n))
    inv = involution_lower(circ, antipodal_map(grids.n_circle), seg,
                           witness.objective, witness)
    routes.append(replace(inv, slack=TWO_PI / grids.n_circle))
    return max(routes, key=lambda r: (r.effective_lower(), r.source))


@dataclass(frozen=True)
class RegimeReport:
    lam: float
    formula_value: float
    lower: BoundRecord
    upper: BoundRecord
    regime: str
    slack: float

    def consistent(self) -> bool:
        return (
            self.lower.value - self.slack
            <= self.formula_value
            <= self.upper.value + self.slack
        )


def report(lam: float, grids: Optional[GridParams] = None) -> RegimeReport:
    grids = grids or DEFAULT_GRIDS
    cert = certificate(lam, grids)
    low = lower_bound(lam, grids)
    upper = BoundRecord(
        "upper",
        cert.half,
        f"{cert.kind}({cert.path})",
        certificate=cert.relation,
    )
    rep = RegimeReport(
        lam=lam,
        formula_value=gh_formula(lam),
        lower=low,
        upper=upper,
        regime=cert.regime,
        slack=grids.slack(lam),
    )
    if not rep.consistent():
        raise CertificateFailed(
            f"lam={lam}: bounds [{low.value}, {upper.value}] do not bracket "
            f"{rep.formula_value} within {rep.slack}"
        )
    return rep


def sweep(lam_min: float, lam_max: float, steps: int,
          grids: Optional[GridParams] = None,
          threads: Optional[int] = None) -> list[RegimeReport]:
    """Reports over an even lam grid, ordered by lam regardless of threads."""
    if lam_min < 0:
        raise NegativeLambda(f"sweep range must be nonnegative, got {lam_min}")
    if lam_max < lam_min:
        raise NegativeLambda("sweep range must be nondecreasing")
    if steps < 1:
        raise ToolkitError(f"sweep needs at least one step, got {steps}")
    grids = grids or DEFAULT_GRIDS
    if steps == 1:
        lams = [lam_min]
    else:
        lams = list(np.linspace(lam_min, lam_max, steps))
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda v: report(v, grids), lams))
    return [report(v, grids) for v in lams]
