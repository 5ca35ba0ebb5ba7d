"""Correspondences between finite spaces and their distortion.

A correspondence is a relation between the points of two spaces that is
surjective in both directions; its distortion is the largest discrepancy
between matched distances.  The module also carries the piecewise-linear
machinery for relations drawn inside the rectangle
Q = [-lam/2, lam/2] x [-pi, pi], whose axes are a segment coordinate and a
circle angle: a point of Q pairs a segment point with a circle point, and
pair_distortion evaluates the metric discrepancy of two such pairings
directly from coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CoverageGap,
    GridTooCoarse,
    InvalidCorrespondence,
    LambdaOutOfRange,
    SpacesDiffer,
)
from .models import circle_angles, segment_positions, circle_space, segment_space
from .spaces import FiniteMetricSpace, PointSubset

TWO_PI = 2.0 * math.pi


def is_correspondence(pairs: Iterable[tuple[int, int]], n_left: int, n_right: int) -> bool:
    """True when the relation touches every point on both sides."""
    left = set()
    right = set()
    for i, j in pairs:
        if not (0 <= i < n_left and 0 <= j < n_right):
            return False
        left.add(i)
        right.add(j)
    return len(left) == n_left and len(right) == n_right


class Correspondence:
    """A validated relation between two finite metric spaces."""

    __slots__ = ("left", "right", "pairs")

    def __init__(self, left: FiniteMetricSpace, right: FiniteMetricSpace,
                 pairs: Iterable[tuple[int, int]]):
        pairs = frozenset((int(i), int(j)) for i, j in pairs)
        if not is_correspondence(pairs, left.n, right.n):
            raise InvalidCorrespondence(
                "relation must touch every point of both spaces and stay in range"
            )
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "pairs", pairs)

    def __setattr__(self, name, value):
        raise AttributeError("Correspondence is immutable")

    def __len__(self):
        return len(self.pairs)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)


def distortion(corr: Correspondence) -> float:
    """max over matched pairs of |d_left - d_right|."""
    pairs = corr.sorted_pairs()
    li = np.fromiter((p[0] for p in pairs), dtype=int)
    ri = np.fromiter((p[1] for p in pairs), dtype=int)
    dl = corr.left.dist[np.ix_(li, li)]
    dr = corr.right.dist[np.ix_(ri, ri)]
    return float(np.abs(dl - dr).max())


def _augment_right(pairs: set[tuple[int, int]], images: np.ndarray, n: int) -> None:
    """Add, for each unhit circle vertex, its angularly nearest sample."""
    hit = {j for _, j in pairs}
    if len(hit) == n:
        return
    phis = circle_angles(n)
    for j in range(n):
        if j in hit:
            continue
        delta = np.abs(images - phis[j])
        delta = np.minimum(delta, TWO_PI - delta)
        k = int(delta.argmin())
        pairs.add((k, j))


def wrap_once(lam: float, m: int, n: int) -> Correspondence:
    """Nearest-grid-point graph of the single full wind of [0, lam] around the circle.

    The map sends t to the angle 2*pi*t/lam.  Each segment grid point is
    matched to its nearest circle vertex; circle vertices left unhit are
    matched to their nearest image, which needs m >= n to stay within one
    grid step.
    """
    if lam <= 0:
        raise LambdaOutOfRange(f"wrap needs a positive length, got {lam}")
    if m < n:
        raise GridTooCoarse(f"segment grid m = {m} cannot cover {n} circle vertices")
    t = segment_positions(lam, m)
    images = (TWO_PI * t / lam) % TWO_PI
    idx = np.rint(images / (TWO_PI / n)).astype(int) % n
    pairs = {(int(k), int(idx[k])) for k in range(m)}
    _augment_right(pairs, images, n)
    return Correspondence(segment_space(lam, m), circle_space(n), pairs)


def wrap_triple(lam: float, m: int, n: int) -> Correspondence:
    """Nearest-grid-point graph of the wind at triple angular speed.

    The map sends t to the angle 3t.  Defined for lam in [2*pi/3, 7*pi/6]:
    the image covers the circle (3*lam >= 2*pi) and the largest gap between
    |t - t'| and the matched arc length stays at 2*pi/3 over that range.
    """
    if not (2 * math.pi / 3 - 1e-12 <= lam <= 7 * math.pi / 6 + 1e-12):
        raise LambdaOutOfRange(f"triple-speed wind is only used for lam in [2pi/3, 7pi/6], got {lam}")
    if m < n:
        raise GridTooCoarse(f"segment grid m = {m} cannot cover {n} circle vertices")
    t = segment_positions(lam, m)
    images = (3.0 * t) % TWO_PI
    idx = np.rint(images / (TWO_PI / n)).astype(int) % n
    pairs = {(int(k), int(idx[k])) for k in range(m)}
    _augment_right(pairs, images, n)
    return Correspondence(segment_space(lam, m), circle_space(n), pairs)


def wrap_image_angle(lam: float, t: float, rate: float | None = None) -> float:
    """Angle assigned to segment coordinate t by a wind; default is one turn."""
    speed = (TWO_PI / lam) if rate is None else rate
    return (speed * t) % TWO_PI


# piecewise-linear relations in Q coordinates

def _wrap_angle(phi):
    """Wrap angles into (-pi, pi].

    Angles already in range pass through unchanged: the mod arithmetic
    would otherwise round magnitudes below eps(pi) away entirely.
    """
    p = np.asarray(phi, dtype=float)
    w = np.mod(p + math.pi, TWO_PI) - math.pi
    w = np.where(w == -math.pi, math.pi, w)
    return np.where((p > -math.pi) & (p <= math.pi), p, w)


def pair_distortion(p, q) -> float:
    """Distortion contribution of two segment-circle pairings given as Q points.

    With dt = |t - t0| and dphi the absolute angle difference after both
    angles are wrapped into (-pi, pi], the value is |dt - dphi| when
    dphi <= pi and |dt - (2*pi - dphi)| otherwise, which is exactly
    |segment distance - circle distance| for the two pairings.
    """
    t0, phi0 = float(p[0]), float(_wrap_angle(p[1]))
    t1, phi1 = float(q[0]), float(_wrap_angle(q[1]))
    dt = abs(t1 - t0)
    dphi = abs(phi1 - phi0)
    if dphi <= math.pi:
        return abs(dt - dphi)
    return abs(dt - (TWO_PI - dphi))


@dataclass(frozen=True)
class DistortionRegion:
    """Points of Q whose pairing with a fixed center distorts by at most the threshold."""

    center: tuple[float, float]
    threshold: float

    def contains(self, p) -> bool:
        return pair_distortion(self.center, p) <= self.threshold


def _pairwise_distortion_max(points: np.ndarray, chunk: int = 512) -> float:
    t = points[:, 0]
    phi = _wrap_angle(points[:, 1])
    best = 0.0
    for lo in range(0, len(points), chunk):
        hi = min(lo + chunk, len(points))
        dt = np.abs(t[lo:hi, None] - t[None, :])
        dphi = np.abs(phi[lo:hi, None] - phi[None, :])
        circ = np.minimum(dphi, TWO_PI - dphi)
        block = np.abs(dt - circ).max()
        if block > best:
            best = float(block)
    return best


def distortion_bound_holds(points: Sequence, threshold: float) -> bool:
    """Check that every point of a Q relation lies in every other point's region.

    Equivalent to the pairwise criterion: the relation's distortion is at
    most the threshold exactly when, for each point, the region of that
    threshold centered there contains the whole relation.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    t = pts[:, 0]
    phi = _wrap_angle(pts[:, 1])
    for k in range(len(pts)):
        dt = np.abs(t - t[k])
        dphi = np.abs(phi - phi[k])
        circ = np.minimum(dphi, TWO_PI - dphi)
        if np.any(np.abs(dt - circ) > threshold):
            return False
    return True


class PLCorrespondence:
    """A relation in Q given as a union of line segments.

    Segments are ((t, phi), (t, phi)) coordinate pairs; endpoints must stay
    inside Q = [-lam/2, lam/2] x [-pi, pi].
    """

    __slots__ = ("lam", "segments")

    def __init__(self, lam: float, segments: Sequence):
        if lam <= 0:
            raise LambdaOutOfRange(f"needs a positive length, got {lam}")
        segs = []
        for seg in segments:
            (t0, p0), (t1, p1) = seg
            seg = ((float(t0), float(p0)), (float(t1), float(p1)))
            for t, phi in seg:
                if abs(t) > lam / 2 + 1e-9 or abs(phi) > math.pi + 1e-9:
                    raise InvalidCorrespondence(
                        f"endpoint ({t}, {phi}) outside Q for lam = {lam}"
                    )
            segs.append(seg)
        if not segs:
            raise InvalidCorrespondence("needs at least one segment")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "segments", tuple(segs))

    def __setattr__(self, name, value):
        raise AttributeError("PLCorrespondence is immutable")


def pl_sample(pl: PLCorrespondence, step: float) -> np.ndarray:
    """Sample every segment at spacing <= step and check projection coverage.

    Per segment the sample count is the next power of two at or above
    length/step, so halving the step always refines the previous samples.
    Raises CoverageGap when either projection (segment coordinate, or angle
    with -pi and pi identified) leaves a hole wider than the step.
    """
    if step <= 0:
        raise CoverageGap(f"sampling step must be positive, got {step}")
    chunks = []
    for (t0, p0), (t1, p1) in pl.segments:
        length = math.hypot(t1 - t0, p1 - p0)
        if length == 0:
            chunks.append(np.array([[t0, p0]]))
            continue
        pieces = 1 << max(0, math.ceil(math.log2(length / step)))
        frac = np.arange(pieces + 1) / pieces
        chunks.append(np.column_stack((t0 + frac * (t1 - t0), p0 + frac * (p1 - p0))))
    pts = np.unique(np.concatenate(chunks), axis=0)

    slop = 1e-12
    t = np.sort(pts[:, 0])
    half = pl.lam / 2
    gaps = [t[0] - (-half), half - t[-1]]
    if len(t) > 1:
        gaps.append(float(np.diff(t).max()))
    if max(gaps) > step + slop:
        raise CoverageGap(f"segment projection leaves a gap of {max(gaps):.6g} > step")
    phi = np.sort(_wrap_angle(pts[:, 1]))
    circ_gaps = [phi[0] + TWO_PI - phi[-1]]
    if len(phi) > 1:
        circ_gaps.append(float(np.diff(phi).max()))
    if max(circ_gaps) > step + slop:
        raise CoverageGap(f"angle projection leaves a gap of {max(circ_gaps):.6g} > step")
    return pts


def pl_distortion(pl: PLCorrespondence, step: float) -> float:
    """Largest pair_distortion over the sampled relation.

    The sampling misses the continuous value by at most 4 * step: each of
    the two points moves by at most step and the value is 2-Lipschitz in
    each point.
    """
    return _pairwise_distortion_max(pl_sample(pl, step))


def nearest_point_correspondence(space: FiniteMetricSpace, a: PointSubset,
                                 b: PointSubset) -> Correspondence:
    """Match each point of either subset to its nearest point of the other.

    All matched pairs sit within the Hausdorff distance of the subsets, so
    the distortion is at most twice that.
    """
    if a.space is not space or b.space is not space:
        raise SpacesDiffer("both subsets must live in the given ambient space")
    ai = list(a.indices)
    bi = list(b.indices)
    sub = space.dist[np.ix_(ai, bi)]
    pairs = {(k, int(sub[k].argmin())) for k in range(len(ai))}
    pairs |= {(int(sub[:, k].argmin()), k) for k in range(len(bi))}
    return Correspondence(a.subspace(), b.subspace(), pairs)
