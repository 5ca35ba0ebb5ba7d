"""Exact GH distance between small spaces: branch-and-bound plus oracles.

The search space is trimmed to relations of a canonical shape: one image
per left point, then one extra row per right point the first stage left
uncovered.  Every relation surjective both ways contains a sub-relation
of this shape, and dropping pairs never increases distortion, so the
minimum over shapes is the true minimum.  Distortion values are maxima
of absolute differences of input distances, hence exact, and comparisons
during the search use no tolerance.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .correspondences import Correspondence, distortion, is_correspondence
from .errors import TooLarge
from .spaces import FiniteMetricSpace, diameter

EXHAUSTIVE_CELLS = 20


@dataclass(frozen=True)
class SearchOptions:
    max_points: int = 7
    node_budget: int = 5_000_000
    initial_upper: Optional[float] = None

    def __post_init__(self):
        if self.max_points < 1:
            raise TooLarge("max_points must be at least 1")


@dataclass(frozen=True)
class SearchResult:
    value: float
    correspondence: Correspondence
    status: str  # "optimal" | "upper"
    nodes: int


def gh_exact(x: FiniteMetricSpace, y: FiniteMetricSpace,
             options: Optional[SearchOptions] = None) -> SearchResult:
    """Half the minimum distortion over all correspondences, with witness.

    Branch order: left points by decreasing eccentricity.  Stage one maps
    every left point to a single right point; stage two assigns each right
    point missed by stage one to some left point.  Partial distortion only
    grows, so branches at or above the incumbent are cut.  First-found
    optimum kept on ties; deterministic.
    """
    opts = options or SearchOptions()
    if x.n > opts.max_points or y.n > opts.max_points:
        raise TooLarge(
            f"sides must have at most {opts.max_points} points, got {x.n} and {y.n}"
        )
    dx, dy = x.dist, y.dist
    nx, ny = x.n, y.n

    rows = sorted(range(nx), key=lambda i: (-float(dx[i].max()), i))

    # incumbent: a correspondence whose distortion is known; best_dis: the
    # pruning threshold (may sit below the incumbent when a caller supplies
    # an external upper value)
    incumbent_dis = max(diameter(x), diameter(y))
    best_pairs = {(i, j) for i in range(nx) for j in range(ny)}
    best_dis = incumbent_dis
    if opts.initial_upper is not None:
        best_dis = min(best_dis, 2.0 * opts.initial_upper)

    budget = opts.node_budget
    nodes = 0
    exhausted = False

    # chosen[k] = image of rows[k]; pair list grown in search order
    pair_rows: list[int] = []
    pair_cols: list[int] = []

    def added_cost(i: int, j: int) -> float:
        worst = 0.0
        for r, c in zip(pair_rows, pair_cols):
            gap = abs(dx[i, r] - dy[j, c])
            if gap > worst:
                worst = gap
        return worst

    def repair(uncovered: list[int], current: float):
        nonlocal best_dis, incumbent_dis, best_pairs, nodes, exhausted
        if exhausted:
            return
        if not uncovered:
            if current < best_dis:
                best_dis = current
                incumbent_dis = current
                best_pairs = set(zip(pair_rows, pair_cols))
            return
        j = uncovered[0]
        rest = uncovered[1:]
        for i in range(nx):
            nodes += 1
            if nodes > budget:
                exhausted = True
                return
            cost = max(current, added_cost(i, j))
            if cost >= best_dis:
                continue
            pair_rows.append(i)
            pair_cols.append(j)
            repair(rest, cost)
            pair_rows.pop()
            pair_cols.pop()
            if exhausted:
                return

    def assign(k: int, current: float, covered: int):
        nonlocal nodes, exhausted
        if exhausted:
            return
        if k == nx:
            uncovered = [j for j in range(ny) if not (covered >> j) & 1]
            repair(uncovered, current)
            return
        i = rows[k]
        for j in range(ny):
            nodes += 1
            if nodes > budget:
                exhausted = True
                return
            cost = max(current, added_cost(i, j))
            if cost >= best_dis:
                continue
            pair_rows.append(i)
            pair_cols.append(j)
            assign(k + 1, cost, covered | (1 << j))
            pair_rows.pop()
            pair_cols.pop()
            if exhausted:
                return

    assign(0, 0.0, 0)
    corr = Correspondence(x, y, best_pairs)
    # optimal only when the search ran to completion and the threshold it
    # proved is actually attained by the incumbent
    optimal = (not exhausted) and incumbent_dis == best_dis
    return SearchResult(incumbent_dis / 2, corr, "optimal" if optimal else "upper",
                        nodes)


def enumerate_correspondences(nx: int, ny: int) -> Iterator[frozenset]:
    """Every relation on the nx-by-ny grid surjective both ways, once each.

    Rows each pick a nonempty column subset; candidates failing column
    coverage are filtered out.  Grid capped at EXHAUSTIVE_CELLS cells.
    """
    if nx * ny > EXHAUSTIVE_CELLS:
        raise TooLarge(f"grid {nx}x{ny} exceeds {EXHAUSTIVE_CELLS} cells")
    full = (1 << ny) - 1
    row_choices = range(1, full + 1)
    for masks in itertools.product(row_choices, repeat=nx):
        covered = 0
        for m in masks:
            covered |= m
        if covered != full:
            continue
        yield frozenset(
            (i, j) for i, m in enumerate(masks) for j in range(ny) if (m >> j) & 1
        )


def min_distortion_exhaustive(x: FiniteMetricSpace, y: FiniteMetricSpace) -> float:
    """Minimum distortion by flat exhaustive enumeration over cell masks.

    Independent of the branch-and-bound machinery; used as its oracle.
    Every subset of the nx*ny product grid is one bitmask; coverage and
    the pairwise max are evaluated over all masks at once.
    """
    nx, ny = x.n, y.n
    cells = nx * ny
    if cells > EXHAUSTIVE_CELLS:
        raise TooLarge(f"grid {nx}x{ny} exceeds {EXHAUSTIVE_CELLS} cells")
    dx, dy = x.dist, y.dist
    masks = np.arange(1, 1 << cells, dtype=np.int64)

    valid = np.ones(masks.size, dtype=bool)
    for i in range(nx):
        row = sum(1 << (i * ny + j) for j in range(ny))
        valid &= (masks & row) != 0
    for j in range(ny):
        col = sum(1 << (i * ny + j) for i in range(nx))
        valid &= (masks & col) != 0
    masks = masks[valid]

    worst = np.zeros(masks.size)
    for p in range(cells):
        i1, j1 = divmod(p, ny)
        for q in range(p, cells):
            i2, j2 = divmod(q, ny)
            gap = abs(dx[i1, i2] - dy[j1, j2])
            if gap == 0.0:
                continue
            both = (1 << p) | (1 << q)
            hit = (masks & both) == both
            np.maximum(worst, np.where(hit, gap, 0.0), out=worst)
    return float(worst.min())


def verify_optimum(x: FiniteMetricSpace, y: FiniteMetricSpace, value: float,
                   corr) -> bool:
    """Replay a claimed optimum: witness attains it, nothing beats it.

    Accepts a Correspondence or a raw iterable of index pairs, so tampered
    pair sets can be checked without tripping constructor validation.
    """
    if isinstance(corr, Correspondence):
        pairs = corr.sorted_pairs()
    else:
        try:
            pairs = sorted((int(i), int(j)) for i, j in corr)
        except (TypeError, ValueError):
            return False
    if any(not (0 <= i < x.n and 0 <= j < y.n) for i, j in pairs):
        return False
    if not is_correspondence(pairs, x.n, y.n):
        return False
    dis = distortion(Correspondence(x, y, set(pairs)))
    if dis / 2 != value:
        return False
    if x.n * y.n <= EXHAUSTIVE_CELLS:
        return min_distortion_exhaustive(x, y) / 2 == value
    return True
