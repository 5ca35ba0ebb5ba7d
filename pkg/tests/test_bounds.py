import math

import numpy as np
import pytest

from ghdist import (
    BoundOptions,
    BoundRecord,
    antipodal_map,
    best_bounds,
    circle_space,
    diam_diff_lower,
    distortion,
    find_diametral_involution,
    full_product,
    gh_exact,
    homogeneity_lower,
    involution_lower,
    line_image_upper,
    max_diam_upper,
    nonlinearity_degree_exact,
    normalized_witness,
    round_lower,
    scale,
    segment_positions,
    segment_space,
    single_point_exact,
)
from ghdist.errors import (
    CExceedsDiameter,
    NotRound,
    StaleCertificate,
    ToolkitError,
)
from ghdist.testing import random_euclidean_space

TWO_PI = 2.0 * math.pi


def identity_witness(lam: float, m: int):
    space = segment_space(lam, m)
    return space, normalized_witness(space, segment_positions(lam, m))


class TestSimpleProducers:
    def test_single_point_is_half_the_diameter(self):
        rec = single_point_exact(circle_space(720))
        assert rec.kind == "exact"
        assert rec.value == math.pi / 2

    def test_diameter_difference(self):
        rec = diam_diff_lower(circle_space(720), segment_space(1.0, 11))
        assert rec.kind == "lower"
        assert rec.value == (math.pi - 1.0) / 2

    def test_max_diameter_certificate_replays(self):
        x = circle_space(24)
        y = segment_space(math.pi, 25)
        rec = max_diam_upper(x, y)
        assert rec.value == math.pi / 2
        assert distortion(rec.certificate) <= 2 * rec.value + 1e-12

    def test_full_product_relates_everything(self):
        x = segment_space(1.0, 3)
        y = segment_space(2.0, 4)
        corr = full_product(x, y)
        assert len(corr.pairs) == 12


class TestHomogeneityLower:
    def test_identical_spaces_give_zero(self):
        x = circle_space(12)
        assert homogeneity_lower(x, x).value == 0.0

    def test_circle_against_segment(self):
        lam = 1.0
        rec = homogeneity_lower(circle_space(720), segment_space(lam, 721))
        assert abs(rec.value - (math.pi - lam / 2) / 2) <= 1e-12

    def test_two_point_spaces(self):
        rec = homogeneity_lower(segment_space(2.0, 2), segment_space(1.0, 2))
        assert rec.value == 0.5

    def test_negative_gap_clamps_to_vacuous(self):
        rec = homogeneity_lower(segment_space(1.0, 2), segment_space(2.0, 2))
        assert rec.value == 0.0
        assert "vacuous" in rec.flags

    def test_matches_round_route_on_round_spaces(self):
        for y in (segment_space(1.5, 31), random_euclidean_space(5, seed=3)):
            x = circle_space(10)
            assert homogeneity_lower(x, y).value == round_lower(x, y).value


class TestRoundLower:
    def test_requires_a_round_first_argument(self):
        with pytest.raises(NotRound):
            round_lower(segment_space(1.0, 5), circle_space(6))

    def test_circle_against_odd_segment_grid(self):
        lam = TWO_PI / 3
        rec = round_lower(circle_space(720), segment_space(lam, 721))
        assert abs(rec.value - math.pi / 3) <= 1e-12

    def test_circle_against_single_point(self):
        rec = round_lower(circle_space(720), segment_space(0.0, 1))
        assert rec.value == math.pi / 2

    def test_same_space_is_vacuous_zero(self):
        x = circle_space(8)
        rec = round_lower(x, x)
        assert rec.value == 0.0


class TestInvolutionLower:
    def test_zero_nonlinearity_gives_a_third_of_the_diameter(self):
        seg, wit = identity_witness(1.0, 11)
        rec = involution_lower(circle_space(720), antipodal_map(720),
                               seg, 0.0, wit)
        assert abs(rec.value - math.pi / 3) <= 1e-12
        assert "continuous-hypothesis" in rec.flags
        assert rec.certificate is wit

    def test_c_close_to_the_diameter(self):
        eps = 0.03
        seg, wit = identity_witness(1.0, 11)
        rec = involution_lower(circle_space(720), antipodal_map(720),
                               seg, math.pi - eps, wit)
        assert abs(rec.value - eps / 3) <= 1e-12

    def test_c_at_the_diameter_refused(self):
        seg, wit = identity_witness(1.0, 11)
        with pytest.raises(CExceedsDiameter):
            involution_lower(circle_space(720), antipodal_map(720),
                             seg, math.pi, wit)

    def test_underclaiming_witness_is_stale(self):
        circ = circle_space(6)
        wit = normalized_witness(circ, np.zeros(6))  # achieves diam, not 0
        with pytest.raises(StaleCertificate):
            involution_lower(circle_space(720), antipodal_map(720),
                             circ, 0.0, wit)

    def test_non_lipschitz_witness_is_stale(self):
        from ghdist.nonlinearity import LipschitzWitness

        seg = segment_space(1.0, 3)
        bad = LipschitzWitness(values=(0.0, 5.0, 0.0), objective=0.0)
        with pytest.raises(StaleCertificate):
            involution_lower(circle_space(720), antipodal_map(720),
                             seg, 0.0, bad)


class TestLineImageUpper:
    def test_segment_grid_is_almost_free(self):
        rec = line_image_upper(segment_space(2.0, 9), restarts=8, seed=0)
        assert rec.value <= 1e-9

    def test_hexagon_stays_below_half_diameter(self):
        rec = line_image_upper(circle_space(6), restarts=16, seed=0)
        assert rec.value <= math.pi / 2 + 1e-9
        image, graph = rec.certificate
        assert distortion(graph) / 2 == rec.value

    def test_supplied_witness_is_used_verbatim(self):
        space = random_euclidean_space(5, seed=14)
        _, wit = nonlinearity_degree_exact(space)
        rec = line_image_upper(space, witness=wit)
        assert abs(rec.value - wit.objective / 2) <= 1e-12


class TestBestBounds:
    def test_single_points_collapse_to_zero(self):
        x = segment_space(0.0, 1)
        records = best_bounds(x, x)
        assert all(r.value == 0.0 for r in records)

    def test_short_segment_example(self):
        records = best_bounds(circle_space(720), segment_space(0.1, 721))
        best = max(r.value for r in records if r.kind == "lower")
        assert abs(best - (math.pi / 2 - 0.025)) <= 1e-12

    def test_records_arrive_sorted(self):
        records = best_bounds(circle_space(720), segment_space(2.0, 721))
        kinds = [r.kind for r in records]
        assert kinds == sorted(kinds, key=lambda k: ("lower", "exact", "upper").index(k))

    def test_sandwiches_the_exact_distance(self):
        rng = np.random.default_rng(60601)
        for _ in range(30):
            x = random_euclidean_space(int(rng.integers(1, 7)),
                                       seed=int(rng.integers(2**31)))
            y = random_euclidean_space(int(rng.integers(1, 7)),
                                       seed=int(rng.integers(2**31)))
            truth = gh_exact(x, y).value
            for rec in best_bounds(x, y):
                if rec.kind == "lower":
                    assert rec.effective_lower() <= truth + 1e-9
                elif rec.kind == "upper":
                    assert truth <= rec.value + 1e-9
                else:
                    assert abs(rec.value - truth) <= 1e-9

    def test_scaling_equivariance(self):
        def by_producer(records):
            groups = {}
            for r in records:
                groups.setdefault(r.source.split("(")[0], []).append(r.value)
            return {k: sorted(v) for k, v in groups.items()}

        rng = np.random.default_rng(424242)
        for _ in range(10):
            x = random_euclidean_space(int(rng.integers(2, 6)),
                                       seed=int(rng.integers(2**31)))
            y = random_euclidean_space(int(rng.integers(2, 6)),
                                       seed=int(rng.integers(2**31)))
            base = by_producer(best_bounds(x, y))
            doubled = by_producer(best_bounds(scale(x, 2.0), scale(y, 2.0)))
            assert set(base) == set(doubled)
            for key, values in base.items():
                for got, want in zip(doubled[key], values):
                    assert abs(got - 2 * want) <= 1e-9 * max(1.0, want)

    def test_involution_route_appears_when_configured(self):
        seg, wit = identity_witness(1.0, 11)
        opts = BoundOptions(involution=antipodal_map(720), c_witness=wit)
        records = best_bounds(circle_space(720), seg, opts)
        route = [r for r in records if r.source.startswith("diametral-involution")]
        assert len(route) == 1
        assert abs(route[0].value - math.pi / 3) <= 1e-12

    def test_involution_route_tries_the_other_side(self):
        # involution matches y, not x; the route must still fire
        seg, wit = identity_witness(1.0, 11)
        opts = BoundOptions(involution=antipodal_map(720), c_witness=wit)
        records = best_bounds(seg, circle_space(720), opts)
        route = [r for r in records if r.source.startswith("diametral-involution")]
        assert len(route) == 1

    def test_stale_witness_surfaces_instead_of_vanishing(self):
        circ6 = circle_space(6)
        wit = normalized_witness(circ6, np.zeros(6))
        opts = BoundOptions(involution=antipodal_map(720),
                            c_value=0.0, c_witness=wit)
        with pytest.raises(StaleCertificate):
            best_bounds(circle_space(720), circ6, opts)

    def test_inapplicable_involution_is_skipped_silently(self):
        seg, wit = identity_witness(1.0, 11)
        opts = BoundOptions(involution=[1, 0, 2], c_witness=wit)  # has a fixed point
        records = best_bounds(circle_space(720), seg, opts)
        assert not any(r.source.startswith("diametral-involution") for r in records)


class TestBoundRecord:
    def test_rejects_unknown_kind(self):
        with pytest.raises(ToolkitError):
            BoundRecord("sideways", 1.0, "test")

    def test_rejects_negative_value(self):
        with pytest.raises(ToolkitError):
            BoundRecord("lower", -0.5, "test")

    def test_upper_requires_a_certificate(self):
        with pytest.raises(ToolkitError):
            BoundRecord("upper", 1.0, "test")

    def test_effective_lower_subtracts_slack(self):
        rec = BoundRecord("lower", 1.0, "test", slack=0.25)
        assert rec.effective_lower() == 0.75


class TestFindDiametralInvolution:
    def test_even_circle_pairs_antipodes(self):
        for n in (4, 6, 720):
            alpha = find_diametral_involution(circle_space(n))
            assert alpha == list(antipodal_map(n))

    def test_two_point_space(self):
        assert find_diametral_involution(segment_space(1.0, 2)) == [1, 0]

    def test_odd_count_has_none(self):
        assert find_diametral_involution(circle_space(7)) is None

    def test_segment_grid_has_none(self):
        assert find_diametral_involution(segment_space(1.0, 4)) is None
