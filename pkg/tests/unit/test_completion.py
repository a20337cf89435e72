import pytest

from src.core.completion import (
    build_completion,
    carrier_isomorphic,
    check_c0_complete,
    check_compactness,
    check_idempotence,
    check_separation,
    is_g0_open,
    w0,
)
from src.core.errors import NotSaturated
from src.core.externology import Tail, neighborhood_tower, total_tower, trivial_tower
from src.core.finite_space import components, random_poset
from src.ingestion.gallery import gallery

pytestmark = pytest.mark.unit


class TestCarrier:
    def test_ray_adds_one_end(self, ray5):
        completion = build_completion(ray5.space, ray5.tower)
        assert len(completion) == 10
        assert completion.points[-1].name == "end:c4"
        assert completion.points[-1].is_glued

    def test_limit_atoms_are_glued(self, twosinks):
        completion = build_completion(twosinks.space, twosinks.tower)
        assert [p.name for p in completion.points] == [
            "c1", "c2", "c3", "f01", "f12", "f23", "f34", "end:c0", "end:c4"
        ]
        space = twosinks.space
        assert completion.p0[space.atom("c0")] == completion.incl0[0]
        assert completion.p0[space.atom("c4")] == completion.incl0[1]

    def test_trivial_tower_gives_discrete_ends(self):
        space = random_poset(9, seed=4)
        completion = build_completion(space, trivial_tower(space))
        carrier = completion.as_space()
        assert len(carrier) == len(components(space, space.full()))
        assert all(len(u) == 1 for u in carrier.min_open)

    def test_total_tower_changes_nothing(self):
        space = random_poset(9, seed=4)
        carrier = build_completion(space, total_tower(space)).as_space()
        assert carrier.atoms == space.atoms
        assert carrier.min_open == space.min_open


class TestW0:
    def test_last_level_of_twosinks(self, twosinks):
        completion = build_completion(twosinks.space, twosinks.tower)
        level = twosinks.tower.levels[2]
        assert completion.names(w0(completion, level, 2)) == ["end:c0", "end:c4"]

    def test_preimage_recovers_levels(self, small_fixture):
        completion = build_completion(small_fixture.space, small_fixture.tower)
        for k, level in enumerate(small_fixture.tower.levels):
            assert completion.p0_preimage(completion.w0(level, k)) == level
            assert completion.incl0_preimage(completion.w0(level, k)) == list(range(len(completion.ends)))

    def test_intersection_is_deeper_level(self, small_fixture):
        completion = build_completion(small_fixture.space, small_fixture.tower)
        levels = small_fixture.tower.levels
        sets = [completion.w0(level, k) for k, level in enumerate(levels)]
        for i in range(len(levels)):
            for j in range(len(levels)):
                assert sets[i] & sets[j] == sets[max(i, j)]

    def test_unsaturated(self, twosinks):
        completion = build_completion(twosinks.space, twosinks.tower)
        space = twosinks.space
        with pytest.raises(NotSaturated):
            completion.w0(space.atom_set(["c0"]), 1)
        with pytest.raises(NotSaturated):
            completion.w0(space.atom_set(["c2"]), 1)


class TestG0:
    def test_whole_carrier_is_open(self, small_fixture):
        completion = build_completion(small_fixture.space, small_fixture.tower)
        assert is_g0_open(completion, completion.carrier_set(range(len(completion)))).is_open

    def test_isolated_end(self, twosinks):
        completion = build_completion(twosinks.space, twosinks.tower)
        assert is_g0_open(completion, completion.carrier_set([completion.incl0[0]])).is_open

    def test_end_needs_its_component(self, ray5):
        completion = build_completion(ray5.space, ray5.tower)
        check = is_g0_open(completion, completion.carrier_set(completion.incl0))
        assert not check.is_open
        assert check.witness == "end:c4"

    def test_non_open_preimage(self, twosinks):
        completion = build_completion(twosinks.space, twosinks.tower)
        f12 = completion.points.index(next(p for p in completion.points if p.name == "f12"))
        check = is_g0_open(completion, completion.carrier_set([f12]))
        assert not check.is_open and check.witness == "f12"

    def test_minimal_open_of_end(self, ray5):
        completion = build_completion(ray5.space, ray5.tower)
        end = completion.incl0[0]
        assert completion.names(completion.minimal_open(end)) == ["c4", "end:c4"]


class TestInducedTower:
    def test_shrinking_base_becomes_core(self, ray5):
        completion = build_completion(ray5.space, ray5.tower)
        induced = completion.induced_tower
        assert induced.tail is Tail.SHRINKS_TO_CORE
        assert completion.names(induced.core) == ["end:c4"]
        assert check_c0_complete(completion.as_space(), induced).complete

    def test_stabilized_base_stays(self, twosinks):
        completion = build_completion(twosinks.space, twosinks.tower)
        assert completion.induced_tower.tail is Tail.STABILIZED


class TestC0Completeness:
    def test_complete(self, twosinks, line5shift, morse16):
        for fixture in (twosinks, line5shift, morse16):
            verdict = check_c0_complete(fixture.space, fixture.tower)
            assert verdict.complete and verdict.reason is None

    def test_not_surjective(self, ray5):
        verdict = check_c0_complete(ray5.space, ray5.tower)
        assert verdict.reason == "E0NotSurjective"
        assert verdict.witness == {"end": "end:c4"}

    def test_not_injective(self, cycle3):
        verdict = check_c0_complete(cycle3.space, cycle3.tower)
        assert verdict.reason == "E0NotInjective"
        assert verdict.witness == {"atoms": ["c0", "c1"]}

    def test_report_tags(self, twosinks):
        data = check_c0_complete(twosinks.space, twosinks.tower).to_dict()
        assert data["theorem"] == "c0_completeness"
        assert data["lpc_completeness"]["branch_criterion"] is True

    def test_idempotence(self, ray5, twosinks):
        for fixture in (ray5, twosinks):
            result = check_idempotence(fixture.space, fixture.tower)
            assert result["carrier_isomorphic"]
            assert result["completed_is_complete"]

    def test_idempotence_on_every_fixture(self, small_fixture):
        result = check_idempotence(small_fixture.space, small_fixture.tower)
        assert result["theorem"] == "first_countable_idempotence"
        assert result["carrier_isomorphic"]

    def test_carrier_isomorphic_by_structure(self, line5):
        smaller = random_poset(4, seed=1)
        assert carrier_isomorphic(line5, line5)
        assert not carrier_isomorphic(line5, smaller)


class TestSeparation:
    def test_twosinks(self, twosinks):
        report = check_separation(twosinks.space, twosinks.tower)
        assert report.ends_separated
        assert report.split_levels == {("end:c0", "end:c4"): 1}
        assert report.escape["c2"] is True
        assert report.escape["f01"] is False
        assert not report.hausdorff_ok
        # the middle level is wider than star(L)
        assert not report.completeex_applicable

    def test_neighbourhood_tower_of_closed_points(self):
        space = gallery("morse-circle", 8).space
        tower = neighborhood_tower(space, space.atom_set(["m", "M"]))
        report = check_separation(space, tower)
        assert report.completeex_applicable
        assert report.ends_separated
        assert check_c0_complete(space, tower).complete

    def test_neighbourhood_condition_implies_complete(self, small_fixture):
        report = check_separation(small_fixture.space, small_fixture.tower)
        if report.completeex_applicable:
            assert check_c0_complete(small_fixture.space, small_fixture.tower).complete

    def test_ends_split_by_disjoint_w0(self, small_fixture):
        space, tower = small_fixture.space, small_fixture.tower
        report = check_separation(space, tower)
        completion = build_completion(space, tower)
        index = {end.name: i for i, end in enumerate(completion.ends)}
        for (first, second), level in report.split_levels.items():
            first_w0 = completion.w0(completion.end_component(index[first], level), level)
            second_w0 = completion.w0(completion.end_component(index[second], level), level)
            assert first_w0.isdisjoint(second_w0)
        assert report.ends_separated

    def test_bintree_split_levels(self, bintree2):
        report = check_separation(bintree2.space, bintree2.tower)
        assert report.split_levels[("end:e00", "end:e01")] == 2
        assert report.split_levels[("end:e00", "end:e10")] == 1
        assert report.hausdorff_ok
        assert report.to_dict()["theorem"] == "hausdorff_conditions"


class TestCompactness:
    def test_bintree(self, bintree2):
        report = check_compactness(bintree2.space, bintree2.tower)
        assert report.bonding_images_finite == [1, 2]
        assert report.connected and report.escape_all
        assert report.compact_conclusion
        assert report.ends == 4

    def test_limit_neighbours_block_escape(self, twosinks):
        space = twosinks.space
        report = check_compactness(space, twosinks.tower)
        assert report.connected
        assert not report.escape_all
        assert report.to_dict()["freudenthal_preconditions"]["theorem"] == "freudenthal_ends"
