import pytest

from src.core.errors import ExflowError, InvalidTower
from src.core.externology import (
    Tail,
    Tower,
    classify_net,
    component_tree,
    e0_analysis,
    end_space,
    limit_sets,
    neighborhood_tower,
    settle_index,
    total_tower,
    trivial_tower,
    validate_tower,
)

pytestmark = pytest.mark.unit


class TestValidateTower:
    def test_gallery_towers_are_valid(self, small_fixture):
        assert validate_tower(small_fixture.space, small_fixture.tower) == []

    def test_not_open(self, line5):
        tower = Tower((line5.full(), line5.atom_set(["f12"])), Tail.SHRINKS_TO_EMPTY)
        assert "level 1 not open" in validate_tower(line5, tower)

    def test_not_decreasing(self, line5):
        small = line5.atom_set(["c0"])
        tower = Tower((small, line5.full(), line5.full()))
        assert "level 1 not contained in level 0" in validate_tower(line5, tower)

    def test_stabilized_needs_repeat(self, line5):
        tower = Tower((line5.full(), line5.atom_set(["c0"])))
        diagnostics = validate_tower(line5, tower)
        assert len(diagnostics) == 1 and "stabilized" in diagnostics[0]

    def test_core_outside_last_level(self, line5):
        tower = Tower((line5.full(), line5.atom_set(["c0"])), Tail.SHRINKS_TO_CORE, core=line5.atom_set(["c1"]))
        assert "core not contained in level 1" in validate_tower(line5, tower)

    def test_operations_reject_invalid_towers(self, line5):
        tower = Tower((line5.full(), line5.atom_set(["f12"])), Tail.SHRINKS_TO_EMPTY)
        with pytest.raises(InvalidTower) as info:
            limit_sets(line5, tower)
        assert info.value.diagnostics == ["level 1 not open"]


class TestLimitSets:
    def test_line5shift(self, line5shift):
        space = line5shift.space
        limit, bar = limit_sets(space, line5shift.tower)
        assert space.names(limit) == ["c4"]
        assert space.names(bar) == ["c4", "f34"]

    def test_shrinking_to_empty(self, ray5):
        limit, bar = limit_sets(ray5.space, ray5.tower)
        assert not limit and not bar

    def test_shrinking_to_core(self, line5):
        core = line5.atom_set(["c2"])
        tower = Tower((line5.full(), line5.atom_set(["c1", "c2", "f12"])), Tail.SHRINKS_TO_CORE, core=core)
        limit, bar = limit_sets(line5, tower)
        assert limit == core
        assert line5.names(bar) == ["c2", "f12", "f23"]

    def test_degenerate_towers(self, line5):
        assert limit_sets(line5, trivial_tower(line5))[0] == line5.full()
        assert not limit_sets(line5, total_tower(line5))[0]
        around = neighborhood_tower(line5, line5.atom_set(["f23"]))
        assert line5.names(limit_sets(line5, around)[0]) == ["c2", "c3", "f23"]


class TestEnds:
    def test_ray_has_one_end(self, ray5):
        tree, ends = end_space(ray5.space, ray5.tower)
        assert tree.depth == 5
        assert [e.name for e in ends] == ["end:c4"]

    def test_twosinks_branches(self, twosinks):
        space = twosinks.space
        tree, ends = end_space(space, twosinks.tower)
        assert [e.name for e in ends] == ["end:c0", "end:c4"]
        assert [len(b) for b in tree.blocks] == [1, 2, 2, 2]
        assert ends[0].branch == (0, 0, 0, 0)
        assert ends[1].branch == (0, 1, 1, 1)
        assert tree.bonding_image_sizes() == [1, 2, 2]

    def test_bintree_end_labels(self, bintree2):
        _, ends = end_space(bintree2.space, bintree2.tower)
        assert [e.name for e in ends] == ["end:e00", "end:e01", "end:e10", "end:e11"]

    def test_component_tree_is_cached(self, twosinks):
        first = component_tree(twosinks.space, twosinks.tower)
        assert component_tree(twosinks.space, twosinks.tower) is first

    def test_end_equality_uses_last_component(self, twosinks):
        _, ends = end_space(twosinks.space, twosinks.tower)
        assert ends[0] != ends[1]
        assert len({ends[0], ends[0], ends[1]}) == 2


class TestE0:
    def test_bijective(self, twosinks):
        analysis = e0_analysis(twosinks.space, twosinks.tower)
        assert analysis.bijective
        space = twosinks.space
        assert {space.atoms[x]: i for x, i in analysis.e0.items()} == {"c0": 0, "c4": 1}

    def test_not_injective(self, cycle3):
        analysis = e0_analysis(cycle3.space, cycle3.tower)
        assert not analysis.injective
        assert cycle3.space.names(analysis.injective_witness) == ["c0", "c1"]

    def test_not_surjective(self, ray5):
        analysis = e0_analysis(ray5.space, ray5.tower)
        assert analysis.injective and not analysis.surjective
        assert analysis.surjective_witness == 0


class TestNets:
    def test_settle_index(self):
        assert settle_index([False, True, True], 2) == 1
        assert settle_index([True, False, True], 2) is None
        assert settle_index([True], 2) == 0
        assert settle_index([False], 1) is None

    def test_orbit_is_pi0_net(self, line5shift):
        space = line5shift.space
        seq = [space.atom(a) for a in ["c0", "c1", "c2", "c3", "c4", "c4", "c4"]]
        net = classify_net(space, line5shift.tower, seq)
        assert net.eps_net and net.pi0_net
        assert net.branch.name == "end:c4"
        assert net.entry_indices[4] == {"eps": 4, "pi0": 4}

    def test_alternating_sequence_is_eps_but_not_pi0(self, twosinks):
        space = twosinks.space
        seq = [space.atom(a) for a in ["c0", "c4", "c0", "c4"]]
        net = classify_net(space, twosinks.tower, seq)
        assert net.eps_net
        assert not net.pi0_net
        assert net.branch is None

    def test_min_tail_one_accepts_last_sample(self, twosinks):
        space = twosinks.space
        seq = [space.atom(a) for a in ["c0", "c4"]]
        assert not classify_net(space, twosinks.tower, seq).pi0_net
        assert classify_net(space, twosinks.tower, seq, min_tail=1).pi0_net

    def test_empty_sequence(self, twosinks):
        with pytest.raises(ExflowError):
            classify_net(twosinks.space, twosinks.tower, [])
