import pytest

from src.core.errors import ConfigError, UnknownFixture
from src.core.externology import Tail, end_space
from src.ingestion.gallery import fixture_sizes, gallery, list_fixtures

pytestmark = pytest.mark.unit


class TestRegistry:
    def test_names(self):
        assert list_fixtures() == [
            "ray5", "ray5shift", "line5shift", "twosinks", "cycle3",
            "bintree", "morse-circle", "limit-cycle-grid", "double-well",
        ]
        assert set(fixture_sizes()) == set(list_fixtures())

    def test_unknown(self):
        with pytest.raises(UnknownFixture):
            gallery("torus")

    def test_every_small_fixture_has_a_tower(self, small_fixture):
        assert small_fixture.tower is not None
        assert small_fixture.describe()["name"] == small_fixture.name


class TestParametricFixtures:
    @pytest.mark.parametrize("depth", [1, 2, 3])
    def test_bintree_ends(self, depth):
        fixture = gallery("bintree", depth)
        _, ends = end_space(fixture.space, fixture.tower)
        assert len(ends) == 2 ** depth
        assert fixture.tower.tail is Tail.SHRINKS_TO_EMPTY
        assert not fixture.has_dynamics

    @pytest.mark.parametrize("depth", [0, 11])
    def test_bintree_bounds(self, depth):
        with pytest.raises(ConfigError) as info:
            gallery("bintree", depth)
        assert info.value.key == "n"

    def test_morse_circle(self, morse16):
        space = morse16.space
        assert len(space) == 32
        assert space.names(morse16.tower.last) == ["M", "m"]
        assert len(morse16.tower) == 9
        assert morse16.describe()["params"] == {"n": 16}

    @pytest.mark.parametrize("n", [3, 7, 2])
    def test_morse_circle_bounds(self, n):
        with pytest.raises(ConfigError):
            gallery("morse-circle", n)

    def test_map_fixture_tower_depth(self):
        fixture = gallery("line5shift", max_depth=2)
        assert fixture.tower.tail is Tail.SHRINKS_TO_EMPTY
        assert len(fixture.tower) == 3


@pytest.mark.slow
class TestGridFixtures:
    def test_limit_cycle_grid(self, limit_cycle_grid):
        space = limit_cycle_grid.space
        assert len(space.cells) == 32 * 32
        assert limit_cycle_grid.describe()["grid"]["resolution"] == [32, 32]
        assert limit_cycle_grid.describe()["approx"]["tau"] == 0.5

    def test_double_well_keeps_its_field(self, double_well):
        assert double_well.field_spec.family == "gradient_descent"
        assert double_well.has_dynamics
