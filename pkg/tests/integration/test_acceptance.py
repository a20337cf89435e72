"""
End-to-end properties checked exhaustively on the gallery fixtures
"""
import time

import numpy as np
import pytest

from src.core.completion import build_completion, carrier_isomorphic, check_c0_complete
from src.core.externology import end_space, total_tower, trivial_tower
from src.core.finite_space import FiniteSpace, components, random_poset
from src.core.output_manager import write_json_report
from src.core.pipeline_processor import analyze, basins_block
from src.dynamics.flow_completion import check_thm66, complete_flow
from src.dynamics.semiflow import reverse
from src.ingestion.cell_mapper import GridSpec, build_cell_map
from src.ingestion.gallery import gallery
from src.ingestion.vector_field import ApproxParams, VectorFieldSpec, time_tau_map

pytestmark = pytest.mark.integration


def _discrete(size: int) -> FiniteSpace:
    return FiniteSpace([f"d{i}" for i in range(size)], [{i} for i in range(size)])


class TestRayCompletion:
    def test_completing_the_ray_adds_its_end(self, ray5):
        start = time.time()
        assert check_c0_complete(ray5.space, ray5.tower).reason == "E0NotSurjective"
        completion = build_completion(ray5.space, ray5.tower)
        assert len(completion) == len(ray5.space) + 1
        assert check_c0_complete(completion.as_space(), completion.induced_tower).complete
        assert time.time() - start < 1.0


class TestDegenerateExternologies:
    @pytest.mark.parametrize("seed", range(5))
    def test_trivial_and_total(self, seed):
        space = random_poset(10, seed=seed)
        coarse = build_completion(space, trivial_tower(space)).as_space()
        assert carrier_isomorphic(coarse, _discrete(len(components(space, space.full()))))
        fine = build_completion(space, total_tower(space)).as_space()
        assert carrier_isomorphic(fine, space)


class TestBasisIdentities:
    def test_every_fixture_and_level(self, small_fixture):
        completion = build_completion(small_fixture.space, small_fixture.tower)
        every_end = list(range(len(completion.ends)))
        levels = small_fixture.tower.levels
        w = [completion.w0(level, k) for k, level in enumerate(levels)]
        for k, level in enumerate(levels):
            assert completion.p0_preimage(w[k]) == level
            assert completion.incl0_preimage(w[k]) == every_end
            for j in range(len(levels)):
                assert w[k] & w[j] == w[max(k, j)]


class TestStoneLimitCases:
    def test_morse_circle_is_complete(self, morse16):
        start = time.time()
        report = check_thm66(morse16.space, morse16.cell_map)
        assert report.complete and report.stone
        assert morse16.space.names(report.critical) == ["M", "m"]
        assert report.critical == (report.omega_closure & morse16.space.cell_set())
        assert report.limit & morse16.space.cell_set() == report.critical
        assert report.attraction.is_global_weak
        assert time.time() - start < 1.0

    def test_cycle_fails(self, cycle3):
        report = check_thm66(cycle3.space, cycle3.cell_map)
        assert not report.complete
        assert "C != cl(Omega)" in report.failure_reasons

    def test_biconditional_on_small_fixtures(self, map_fixture):
        assert check_thm66(map_fixture.space, map_fixture.cell_map).biconditional_ok

    @pytest.mark.slow
    def test_limit_cycle_grid(self, limit_cycle_grid):
        start = time.time()
        report = check_thm66(limit_cycle_grid.space, limit_cycle_grid.cell_map)
        assert not report.complete
        assert "C != cl(Omega)" in report.failure_reasons
        assert report.biconditional_ok
        assert time.time() - start < 10.0

    @pytest.mark.slow
    def test_double_well(self, double_well):
        report = check_thm66(double_well.space, double_well.cell_map)
        assert not report.complete
        assert report.biconditional_ok
        assert report.chain_ok


class TestTrajectoryEnds:
    @pytest.mark.parametrize("name", ["line5shift", "twosinks", "morse16"])
    def test_seeded_walks_are_converging_nets(self, request, name):
        fixture = request.getfixturevalue(name)
        walks = basins_block(fixture, seed=5, walks=100, steps=64)["walks"]
        assert walks["unsettled"] == 0
        assert walks["pi0_nets"] == 100
        assert walks["converged"] == 100

    def test_twosinks_ambiguity(self, twosinks):
        assert basins_block(twosinks, seed=0, walks=10, steps=16)["ambiguous"] == ["c2"]


class TestInclusionChain:
    def test_every_map_fixture(self, map_fixture):
        assert check_thm66(map_fixture.space, map_fixture.cell_map).chain_ok


class TestDuality:
    def test_left_completion_is_right_completion_of_reversal(self, map_fixture):
        space, cell_map = map_fixture.space, map_fixture.cell_map
        left, _ = complete_flow(space, cell_map, "l")
        mirror, _ = complete_flow(space, reverse(space, cell_map), "r")
        assert carrier_isomorphic(left.as_space(), mirror.as_space())
        assert reverse(space, reverse(space, cell_map)).edges() == cell_map.edges()


class TestEndCount:
    @pytest.mark.parametrize("depth", range(1, 7))
    def test_bintree(self, depth):
        start = time.time()
        fixture = gallery("bintree", depth)
        _, ends = end_space(fixture.space, fixture.tower)
        assert len(ends) == 2 ** depth
        assert time.time() - start < 1.0


class TestOdeLayer:
    def test_time_map_of_linear_decay(self):
        rng = np.random.default_rng(0)
        tau = 0.7
        points = rng.uniform(-3.0, 3.0, size=(100, 1))
        images = time_tau_map(VectorFieldSpec.linear([[-1]]), ApproxParams(tau=tau), points)
        np.testing.assert_allclose(images, np.exp(-tau) * points, atol=1e-6)

    @pytest.mark.parametrize("bloat", [0.0, 0.1, 0.24])
    def test_zero_field_is_identity_below_half_width(self, bloat):
        grid = GridSpec(lower=(0.0, 0.0), upper=(1.0, 1.0), resolution=(2, 2))
        space, cell_map = build_cell_map(VectorFieldSpec.zero(), grid, ApproxParams(tau=1.0, bloat=bloat))
        assert cell_map.edges() == frozenset((c, c) for c in space.cells)

    def test_reports_are_reproducible(self, tmp_path):
        paths = []
        for run in range(2):
            report = analyze(gallery("twosinks"), ["ends", "complete", "thm66", "basins"], seed=4)
            path = tmp_path / f"run{run}.json"
            write_json_report(report, str(path))
            paths.append(path)
        assert paths[0].read_bytes() == paths[1].read_bytes()
