"""
Analysis orchestrator: builds a subject (fixture or config), runs the
requested checks and writes reports
"""
import logging
import os
import sys
import time
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .completion import build_completion, check_c0_complete, check_compactness, check_idempotence, check_separation
from .errors import ExflowError, InsufficientHorizon
from .externology import e0_analysis, end_space, limit_sets, validate_tower
from .output_manager import build_report, create_summary_report, write_fixture_outputs
from ..dynamics.flow_completion import check_thm66, duality_check, orbit_convergence
from ..dynamics.semiflow import DEFAULT_MAX_DEPTH, basin_decomposition, forward_walk, r_exterior_tower, sample_walk
from ..ingestion.cell_mapper import build_cell_map
from ..ingestion.config_loader import CHECKS, DEFAULT_CHECKS, AnalysisConfig
from ..ingestion.gallery import Fixture, fixture_sizes, gallery

DYNAMIC_CHECKS = ("thm66", "basins", "duality")


def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None) -> None:
    """Setup logging configuration; stdout stays free for command output"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers
    )


def fixture_from_config(config: AnalysisConfig, max_depth: int = DEFAULT_MAX_DEPTH) -> Fixture:
    """Build the cell map a config describes and wrap it as a fixture"""
    name = os.path.splitext(os.path.basename(config.source))[0] or "config"
    space, cell_map = build_cell_map(config.field_spec, config.grid, config.approx, name=name)
    tower = r_exterior_tower(space, cell_map, config.depth or max_depth)
    return Fixture(
        name=name,
        space=space,
        cell_map=cell_map,
        tower=tower,
        params={"config": config.source, "field": config.field_spec.family},
        field_spec=config.field_spec,
        grid=config.grid,
        approx=config.approx,
    )


def ends_block(fixture: Fixture) -> Dict[str, Any]:
    space, tower = fixture.space, fixture.tower
    tree, ends = end_space(space, tower)
    analysis = e0_analysis(space, tower)
    return {
        "theorem": "end_space",
        "count": len(ends),
        "ends": [
            {"name": end.name, "branch": [space.atoms[tree.block(k, b).first()] for k, b in enumerate(end.branch)]}
            for end in ends
        ],
        "components_per_level": [len(blocks) for blocks in tree.blocks],
        "e0": {space.atoms[x]: ends[i].name for x, i in sorted(analysis.e0.items())},
        "e0_injective": analysis.injective,
        "e0_surjective": analysis.surjective,
    }


def limits_block(fixture: Fixture) -> Dict[str, Any]:
    space, tower = fixture.space, fixture.tower
    limit, bar_limit = limit_sets(space, tower)
    return {
        "theorem": "limit_sets",
        "L": space.names(limit),
        "Lbar": space.names(bar_limit),
        "diagnostics": validate_tower(space, tower),
    }


def complete_block(fixture: Fixture) -> Dict[str, Any]:
    space, tower = fixture.space, fixture.tower
    block = check_c0_complete(space, tower).to_dict()
    completion = build_completion(space, tower)
    block["completion"] = {
        "points": [p.name for p in completion.points],
        "glued_points": len(completion.ends),
        "replaced_limit_atoms": len(completion.limit),
    }
    block["idempotence"] = check_idempotence(space, tower)
    return block


def basins_block(fixture: Fixture, seed: int, walks: int, steps: int) -> Dict[str, Any]:
    space, cell_map, tower = fixture.space, fixture.cell_map, fixture.tower
    report = basin_decomposition(space, cell_map, tower)
    rng = np.random.default_rng(seed)
    cells = space.cells
    completion = build_completion(space, tower)
    nets = converged = unsettled = 0
    for _ in range(walks):
        start = int(cells[int(rng.integers(len(cells)))])
        sample = sample_walk(cell_map, start, steps, rng)
        try:
            result = orbit_convergence(space, cell_map, tower, sample, completion)
        except InsufficientHorizon:
            unsettled += 1
            continue
        nets += int(result.is_pi0_net)
        converged += int(result.converges)
    return {
        "theorem": "trajectory_ends",
        "basins": {name: space.names(members) for name, members in report.basins.items()},
        "ambiguous": space.names(report.ambiguous),
        "walks": {"seed": seed, "count": walks, "steps": steps,
                  "pi0_nets": nets, "converged": converged, "unsettled": unsettled},
    }


def run_checks(fixture: Fixture, checks: Sequence[str] = DEFAULT_CHECKS, seed: int = 0,
               walks: int = 100, steps: int = 64, max_depth: int = DEFAULT_MAX_DEPTH) -> Dict[str, Any]:
    """
    Run the requested checks on a fixture

    Args:
        fixture: Subject with space, tower and optional map
        checks: Subset of CHECKS, reported in this order
        seed, walks, steps: Random walk sampling for the basins check
        max_depth: Truncation for towers built from maps

    Returns:
        One result block per check; checks needing dynamics are marked
        skipped on fixtures without a map
    """
    results: Dict[str, Any] = {}
    for check in checks:
        if check not in CHECKS:
            raise ExflowError(f"unknown check {check!r}")
        if check in DYNAMIC_CHECKS and fixture.cell_map is None:
            results[check] = {"skipped": "fixture has no dynamics"}
            continue
        logging.debug(f"Running {check} on {fixture.name}")
        if check == "ends":
            results[check] = ends_block(fixture)
        elif check == "limits":
            results[check] = limits_block(fixture)
        elif check == "complete":
            results[check] = complete_block(fixture)
        elif check == "thm66":
            results[check] = check_thm66(fixture.space, fixture.cell_map, max_depth).to_dict()
        elif check == "separation":
            results[check] = check_separation(fixture.space, fixture.tower).to_dict()
        elif check == "compactness":
            results[check] = check_compactness(fixture.space, fixture.tower).to_dict()
        elif check == "basins":
            results[check] = basins_block(fixture, seed, walks, steps)
        elif check == "duality":
            results[check] = duality_check(fixture.space, fixture.cell_map, max_depth)
    return results


def trace_orbit(fixture: Fixture, start: str, steps: int, seed: Optional[int] = None) -> Dict[str, Any]:
    """
    Follow one trajectory and report its end

    A seed selects a random maximal walk; without one the walk follows the
    least image cell.
    """
    if fixture.cell_map is None:
        raise ExflowError(f"fixture {fixture.name} has no dynamics")
    space = fixture.space
    cell = space.atom(start)
    if seed is None:
        sample = forward_walk(fixture.cell_map, cell, steps)
    else:
        sample = sample_walk(fixture.cell_map, cell, steps, np.random.default_rng(seed))
    convergence = orbit_convergence(space, fixture.cell_map, fixture.tower, sample)
    return {
        "theorem": "trajectory_ends",
        "start": start,
        "walk": space.names(sample.walk),
        "exited": sample.exited,
        "end": convergence.end.name,
        "is_pi0_net": convergence.is_pi0_net,
        "converges": convergence.converges,
        "witness_levels": convergence.witness_levels,
    }


def analyze(fixture: Fixture, checks: Sequence[str] = DEFAULT_CHECKS, seed: int = 0, walks: int = 100,
            steps: int = 64, max_depth: int = DEFAULT_MAX_DEPTH) -> Dict[str, Any]:
    """Run checks and wrap them in a versioned report"""
    results = run_checks(fixture, checks, seed, walks, steps, max_depth)
    return build_report(fixture.describe(), fixture.space, fixture.tower, results)


def process_fixture(name: str, n: Optional[int], output_dir: str, checks: Sequence[str] = DEFAULT_CHECKS,
                    max_depth: int = DEFAULT_MAX_DEPTH) -> Dict[str, Any]:
    """
    Process one gallery fixture through the complete pipeline

    Args:
        name: Fixture name
        n: Size parameter or None
        output_dir: Output directory
        checks: Checks to run
        max_depth: Truncation for absorbing towers

    Returns:
        Summary entry with verdicts and output paths
    """
    start_time = time.time()
    key = name if n is None else f"{name}-{n}"
    print(f"📐 Processing {key}...")

    print("  ⏳ Building fixture...")
    fixture = gallery(name, n, max_depth)

    print("  ⏳ Running checks...")
    report = analyze(fixture, checks, max_depth=max_depth)

    print("  ⏳ Writing outputs...")
    outputs = write_fixture_outputs(key, report, fixture.space, fixture.tower, fixture.cell_map, output_dir)

    results = report["results"]
    complete = results.get("complete", {}).get("complete")
    elapsed = time.time() - start_time
    print(f"  ✅ Completed {key} in {elapsed:.1f}s")
    return {
        "key": key,
        "atoms": len(fixture.space),
        "ends": results.get("ends", {}).get("count"),
        "complete": complete,
        "thm66_complete": results.get("thm66", {}).get("complete"),
        "outputs": outputs,
    }


def process_gallery(output_dir: str, checks: Sequence[str] = ("ends", "limits", "complete", "thm66"),
                    max_depth: int = DEFAULT_MAX_DEPTH) -> Dict[str, Any]:
    """
    Process every gallery fixture at its batch sizes

    Returns:
        Dictionary with per-fixture entries and the summary path
    """
    logging.info(f"Processing gallery into {output_dir}")
    os.makedirs(output_dir, exist_ok=True)
    entries = []
    for name, sizes in fixture_sizes().items():
        for n in sizes:
            try:
                entries.append(process_fixture(name, n, output_dir, checks, max_depth))
            except ExflowError as e:
                logging.error(f"Error processing {name} (n={n}): {e}")
                entries.append({"key": name if n is None else f"{name}-{n}", "error": e.to_dict()})

    summary_path = os.path.join(output_dir, "summary.json")
    create_summary_report(entries, summary_path)
    logging.info(f"Completed processing {len(entries)} fixtures")
    return {"fixtures": entries, "summary_path": summary_path}
