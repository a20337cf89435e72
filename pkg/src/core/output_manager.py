"""
Export functionality - JSON reports, DOT graphs and the batch summary
"""
import json
import logging
import os
from typing import Any, Dict, List, Optional

import numpy as np

from .externology import Tower, component_tree, end_space
from .finite_space import FiniteSpace

SCHEMA = "exflow-report/1"
FLOAT_DIGITS = 6


def round_floats(value: Any, digits: int = FLOAT_DIGITS) -> Any:
    """Recursively round floats and turn numpy scalars into plain Python values"""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        return round(float(value), digits)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, dict):
        return {str(k): round_floats(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(v, digits) for v in value]
    return value


def space_block(space: FiniteSpace) -> Dict[str, Any]:
    return {"atoms": list(space.atoms), "tops": space.names(space.cells)}


def tower_block(space: FiniteSpace, tower: Tower) -> Dict[str, Any]:
    block: Dict[str, Any] = {
        "levels": [space.names(level) for level in tower.levels],
        "tail": tower.tail.value,
    }
    if tower.core is not None:
        block["core"] = space.names(tower.core)
    return block


def build_report(fixture: Dict[str, Any], space: FiniteSpace, tower: Optional[Tower],
                 results: Dict[str, Any]) -> Dict[str, Any]:
    """
    Assemble a versioned report

    Args:
        fixture: Source description (name, params, grid, approx)
        space: Analysed space
        tower: Tower the checks ran against
        results: One block per requested check

    Returns:
        JSON-ready dictionary with floats rounded
    """
    report = {
        "schema": SCHEMA,
        "fixture": fixture,
        "space": space_block(space),
        "tower": tower_block(space, tower) if tower is not None else None,
        "results": results,
    }
    return round_floats(report)


def write_json_report(report: Dict[str, Any], output_path: str) -> None:
    """
    Write a report as JSON

    Args:
        report: Report dictionary
        output_path: Path to save JSON file
    """
    directory = os.path.dirname(output_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(output_path, 'w', encoding='utf-8') as f:
        json.dump(report, f, indent=2, ensure_ascii=False)
        f.write("\n")


def _quote(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def component_tree_dot(space: FiniteSpace, tower: Tower) -> str:
    """
    Component tree as DOT: one node per level component, edges child to
    parent, and one doublecircle node per end hanging off its last component
    """
    tree = component_tree(space, tower)
    _, ends = end_space(space, tower)
    lines = [f"digraph {_quote('components ' + (space.name or 'space'))} {{", "  rankdir=BT;"]
    for k, blocks in enumerate(tree.blocks):
        for b, block in enumerate(blocks):
            label = f"E{k}[{b}] {space.atoms[block.first()]} ({len(block)})"
            lines.append(f"  {_quote(f'L{k}_{b}')} [label={_quote(label)}];")
    for k in range(1, tree.depth):
        for b, parent in enumerate(tree.parents[k]):
            lines.append(f"  {_quote(f'L{k}_{b}')} -> {_quote(f'L{k - 1}_{parent}')};")
    last = tree.depth - 1
    for end in ends:
        lines.append(f"  {_quote(end.name)} [shape=doublecircle];")
        lines.append(f"  {_quote(end.name)} -> {_quote(f'L{last}_{end.branch[last]}')};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dynamics_dot(cell_map) -> str:
    """Top-cell dynamics as DOT; every exiting cell points at one Exit node"""
    space = cell_map.space
    names = space.atoms
    lines = [f"digraph {_quote('dynamics ' + (space.name or 'space'))} {{"]
    for cell in space.cells:
        lines.append(f"  {_quote(names[cell])};")
    for cell in space.cells:
        for target in sorted(cell_map.image(cell)):
            lines.append(f"  {_quote(names[cell])} -> {_quote(names[target])};")
    if cell_map.exits:
        lines.append(f"  {_quote('Exit')} [shape=point];")
        for cell in sorted(cell_map.exits):
            lines.append(f"  {_quote(names[cell])} -> {_quote('Exit')};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_text(text: str, output_path: str) -> None:
    directory = os.path.dirname(output_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(output_path, 'w', encoding='utf-8') as f:
        f.write(text)


def write_fixture_outputs(key: str, report: Dict[str, Any], space: FiniteSpace, tower: Optional[Tower],
                          cell_map, output_dir: str) -> Dict[str, str]:
    """
    Write all outputs for one fixture into output_dir/<key>/

    Returns:
        Dictionary with output file paths
    """
    fixture_dir = os.path.join(output_dir, key)
    os.makedirs(fixture_dir, exist_ok=True)
    outputs = {"report": os.path.join(fixture_dir, "report.json")}
    write_json_report(report, outputs["report"])
    if tower is not None:
        outputs["tree_dot"] = os.path.join(fixture_dir, "components.dot")
        write_text(component_tree_dot(space, tower), outputs["tree_dot"])
    if cell_map is not None:
        outputs["dynamics_dot"] = os.path.join(fixture_dir, "dynamics.dot")
        write_text(dynamics_dot(cell_map), outputs["dynamics_dot"])
    return outputs


def create_summary_report(entries: List[Dict[str, Any]], output_path: str) -> None:
    """
    Create a summary report over every processed fixture

    Args:
        entries: One dictionary per fixture (key, verdicts, output paths)
        output_path: Path to save summary report
    """
    failed = [e["key"] for e in entries if e.get("error")]
    summary = {
        "schema": SCHEMA,
        "run_info": {
            "total_fixtures": len(entries),
            "failed": failed,
            "complete": [e["key"] for e in entries if e.get("complete")],
        },
        "directory_structure": {
            "<fixture>/report.json": "Versioned report with every check block",
            "<fixture>/components.dot": "Component tree of the tower, ends as doublecircle nodes",
            "<fixture>/dynamics.dot": "Top-cell dynamics graph (fixtures with a map)",
        },
        "fixtures": entries,
    }
    write_json_report(round_floats(summary), output_path)
    logging.info(f"Summary report written to {output_path}")
