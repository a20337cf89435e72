#!/usr/bin/env python3
"""
Main gallery batch program
Runs the end, limit, completeness and limit-theorem checks over every gallery
fixture and saves reports to individual folders in output/
"""

import argparse
import logging
import sys

from src.core.errors import ExflowError
from src.core.pipeline_processor import process_gallery, setup_logging
from src.ingestion.config_loader import load_settings
from src.ingestion.gallery import fixture_sizes


def main():
    """Entry point"""
    parser = argparse.ArgumentParser(description="Exterior flow gallery batch runner")
    parser.add_argument("-o", "--output", help="Output directory (default: EFL_OUTPUT_DIR or output)")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Set logging level (default: EFL_LOG_LEVEL or INFO)"
    )
    args = parser.parse_args()

    try:
        settings = load_settings()
    except ExflowError as e:
        print(f"❌ Error: {e}")
        sys.exit(2)
    setup_logging(args.log_level or settings.log_level, settings.log_file)
    output_dir = args.output or settings.output_dir

    print("🚀 Starting gallery run")
    print(f"📁 {sum(len(s) for s in fixture_sizes().values())} fixture runs queued")
    print(f"📤 Output will be saved to: {output_dir}/")
    print("=" * 50)

    result = process_gallery(output_dir, max_depth=settings.max_depth)

    failed = [e["key"] for e in result["fixtures"] if e.get("error")]
    print("=" * 50)
    print(f"Fixtures processed: {len(result['fixtures']) - len(failed)}/{len(result['fixtures'])}")
    for entry in result["fixtures"]:
        if entry.get("error"):
            print(f"   ❌ {entry['key']}: {entry['error']['message']}")
        else:
            verdict = "Complete" if entry["complete"] else "Fails"
            print(f"   ✅ {entry['key']}: {entry['ends']} ends, {verdict}")
    print(f"Summary report: {result['summary_path']}")
    logging.info("Gallery run finished")
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()
