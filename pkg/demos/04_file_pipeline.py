"""Round-trip an instance through files and the command-line interface.

Writes the mini bridge instance to CSV/JSON files in a scratch
directory, then drives the same verdicts through the CLI that the
library produced in demos 01 and 02: select a committee, verify a
non-representative one, price the constraint, and report who is left
unrepresented.

Run with: python3 demos/04_file_pipeline.py
"""

import tempfile
from pathlib import Path

from jrselect import mini_bridge_instance, write_instance_files
from jrselect.cli import cli_main


def run(argv: list[str]) -> None:
    print(f"\n$ jrselect {' '.join(argv)}")
    code = cli_main(argv)
    if code != 0:
        raise SystemExit(f"command failed with exit code {code}")


def main() -> None:
    instance = mini_bridge_instance()
    with tempfile.TemporaryDirectory(prefix="jrselect-demo-") as scratch:
        directory = Path(scratch)
        for path in write_instance_files(instance, directory):
            print(f"wrote {path.name}")
        bundle = str(directory / "instance.json")

        run(["select", "--instance", bundle, "--rule", "mda", "--method", "greedy"])
        run(["verify-jr", "--instance", bundle, "--items", "2,3,4"])
        run(["price", "--instance", bundle, "--rule", "mda", "--method", "exact"])
        run(["report", "--instance", bundle, "--committee", "2,3,4", "--rule", "mda"])


if __name__ == "__main__":
    main()
