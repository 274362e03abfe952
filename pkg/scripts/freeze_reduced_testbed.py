"""Compute exact swap distances on the reduced testbed used by the acceptance suite.

The full 10x50 testbed needs exact isomorphic swap distances for 58,996 pairs,
which is far beyond what the exact search can do in reasonable time.  This
script builds the reduced testbed (m=6, n=50, every fifth election of each
family plus the compass elections) and writes its swap matrix to
``tests/data/reduced_testbed_swap.csv``.  The acceptance suite recomputes a
subsample of these values live.

Usage:
    python scripts/freeze_reduced_testbed.py [output path]
"""

import sys
import time
from pathlib import Path

from electionmap.datasets import reduced_testbed
from electionmap.distances.matrix import distance_matrix
from electionmap.io import format_distance_csv


def main(argv):
    out = Path(argv[1]) if len(argv) > 1 else Path(__file__).resolve().parents[1] / "tests" / "data" / "reduced_testbed_swap.csv"
    items = reduced_testbed()
    start = time.time()
    matrix = distance_matrix([item.election for item in items], "swap", [item.label for item in items])
    out.write_text(format_distance_csv(matrix))
    print(f"{len(items)} elections, {time.time() - start:.0f} s, written to {out}")


if __name__ == "__main__":
    main(sys.argv)
