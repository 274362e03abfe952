"""Compute isomorphic Hamming distances on the mixed 10x50 approval dataset.

The exact search takes minutes for some pairs (mostly those involving the
disjoint-groups culture), so the acceptance suite reads the matrix written
here from ``tests/data/approval_mix_hamming.csv`` and recomputes a subsample
live.  Per-pair computing times go to ``approval_mix_hamming_timing.csv``.

Usage:
    python scripts/freeze_approval_hamming.py [output directory]
"""

import sys
import time
from pathlib import Path

import numpy as np

from electionmap.approval import isomorphic_hamming_distance
from electionmap.core import DistanceMatrix
from electionmap.datasets import approval_mix_entries, generate_approval_dataset
from electionmap.io import format_distance_csv, format_timing_csv

M, N, SEED = 10, 50, 2024


def main(argv):
    out = Path(argv[1]) if len(argv) > 1 else Path(__file__).resolve().parents[1] / "tests" / "data"
    items = generate_approval_dataset(approval_mix_entries(), M, N, SEED)
    k = len(items)
    values, seconds = np.zeros((k, k)), np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            start = time.perf_counter()
            values[i, j] = values[j, i] = isomorphic_hamming_distance(items[i].election, items[j].election, max_candidates=M)
            seconds[i, j] = seconds[j, i] = time.perf_counter() - start
        print(f"row {i + 1}/{k} done", flush=True)
    labels = tuple(item.label for item in items)
    (out / "approval_mix_hamming.csv").write_text(format_distance_csv(DistanceMatrix(labels, values)))
    (out / "approval_mix_hamming_timing.csv").write_text(format_timing_csv(labels, seconds))


if __name__ == "__main__":
    main(sys.argv)
