#!/usr/bin/env python3
"""Generate the committed synthetic microdata fixture (n = 1,769).

The real training-program microdata behind the published point bounds is
not public, so the test suite ships a synthetic stand-in.  Cell counts are
chosen so the sample proportions sit as close as integer counts allow to
the moment vector recovered by inverting the published bound values
(see tests/_oracles.py for the inversion), records get one of eight course
labels round-robin within each cell so every stratum mirrors the pooled
composition, and the row order is shuffled with a fixed seed.

Running this script rewrites tests/data/table_mirror_n1769.csv in place;
the output is deterministic.
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

import numpy as np

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "tests"))

from _oracles import derive_table_moments  # noqa: E402

OUT_PATH = REPO / "tests" / "data" / "table_mirror_n1769.csv"
N = 1769
N_TREATED = 884
TREATED_SELECTION_RATE = 0.6068
N_STRATA = 8
SHUFFLE_SEED = 20260808


def build_rows() -> list[tuple[str, int, int, str]]:
    m = derive_table_moments()
    n_control = N - N_TREATED

    s1_d1 = round(N_TREATED * TREATED_SELECTION_RATE)
    s1_d0 = round(n_control * m.p_s1_d0 / m.p_s1_d1 * TREATED_SELECTION_RATE)
    y1_s1_d1 = round(s1_d1 * m.p_y1_s1d1)
    y0_s1_d0 = round(s1_d0 * m.p_y0_s1d0)

    cells = [
        # (y, s, d, count)
        ("1", 1, 1, y1_s1_d1),
        ("0", 1, 1, s1_d1 - y1_s1_d1),
        ("", 0, 1, N_TREATED - s1_d1),
        ("1", 1, 0, s1_d0 - y0_s1_d0),
        ("0", 1, 0, y0_s1_d0),
        ("", 0, 0, n_control - s1_d0),
    ]
    assert sum(count for *_, count in cells) == N

    rows = []
    for y, s, d, count in cells:
        for i in range(count):
            stratum = f"c{i % N_STRATA + 1}"
            rows.append((y, s, d, stratum))

    rng = np.random.default_rng(SHUFFLE_SEED)
    order = rng.permutation(len(rows))
    return [rows[i] for i in order]


def main() -> None:
    rows = build_rows()
    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    with OUT_PATH.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["y", "s", "d", "course"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {OUT_PATH}")


if __name__ == "__main__":
    main()
