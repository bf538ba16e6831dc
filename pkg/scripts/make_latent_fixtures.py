#!/usr/bin/env python3
"""Regenerate the committed latent-joint fixture records.

One line per record: 16 cell masses in canonical order then the treated
share, 17 significant digits each.  The records are the six
endpoint-attaining joints for the fixture moment vector, in
(assumption set, side) order.  Deterministic.
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "tests"))

from _oracles import derive_table_moments  # noqa: E402

from pocbounds import ASSUMPTION_ORDER, construct_bound_distribution  # noqa: E402
from pocbounds.latent import Side  # noqa: E402

OUT_PATH = REPO / "tests" / "data" / "latent_fixtures.txt"


def main() -> None:
    m = derive_table_moments()
    lines = []
    for a in ASSUMPTION_ORDER:
        for side in (Side.LOWER, Side.UPPER):
            lines.append(construct_bound_distribution(m, a, side).to_fixture_line())
    OUT_PATH.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} records to {OUT_PATH}")


if __name__ == "__main__":
    main()
