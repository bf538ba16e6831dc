#!/usr/bin/env python3
"""Run the full pipeline on the committed synthetic fixture.

Writes the JSON report and the SVG chart to scripts/out/ and prints the
text summary.  Equivalent to:

    pocbounds --input tests/data/table_mirror_n1769.csv \
        --y-col y --s-col s --d-col d --stratum-col course \
        --seed 7 --reps 1000 --plot-out scripts/out/bounds.svg
"""

from __future__ import annotations

from pathlib import Path

from pocbounds.cli import RunConfig, emit_plot_data, run_analysis

REPO = Path(__file__).resolve().parents[1]
OUT_DIR = REPO / "scripts" / "out"


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    cfg = RunConfig(
        input_path=str(REPO / "tests" / "data" / "table_mirror_n1769.csv"),
        y_col="y",
        s_col="s",
        d_col="d",
        stratum_col="course",
        reps=1000,
        level=0.90,
        seed=7,
    )
    report = run_analysis(cfg)
    report_path = OUT_DIR / "report.json"
    report_path.write_text(report.to_json(), encoding="utf-8")
    svg_path, sidecar_path = emit_plot_data(report, OUT_DIR / "bounds.svg")
    print(f"report: {report_path}")
    print(f"chart:  {svg_path} (+ {sidecar_path.name})")
    for name, entry in sorted(report.unconditional.items()):
        print(
            f"{name}: [{entry['lb']:.3f}, {entry['ub']:.3f}]"
            f"  ci_lb=[{entry['ci_lb'][0]:.3f}, {entry['ci_lb'][1]:.3f}]"
            f"  ci_ub=[{entry['ci_ub'][0]:.3f}, {entry['ci_ub'][1]:.3f}]"
        )


if __name__ == "__main__":
    main()
