"""Write the CSV data behind the Mandel Q, variance-map and border figures.

Usage: python scripts/figure_data.py [OUTDIR]
"""
import sys
from pathlib import Path

from osc3d.cli import main

RUNS = {
    "mandel_alpha0.csv": ["mandel", "--grid", "delta:0:pi:61", "--grid", "r:0:2:41", "--alpha-mag", "0"],
    "mandel_alpha1.csv": ["mandel", "--grid", "delta:0:pi:61", "--grid", "r:0:2:41", "--alpha-mag", "1"],
    "mandel_alpha3.csv": ["mandel", "--grid", "delta:0:pi:61", "--grid", "r:0:2:41", "--alpha-mag", "3"],
    "squeeze_map.csv": ["squeeze_map", "--grid", "phi:0:2pi:121", "--grid", "r:-2:2:81"],
    "borders.csv": ["borders", "--grid", "phi:0.01:6.27:200"],
    "wigner_fock_100.csv": ["wigner", "--state", "fock:1,0,0", "--grid", "x:-3:3:61", "--grid", "px:-3:3:61"],
}


def run(outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    for name, argv in RUNS.items():
        code = main([*argv, "--out", str(outdir / name)])
        if code:
            raise SystemExit(f"{name}: exit code {code}")
        print(f"wrote {outdir / name}")


if __name__ == "__main__":
    run(Path(sys.argv[1] if len(sys.argv) > 1 else "results/figures"))
