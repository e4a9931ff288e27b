"""Run the three reference experiments and write traces, summaries and charts.

    python scripts/run_experiments.py --seed 0 --out results
"""
import argparse
import json
from pathlib import Path

from slkf.runner import run_command, summarize
from slkf.sim import BUILTIN_NAMES, builtin_scenario
from slkf.svg import render_svg

CHARTS = ("delta", "u_delta", "avg_nis")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    for name in BUILTIN_NAMES:
        out_dir = Path(args.out) / name
        out = run_command(builtin_scenario(name, args.seed), out_dir)
        for col in CHARTS:
            render_svg([col], out, out_dir / f"{col}.svg")
        print(f"{name}: {out_dir}")
        print(json.dumps(summarize(out), indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
